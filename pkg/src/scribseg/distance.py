"""Distance map solvers.

Three solvers share one grid model. Adjacent pixels i, j are joined by an
edge of cost

    cost(i, j) = sqrt((1 - lam) * d_spatial(i, j)^2 + lam * ||I(i) - I(j)||_2^2)

where d_spatial is 1 for axial and sqrt(2) for diagonal steps and the norm
runs over channels. The geodesic distance of a pixel is the cheapest path
cost to any foreground seed; lam = 1 is the pure image-gradient case, lam = 0
the pure spatial chamfer.

  * geodesic_exact  - priority-queue label setting (Dijkstra). Exact, used
                      as the oracle. Single-threaded.
  * geodesic_raster - iterated forward/backward raster sweeps relaxing the
                      same edge costs. Converges to the exact values; a few
                      sweep pairs are enough for interactive use.
  * euclidean_edt   - exact Euclidean distance to the nearest seed, via the
                      separable squared-distance transform. Ignores image
                      content entirely.

All solvers accumulate in float64 and hand out float32 maps.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .core import ChannelStack, DistanceMap, ScribbleSet

# stand-in for "unreached"; large enough to dominate, small enough to add to
_FAR = 1e300


@dataclass(frozen=True)
class DistanceParams:
    """Solver knobs: edge-cost mix, neighborhood and sweep termination."""

    lam: float = 1.0
    connectivity: int = 8
    max_iterations: int = 4
    convergence_epsilon: float = 1e-6

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lam must be in [0, 1], got {self.lam}")
        if self.connectivity not in (4, 8):
            raise ValueError(f"connectivity must be 4 or 8, got {self.connectivity}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.convergence_epsilon <= 0:
            raise ValueError("convergence_epsilon must be > 0")


def _check_seeds(seeds: ScribbleSet, height: int, width: int) -> np.ndarray:
    if seeds.height != height or seeds.width != width:
        raise ValueError(
            f"scribbles are for {seeds.width} x {seeds.height}, "
            f"raster is {width} x {height}")
    fg = seeds.foreground_xy()
    if fg.shape[0] == 0:
        raise ValueError("seed set has no foreground points")
    return fg


def _edge_costs(stack: ChannelStack, lam: float):
    """Directional edge-cost arrays in float64.

    right[y, x] joins (x, y)-(x+1, y); down[y, x] joins (x, y)-(x, y+1);
    ddr[y, x] joins (x, y)-(x+1, y+1); ddl[y, x] joins (x+1, y)-(x, y+1).
    """
    img = stack.data.astype(np.float64)

    def cost(a, b, spatial_sq):
        grad_sq = ((a - b) ** 2).sum(axis=2)
        return np.sqrt((1.0 - lam) * spatial_sq + lam * grad_sq)

    right = cost(img[:, 1:], img[:, :-1], 1.0)
    down = cost(img[1:, :], img[:-1, :], 1.0)
    ddr = cost(img[1:, 1:], img[:-1, :-1], 2.0)
    ddl = cost(img[1:, :-1], img[:-1, 1:], 2.0)
    return right, down, ddr, ddl


def geodesic_exact(stack: ChannelStack, seeds: ScribbleSet,
                   params: DistanceParams = DistanceParams()) -> DistanceMap:
    """Exact multi-source shortest-path distances on the pixel grid."""
    h, w = stack.height, stack.width
    fg = _check_seeds(seeds, h, w)
    right, down, ddr, ddl = _edge_costs(stack, params.lam)

    dist = np.full(h * w, np.inf)
    heap = []
    for x, y in fg:
        idx = y * w + x
        if dist[idx] != 0.0:
            dist[idx] = 0.0
            heap.append((0.0, idx))
    heapq.heapify(heap)

    diag = params.connectivity == 8
    while heap:
        d, idx = heapq.heappop(heap)
        if d > dist[idx]:
            continue
        y, x = divmod(idx, w)
        # axial
        if x + 1 < w:
            _relax(dist, heap, d + right[y, x], idx + 1)
        if x > 0:
            _relax(dist, heap, d + right[y, x - 1], idx - 1)
        if y + 1 < h:
            _relax(dist, heap, d + down[y, x], idx + w)
        if y > 0:
            _relax(dist, heap, d + down[y - 1, x], idx - w)
        if diag:
            if x + 1 < w and y + 1 < h:
                _relax(dist, heap, d + ddr[y, x], idx + w + 1)
            if x > 0 and y > 0:
                _relax(dist, heap, d + ddr[y - 1, x - 1], idx - w - 1)
            if x > 0 and y + 1 < h:
                _relax(dist, heap, d + ddl[y, x - 1], idx + w - 1)
            if x + 1 < w and y > 0:
                _relax(dist, heap, d + ddl[y - 1, x], idx - w + 1)

    return DistanceMap(dist.reshape(h, w).astype(np.float32), normalized=False)


def _relax(dist, heap, cand, idx):
    if cand < dist[idx]:
        dist[idx] = cand
        heapq.heappush(heap, (cand, idx))


def geodesic_raster(stack: ChannelStack, seeds: ScribbleSet,
                    params: DistanceParams = DistanceParams()) -> DistanceMap:
    """Iterated raster-scan relaxation of the geodesic edge costs.

    Seeds start at 0 and everything else far away; forward and backward
    sweeps relax each pixel from its causal half-neighborhood. Values only
    ever decrease, so the sweep-pair loop stops once the largest per-pixel
    change drops to convergence_epsilon (or after max_iterations pairs).
    """
    h, w = stack.height, stack.width
    fg = _check_seeds(seeds, h, w)
    right, down, ddr, ddl = _edge_costs(stack, params.lam)
    diag = params.connectivity == 8

    dist = np.full((h, w), _FAR)
    dist[fg[:, 1], fg[:, 0]] = 0.0

    for _ in range(params.max_iterations):
        before = dist.copy()
        _sweep_forward(dist, right, down, ddr, ddl, diag)
        _sweep_backward(dist, right, down, ddr, ddl, diag)
        if float((before - dist).max()) <= params.convergence_epsilon:
            break

    return DistanceMap(dist.astype(np.float32), normalized=False)


def _row_scan(t: np.ndarray, steps: np.ndarray) -> np.ndarray:
    """Left-to-right min-plus relaxation of one row.

    Computes min_k<=x (t[k] + steps[k+1] + ... + steps[x]) for every x via
    prefix sums, which equals the sequential scan up to rounding; the final
    minimum with t keeps the result exactly non-increasing.
    """
    prefix = np.empty(t.shape[0])
    prefix[0] = 0.0
    np.cumsum(steps, out=prefix[1:])
    best = np.minimum.accumulate(t - prefix)
    return np.minimum(t, best + prefix)


def _sweep_forward(dist, right, down, ddr, ddl, diag):
    h, w = dist.shape
    for y in range(h):
        t = dist[y]
        if y > 0:
            t = np.minimum(t, dist[y - 1] + down[y - 1])
            if diag and w > 1:
                t[1:] = np.minimum(t[1:], dist[y - 1, :-1] + ddr[y - 1])
                t[:-1] = np.minimum(t[:-1], dist[y - 1, 1:] + ddl[y - 1])
        if w > 1:
            dist[y] = _row_scan(t, right[y])
        else:
            dist[y] = t


def _sweep_backward(dist, right, down, ddr, ddl, diag):
    h, w = dist.shape
    for y in range(h - 1, -1, -1):
        t = dist[y]
        if y + 1 < h:
            t = np.minimum(t, dist[y + 1] + down[y])
            if diag and w > 1:
                t[:-1] = np.minimum(t[:-1], dist[y + 1, 1:] + ddr[y])
                t[1:] = np.minimum(t[1:], dist[y + 1, :-1] + ddl[y])
        if w > 1:
            dist[y] = _row_scan(t[::-1], right[y][::-1])[::-1]
        else:
            dist[y] = t


def euclidean_edt(seeds: ScribbleSet, height: int, width: int) -> DistanceMap:
    """Exact Euclidean distance to the nearest seed pixel.

    Separable two-phase transform: per-column nearest seed distance along y,
    then the lower-envelope-of-parabolas pass along each row. True L2 on the
    lattice, not a chamfer approximation.
    """
    fg = _check_seeds(seeds, height, width)

    # phase 1: |dy| to the nearest seed within each column
    dy = np.full((height, width), np.inf)
    dy[fg[:, 1], fg[:, 0]] = 0.0
    for y in range(1, height):
        np.minimum(dy[y], dy[y - 1] + 1.0, out=dy[y])
    for y in range(height - 2, -1, -1):
        np.minimum(dy[y], dy[y + 1] + 1.0, out=dy[y])

    far = float(height * height + width * width + 1)
    f = np.where(np.isfinite(dy), dy * dy, far)

    # phase 2: 1-D squared transform along each row
    out = np.empty((height, width))
    for y in range(height):
        out[y] = _edt_1d_sq(f[y])
    return DistanceMap(np.sqrt(out).astype(np.float32), normalized=False)


def _edt_1d_sq(f: np.ndarray) -> np.ndarray:
    """Exact 1-D squared distance transform (lower envelope of parabolas)."""
    n = f.shape[0]
    d = np.empty(n)
    v = np.zeros(n, dtype=np.int64)     # parabola apexes
    z = np.empty(n + 1)                 # envelope breakpoints
    k = 0
    z[0] = -np.inf
    z[1] = np.inf
    for q in range(1, n):
        s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2 * q - 2 * v[k])
        while s <= z[k]:
            k -= 1
            s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2 * q - 2 * v[k])
        k += 1
        v[k] = q
        z[k] = s
        z[k + 1] = np.inf
    k = 0
    for q in range(n):
        while z[k + 1] < q:
            k += 1
        d[q] = (q - v[k]) ** 2 + f[v[k]]
    return d
