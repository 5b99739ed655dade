"""Thin masks to 1-pixel skeletons and turn them into scribbles.

The thinning alternates the two Zhang-Suen sub-iterations. Candidates for
deletion are found on a frozen snapshot of the mask using the classic
conditions: 2 <= B(p) <= 6 foreground neighbors, exactly one 0->1 transition
A(p) around the ring, and the directional neighbor products (N*E*S and
E*S*W for the first sub-iteration, N*E*W and N*S*W for the second). Pixels
outside the frame count as background.

Committing all candidates at once can erase small blobs outright (an
isolated 2x2 square meets every condition at all four pixels), which would
change the number of components. So candidates are committed one at a time
in row-major order, and each deletion is skipped if, at that moment, the
pixel's remaining foreground neighbors do not form exactly one connected
group. That check makes preservation of the 8-connected component count
unconditional, at the cost of an occasional extra pixel in the skeleton.
"""

from __future__ import annotations

import numpy as np

from .core import BinaryMask, ScribbleSet

# ring order N, NE, E, SE, S, SW, W, NW as (dy, dx)
_RING = ((-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1))

# which ring positions touch each other inside the 3x3 neighborhood:
# consecutive positions always do, and cardinals also touch across a corner
_RING_ADJ = [
    ((i, (i + 1) % 8)) for i in range(8)
] + [(0, 2), (2, 4), (4, 6), (6, 0)]


def skeletonize(mask: BinaryMask) -> BinaryMask:
    """Iterative thinning; stops when a full pass deletes nothing."""
    img = mask.data.astype(np.uint8).copy()
    while True:
        deleted = _subiteration(img, first=True)
        deleted |= _subiteration(img, first=False)
        if not deleted:
            break
    return BinaryMask(img)


def _subiteration(img: np.ndarray, first: bool) -> bool:
    cand = _candidates(img, first)
    if cand.size == 0:
        return False
    any_deleted = False
    for y, x in cand:
        if _ring_groups(img, int(y), int(x)) == 1:
            img[y, x] = 0
            any_deleted = True
    return any_deleted


def _candidates(img: np.ndarray, first: bool) -> np.ndarray:
    """Row-major (y, x) pixels meeting the thinning conditions on a snapshot."""
    p = np.pad(img, 1)
    ring = [p[1 + dy:1 + dy + img.shape[0], 1 + dx:1 + dx + img.shape[1]]
            for dy, dx in _RING]
    b = np.zeros(img.shape, dtype=np.int32)
    for r in ring:
        b += r
    a = np.zeros(img.shape, dtype=np.int32)
    for i in range(8):
        a += (ring[i] == 0) & (ring[(i + 1) % 8] == 1)

    n, e, s, w = ring[0], ring[2], ring[4], ring[6]
    cond = (img == 1) & (b >= 2) & (b <= 6) & (a == 1)
    if first:
        cond &= ((n & e & s) == 0) & ((e & s & w) == 0)
    else:
        cond &= ((n & e & w) == 0) & ((n & s & w) == 0)
    return np.argwhere(cond)


def _ring_groups(img: np.ndarray, y: int, x: int) -> int:
    """Number of 8-connected groups the pixel's foreground neighbors form."""
    h, w = img.shape
    on = []
    for i, (dy, dx) in enumerate(_RING):
        ny, nx = y + dy, x + dx
        if 0 <= ny < h and 0 <= nx < w and img[ny, nx]:
            on.append(i)
    if not on:
        return 0
    on_set = set(on)
    seen = set()
    groups = 0
    adj = {i: [] for i in on}
    for i, j in _RING_ADJ:
        if i in on_set and j in on_set:
            adj[i].append(j)
            adj[j].append(i)
    for start in on:
        if start in seen:
            continue
        groups += 1
        stack = [start]
        while stack:
            node = stack.pop()
            if node in seen:
                continue
            seen.add(node)
            stack.extend(adj[node])
    return groups


def mask_to_scribbles(skeleton: BinaryMask) -> ScribbleSet:
    """Every skeleton pixel becomes a foreground scribble, row-major order."""
    ys, xs = np.nonzero(skeleton.data)
    if ys.size == 0:
        raise ValueError("skeleton is empty, no scribbles to extract")
    points = tuple((int(x), int(y), 1) for y, x in zip(ys, xs))
    return ScribbleSet(points=points, height=skeleton.height, width=skeleton.width)
