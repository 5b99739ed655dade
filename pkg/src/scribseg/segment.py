"""Turn distance maps into segmentations and score them.

The interactive loop is: normalize the map to [0, 1] once, then re-threshold
as the user drags the slider. Pixels at or below the threshold are selected,
so t = 0 yields exactly the zero-distance basin around the scribbles and the
scribbles themselves are always part of the result.

For evaluation, dice_sweep samples a fixed threshold grid (256 steps by
default, matching an 8-bit slider) and finds the best Dice against a ground
truth mask. dice_sweep_exhaustive scans every distinct map value instead and
serves as the reference for grid sweeps.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import BinaryMask, DistanceMap


@dataclass(frozen=True)
class DiceCurve:
    """Sampled threshold -> Dice function with its maximum."""

    thresholds: np.ndarray
    dice: np.ndarray
    best_threshold: float
    best_dice: float

    def __post_init__(self):
        t = np.asarray(self.thresholds, dtype=np.float64)
        d = np.asarray(self.dice, dtype=np.float64)
        if t.shape != d.shape or t.ndim != 1 or t.size < 1:
            raise ValueError("thresholds and dice must be 1-D and equal length")
        if np.any(np.diff(t) < 0):
            raise ValueError("thresholds must be sorted ascending")
        object.__setattr__(self, "thresholds", t)
        object.__setattr__(self, "dice", d)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["threshold", "dice"])
        for t, d in zip(self.thresholds, self.dice):
            writer.writerow([f"{t:.8f}", f"{d:.8f}"])
        return buf.getvalue()

    def summary_json(self) -> str:
        return json.dumps(
            {"best_threshold": self.best_threshold, "best_dice": self.best_dice})

    def write(self, csv_path) -> None:
        """Write the curve CSV plus its JSON sidecar next to it."""
        path = Path(csv_path)
        path.write_text(self.to_csv())
        path.with_suffix(".json").write_text(self.summary_json())

    @classmethod
    def from_csv(cls, text: str) -> "DiceCurve":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or rows[0] != ["threshold", "dice"]:
            raise ValueError("curve CSV must start with 'threshold,dice'")
        t = np.array([float(r[0]) for r in rows[1:]])
        d = np.array([float(r[1]) for r in rows[1:]])
        best = int(np.argmax(d))
        return cls(t, d, best_threshold=float(t[best]), best_dice=float(d[best]))


def normalize_map(dmap: DistanceMap) -> DistanceMap:
    """Rescale to [0, 1] via (v - min) / (max - min); constant maps go to 0."""
    data = dmap.data.astype(np.float64)
    lo = float(data.min())
    hi = float(data.max())
    if hi == lo:
        out = np.zeros_like(data)
    else:
        out = (data - lo) / (hi - lo)
    return DistanceMap(out.astype(np.float32), normalized=True)


def threshold_segment(dmap: DistanceMap, t: float) -> BinaryMask:
    """Select pixels with normalized distance <= t."""
    if not dmap.normalized:
        raise ValueError("threshold_segment needs a normalized map")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {t}")
    # compare in float64 so grid sweeps and single thresholds agree exactly
    return BinaryMask(dmap.data.astype(np.float64) <= float(t))


def dice(a: BinaryMask, b: BinaryMask) -> float:
    """Dice overlap 2|A n B| / (|A| + |B|); two empty masks count as 1.0."""
    if a.data.shape != b.data.shape:
        raise ValueError(f"mask shapes differ: {a.data.shape} vs {b.data.shape}")
    total = int(a.data.sum()) + int(b.data.sum())
    if total == 0:
        return 1.0
    inter = int(np.count_nonzero(a.data & b.data))
    return 2.0 * inter / total


def _sorted_prefix(dmap: DistanceMap, gt: BinaryMask):
    """Sort map values once; prefix sums make each threshold O(log N)."""
    if dmap.data.shape != gt.data.shape:
        raise ValueError(
            f"map is {dmap.data.shape}, ground truth is {gt.data.shape}")
    values = dmap.data.ravel().astype(np.float64)
    order = np.argsort(values, kind="stable")
    v_sorted = values[order]
    gt_sorted = gt.data.ravel()[order].astype(np.int64)
    cum_gt = np.cumsum(gt_sorted)
    return v_sorted, cum_gt, int(gt.data.sum())


def _dice_at(thresholds: np.ndarray, v_sorted, cum_gt, gt_total) -> np.ndarray:
    n_sel = np.searchsorted(v_sorted, thresholds, side="right")
    inter = np.where(n_sel > 0, cum_gt[np.maximum(n_sel - 1, 0)], 0)
    denom = n_sel + gt_total
    out = np.where(denom > 0, 2.0 * inter / np.maximum(denom, 1), 1.0)
    return out.astype(np.float64)


def dice_sweep(dmap: DistanceMap, gt: BinaryMask, n_steps: int = 256,
               workers: int = 1) -> DiceCurve:
    """Dice at n_steps evenly spaced thresholds over [0, 1].

    Returns the full curve and the best point; ties resolve to the smallest
    threshold (the more conservative segmentation). workers > 1 splits the
    threshold grid across a thread pool; chunks are reassembled in grid
    order, so the result is identical to the sequential sweep.
    """
    if not dmap.normalized:
        raise ValueError("dice_sweep needs a normalized map")
    if n_steps < 2:
        raise ValueError(f"n_steps must be >= 2, got {n_steps}")
    pre = _sorted_prefix(dmap, gt)
    thresholds = np.arange(n_steps, dtype=np.float64) / (n_steps - 1)
    if workers > 1:
        chunks = np.array_split(thresholds, workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _dice_at(c, *pre), chunks))
        scores = np.concatenate(parts)
    else:
        scores = _dice_at(thresholds, *pre)
    best = int(np.argmax(scores))  # argmax takes the first (smallest t) on ties
    return DiceCurve(thresholds, scores,
                     best_threshold=float(thresholds[best]),
                     best_dice=float(scores[best]))


def dice_sweep_exhaustive(dmap: DistanceMap, gt: BinaryMask) -> DiceCurve:
    """Dice at every distinct map value; the reference for grid sweeps.

    Every achievable segmentation of the map appears at one of these
    thresholds, so the best here is the true optimum over all thresholds.
    """
    if not dmap.normalized:
        raise ValueError("dice_sweep_exhaustive needs a normalized map")
    v_sorted, cum_gt, gt_total = _sorted_prefix(dmap, gt)
    thresholds = np.unique(v_sorted)
    scores = _dice_at(thresholds, v_sorted, cum_gt, gt_total)
    best = int(np.argmax(scores))
    return DiceCurve(thresholds, scores,
                     best_threshold=float(thresholds[best]),
                     best_dice=float(scores[best]))
