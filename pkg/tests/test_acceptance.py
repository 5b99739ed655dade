"""Acceptance suite: one test per release criterion, one printed line each.

Run with `pytest -s tests/test_acceptance.py` to watch the lines appear;
without -s they still show in pytest's captured output on failure.
"""

import time

import numpy as np
import pytest

from scribseg.core import BinaryMask, ChannelStack, DistanceMap, ScribbleSet
from scribseg.distance import (
    DistanceParams,
    euclidean_edt,
    geodesic_exact,
    geodesic_raster,
)
from scribseg.harness import (
    default_methods,
    evaluate_image,
    make_phantom,
    run_batch,
)
from scribseg.preprocess import rgb_reconstruct
from scribseg.segment import (
    dice,
    dice_sweep,
    dice_sweep_exhaustive,
    normalize_map,
    threshold_segment,
)
from scribseg.skeleton import skeletonize

from conftest import random_mask, random_scribbles, random_stack
from test_skeleton import count_components_8


def check(num, description, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] criterion {num}: {description} {detail}".rstrip())
    assert ok, f"criterion {num} failed: {description} {detail}"


# ---------------------------------------------------------------------------
# 1. raster solver converges to the exact oracle
# ---------------------------------------------------------------------------

def test_criterion_1_geodesic_oracle_equivalence():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = 0.0
    n = 102
    for trial in range(n):
        h = int(rng.integers(4, 49))
        w = int(rng.integers(4, 49))
        c = int(rng.integers(1, 9))
        lam = (0.0, 0.5, 1.0)[trial % 3]
        stack = random_stack(rng, h, w, c)
        seeds = random_scribbles(rng, h, w, int(rng.integers(1, 6)))
        params = DistanceParams(lam=lam, max_iterations=200,
                                convergence_epsilon=1e-9)
        exact = geodesic_exact(stack, seeds, params).data.astype(np.float64)
        raster = geodesic_raster(stack, seeds, params).data.astype(np.float64)
        worst = max(worst, float(np.abs(exact - raster).max()))
    elapsed = time.perf_counter() - start
    check(1, "geodesic raster matches exact oracle",
          worst <= 1e-4 and elapsed < 60.0,
          f"(max abs err {worst:.2e} over {n} instances, {elapsed:.1f}s)")


# ---------------------------------------------------------------------------
# 2. exact EDT against brute force
# ---------------------------------------------------------------------------

def test_criterion_2_edt_oracle_equivalence():
    rng = np.random.default_rng(202)
    start = time.perf_counter()
    worst = 0.0
    n = 100
    for _ in range(n):
        h = int(rng.integers(1, 33))
        w = int(rng.integers(1, 33))
        seeds = random_scribbles(rng, h, w, int(rng.integers(1, 9)))
        got = euclidean_edt(seeds, h, w).data.astype(np.float64)
        fg = seeds.foreground_xy().astype(np.float64)
        ys, xs = np.mgrid[0:h, 0:w]
        want = np.sqrt(((xs[:, :, None] - fg[:, 0]) ** 2
                        + (ys[:, :, None] - fg[:, 1]) ** 2).min(axis=2))
        worst = max(worst, float(np.abs(got - want).max()))
    elapsed = time.perf_counter() - start
    check(2, "euclidean EDT matches brute force",
          worst <= 1e-6 and elapsed < 10.0,
          f"(max abs err {worst:.2e} over {n} seed sets, {elapsed:.1f}s)")


# ---------------------------------------------------------------------------
# 3. scale property of the pure geodesic term
# ---------------------------------------------------------------------------

def test_criterion_3_scale_property():
    rng = np.random.default_rng(303)
    worst_rel = 0.0
    best_dice_stable = True
    for _ in range(8):
        h = w = 24
        stack = random_stack(rng, h, w, 4)
        seeds = random_scribbles(rng, h, w, 3)
        gt = random_mask(rng, h, w)
        params = DistanceParams(lam=1.0)
        base = geodesic_exact(stack, seeds, params).data.astype(np.float64)
        base_best = dice_sweep_exhaustive(
            normalize_map(DistanceMap(base.astype(np.float32))), gt).best_dice
        for a in (0.5, 2.0, 10.0):
            scaled_stack = ChannelStack(
                (stack.data.astype(np.float64) * a).astype(np.float32))
            got = geodesic_exact(scaled_stack, seeds, params) \
                .data.astype(np.float64)
            want = base * a
            rel = np.abs(got - want) / np.maximum(np.abs(want), 1e-12)
            worst_rel = max(worst_rel, float(rel.max()))
            scaled_best = dice_sweep_exhaustive(
                normalize_map(DistanceMap(got.astype(np.float32))),
                gt).best_dice
            if scaled_best != base_best:
                best_dice_stable = False
    check(3, "lam=1 distances scale linearly and best dice is unchanged",
          worst_rel <= 1e-5 and best_dice_stable,
          f"(max rel err {worst_rel:.2e})")


# ---------------------------------------------------------------------------
# 4. 256-step sweep vs exhaustive distinct-value scan
# ---------------------------------------------------------------------------

def test_criterion_4_sweep_oracle():
    rng = np.random.default_rng(404)
    worst_gap = 0.0
    n = 100
    for _ in range(n):
        data = rng.random((32, 32)).astype(np.float32)
        m = normalize_map(DistanceMap(data))
        t_star = float(rng.uniform(0.2, 0.8))
        gt_arr = m.data.astype(np.float64) <= t_star
        flips = rng.random((32, 32)) < 0.1
        gt = BinaryMask(np.logical_xor(gt_arr, flips))
        if gt.count() == 0:
            continue
        grid_best = dice_sweep(m, gt, n_steps=256).best_dice
        exact_best = max(
            dice(threshold_segment(m, float(t)), gt)
            for t in np.unique(m.data.astype(np.float64)))
        worst_gap = max(worst_gap, exact_best - grid_best)
    check(4, "256-grid best dice within 0.01 of exhaustive best",
          worst_gap <= 0.01, f"(worst gap {worst_gap:.4f} over {n} instances)")


# ---------------------------------------------------------------------------
# 5. phantom ordering reproduces the qualitative result
# ---------------------------------------------------------------------------

def test_criterion_5_phantom_ordering():
    start = time.perf_counter()
    methods = default_methods()
    scores = {m.name: [] for m in methods}
    for seed in range(50):
        hyper, features, gt = make_phantom(128, 128, 8, noise_sigma=0.3,
                                           seed=seed)
        variants = {"hyperspectral": hyper, "features": features,
                    "rgb": rgb_reconstruct(hyper)}
        _, rows = evaluate_image(variants, gt, methods, image_id=str(seed))
        for row in rows:
            scores[row.method].append(row.best_dice)
    means = {name: float(np.mean(vals)) for name, vals in scores.items()}

    zero_noise_ok = True
    for seed in (0, 1, 2):
        hyper, features, gt = make_phantom(128, 128, 8, noise_sigma=0.0,
                                           seed=seed)
        variants = {"hyperspectral": hyper, "features": features,
                    "rgb": rgb_reconstruct(hyper)}
        _, rows = evaluate_image(variants, gt, methods, image_id=str(seed))
        for row in rows:
            if row.method != "euclidean" and row.best_dice != 1.0:
                zero_noise_ok = False
    elapsed = time.perf_counter() - start

    margin_fh = means["features"] - means["hyperspectral"]
    margin_he = means["hyperspectral"] - means["euclidean"]
    check(5, "phantom ordering features >= hyperspectral >= euclidean",
          margin_fh >= 0.02 and margin_he >= 0.02 and zero_noise_ok
          and elapsed < 300.0,
          f"(margins {margin_fh:.3f}/{margin_he:.3f}, "
          f"means {means['features']:.3f}/{means['hyperspectral']:.3f}/"
          f"{means['euclidean']:.3f}, zero-noise perfect={zero_noise_ok}, "
          f"{elapsed:.0f}s)")


# ---------------------------------------------------------------------------
# 6. skeleton properties
# ---------------------------------------------------------------------------

def test_criterion_6_skeleton_properties():
    rng = np.random.default_rng(606)
    subset_ok = count_ok = idempotent_ok = True
    n = 200
    for _ in range(n):
        h = int(rng.integers(4, 65))
        w = int(rng.integers(4, 65))
        mask = random_mask(rng, h, w, density=float(rng.uniform(0.3, 0.7)))
        skel = skeletonize(mask)
        if not np.all(skel.data <= mask.data):
            subset_ok = False
        if count_components_8(skel.data) != count_components_8(mask.data):
            count_ok = False
        if skeletonize(skel) != skel:
            idempotent_ok = False
    check(6, "skeleton subset/component-count/idempotence on random masks",
          subset_ok and count_ok and idempotent_ok,
          f"(subset={subset_ok} count={count_ok} idem={idempotent_ok}, "
          f"{n} masks)")


# ---------------------------------------------------------------------------
# 7. interactive performance
# ---------------------------------------------------------------------------

def test_criterion_7_performance():
    rng = np.random.default_rng(707)
    stack = random_stack(rng, 512, 512, 16)
    seeds = ScribbleSet(points=tuple((x, 256, 1) for x in range(200, 312)),
                        height=512, width=512)
    params = DistanceParams(lam=1.0, max_iterations=4,
                            convergence_epsilon=1e-12)
    start = time.perf_counter()
    dmap = geodesic_raster(stack, seeds, params)
    solve_s = time.perf_counter() - start

    norm = normalize_map(dmap)
    start = time.perf_counter()
    threshold_segment(norm, 0.5)
    rethreshold_ms = (time.perf_counter() - start) * 1000.0
    check(7, "512x512x16 raster < 2 s and re-threshold < 10 ms",
          solve_s < 2.0 and rethreshold_ms < 10.0,
          f"(solve {solve_s:.2f}s, re-threshold {rethreshold_ms:.2f}ms)")


# ---------------------------------------------------------------------------
# 8. determinism
# ---------------------------------------------------------------------------

def test_criterion_8_determinism(tmp_path):
    from scribseg.core import write_channel_stack, write_mask_pgm

    data = tmp_path / "data"
    data.mkdir()
    for i in range(3):
        hyper, _, gt = make_phantom(32, 32, 6, noise_sigma=0.25, seed=40 + i)
        write_channel_stack(hyper, data / f"p{i}.cst")
        write_mask_pgm(gt, data / f"p{i}.gt.pgm")

    run_batch(data, tmp_path / "a")
    run_batch(data, tmp_path / "b")
    run_batch(data, tmp_path / "c", jobs=3)
    files = sorted(p.name for p in (tmp_path / "a").iterdir())
    batch_ok = True
    for name in files:
        blob = (tmp_path / "a" / name).read_bytes()
        if ((tmp_path / "b" / name).read_bytes() != blob
                or (tmp_path / "c" / name).read_bytes() != blob):
            batch_ok = False

    rng = np.random.default_rng(808)
    m = normalize_map(DistanceMap(rng.random((40, 40)).astype(np.float32)))
    gt = random_mask(rng, 40, 40)
    seq = dice_sweep(m, gt, n_steps=256, workers=1)
    par = dice_sweep(m, gt, n_steps=256, workers=4)
    sweep_ok = (np.array_equal(seq.dice, par.dice)
                and seq.best_threshold == par.best_threshold
                and seq.best_dice == par.best_dice)
    check(8, "byte-identical batch reports; parallel sweep matches bitwise",
          batch_ok and sweep_ok,
          f"(batch files={len(files)}, sweeps bitwise={sweep_ok})")
