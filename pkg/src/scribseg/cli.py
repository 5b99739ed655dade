"""Command-line entry point.

Each subcommand is a thin wrapper over one library operation. Exit codes:
0 success, 1 usage error, 2 data error (unreadable/malformed files, failed
validation). Data and result paths go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import core, distance, harness, preprocess, segment, skeleton


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage problems; the CLI contract wants 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="scribseg",
                     description="Scribble-based segmentation toolbox")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", help="L1-normalize spectra", parents=[])
    p.add_argument("input")
    p.add_argument("output")

    p = sub.add_parser("features", help="PCA channel reduction")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("input")
    p.add_argument("output")

    p = sub.add_parser("rgb", help="reconstruct a 3-channel RGB stack")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--weights", help="band weights JSON file")

    p = sub.add_parser("geodesic", help="geodesic distance map from scribbles")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--scribbles", required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--exact", action="store_true",
                   help="use the exact solver instead of raster sweeps")
    p.add_argument("--iters", type=int, default=4,
                   help="maximum sweep pairs for the raster solver")

    p = sub.add_parser("euclid", help="Euclidean distance map from scribbles")
    p.add_argument("output")
    p.add_argument("--scribbles", required=True)
    p.add_argument("--size", required=True, metavar="HxW")

    p = sub.add_parser("sweep", help="Dice-vs-threshold curve against a mask")
    p.add_argument("map")
    p.add_argument("output")
    p.add_argument("--gt", required=True)
    p.add_argument("--steps", type=int, default=256)

    p = sub.add_parser("skeletonize", help="thin a mask into scribbles JSON")
    p.add_argument("input")
    p.add_argument("output")

    p = sub.add_parser("eval", help="batch evaluation over a dataset directory")
    p.add_argument("dataset")
    p.add_argument("outdir")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=256)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timing", action="store_true",
                   help="record wall-clock runtimes (reports stop being "
                        "byte-reproducible)")

    p = sub.add_parser("phantom", help="generate a synthetic dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--noise", type=float, default=0.3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", default="128x128", metavar="HxW")
    p.add_argument("--channels", type=int, default=8)

    p = sub.add_parser("serve", help="run the interactive HTTP service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--data", help="directory of static UI assets to serve at /")

    return parser


def _parse_size(text: str):
    try:
        h, w = text.lower().split("x")
        return int(h), int(w)
    except ValueError as exc:
        raise ValueError(f"--size must look like HxW, got {text!r}") from exc


def _read_scribbles_for(path, height, width):
    return core.read_scribbles(path, height=height, width=width)


def _cmd_normalize(args) -> int:
    stack = core.read_channel_stack(args.input)
    core.write_channel_stack(preprocess.l1_normalize(stack), args.output)
    print(args.output)
    return 0


def _cmd_features(args) -> int:
    stack = core.read_channel_stack(args.input)
    core.write_channel_stack(preprocess.pca_features(stack, args.k), args.output)
    print(args.output)
    return 0


def _cmd_rgb(args) -> int:
    stack = core.read_channel_stack(args.input)
    if args.weights:
        weights = preprocess.BandWeights.from_json(Path(args.weights).read_text())
    else:
        weights = None
    core.write_channel_stack(preprocess.rgb_reconstruct(stack, weights), args.output)
    print(args.output)
    return 0


def _cmd_geodesic(args) -> int:
    stack = core.read_channel_stack(args.input)
    seeds = _read_scribbles_for(args.scribbles, stack.height, stack.width)
    params = distance.DistanceParams(lam=args.lam, max_iterations=args.iters)
    solver = distance.geodesic_exact if args.exact else distance.geodesic_raster
    core.write_distance_map(solver(stack, seeds, params), args.output)
    print(args.output)
    return 0


def _cmd_euclid(args) -> int:
    height, width = _parse_size(args.size)
    seeds = _read_scribbles_for(args.scribbles, height, width)
    core.write_distance_map(distance.euclidean_edt(seeds, height, width),
                            args.output)
    print(args.output)
    return 0


def _cmd_sweep(args) -> int:
    dmap = segment.normalize_map(core.read_distance_map(args.map))
    gt = core.read_mask_pgm(args.gt)
    curve = segment.dice_sweep(dmap, gt, n_steps=args.steps)
    curve.write(args.output)
    print(args.output)
    return 0


def _cmd_skeletonize(args) -> int:
    mask = core.read_mask_pgm(args.input)
    scribbles = skeleton.mask_to_scribbles(skeleton.skeletonize(mask))
    core.write_scribbles(scribbles, args.output)
    print(args.output)
    return 0


def _cmd_eval(args) -> int:
    report = harness.run_batch(
        args.dataset, args.outdir,
        methods=harness.default_methods(lam=args.lam),
        n_steps=args.steps, jobs=args.jobs, timing=args.timing,
    )
    for image_id in report.skipped:
        print(f"skipped {image_id}", file=sys.stderr)
    print(str(Path(args.outdir) / "report.csv"))
    return 0


def _cmd_phantom(args) -> int:
    height, width = _parse_size(args.size)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for i in range(args.count):
        hyper, _, gt = harness.make_phantom(
            height, width, args.channels, args.noise, seed=args.seed + i)
        image_id = f"phantom_{args.seed + i:03d}"
        core.write_channel_stack(hyper, out / f"{image_id}.cst")
        core.write_mask_pgm(gt, out / f"{image_id}.gt.pgm")
        print(out / f"{image_id}.cst")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(static_dir=args.data)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


_COMMANDS = {
    "normalize": _cmd_normalize,
    "features": _cmd_features,
    "rgb": _cmd_rgb,
    "geodesic": _cmd_geodesic,
    "euclid": _cmd_euclid,
    "sweep": _cmd_sweep,
    "skeletonize": _cmd_skeletonize,
    "eval": _cmd_eval,
    "phantom": _cmd_phantom,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"scribseg {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
