"""Command-line entry point: ``sweep``, ``curve`` and ``validate``."""

import argparse
import logging
import sys
from dataclasses import replace

import numpy as np

from .channel import Scheme
from .experiments import FIG2_CONFIG, emit_csv, load_config, preset, run_sweep
from .validation import validate
from .wiretap import DEFAULT_GRID, DEFAULT_MC_SAMPLES, build_curve

log = logging.getLogger("secrecy_outage")


def _sweep(args):
    if args.config:
        spec, _, _ = load_config(args.config)
        if spec is None:
            raise SystemExit(f"{args.config} describes a single scenario; add 'axis' and 'points' or a 'preset'")
    else:
        spec = preset(args.preset)
    changes = {}
    if args.trials is not None:
        changes["trials"] = args.trials
    if args.seed is not None:
        changes["seed"] = args.seed
    if changes:
        spec = replace(spec, **changes)

    def progress(row):
        log.info("%s=%g %s M=%d N=%d p_out=%.4f", row.axis, row.value, row.scheme, row.M, row.N, row.p_out)

    result = run_sweep(spec, workers=args.workers, progress=progress)
    emit_csv(result, args.out)
    log.info("wrote %d rows to %s (%d curve builds)", len(result.rows), args.out, result.curve_builds)
    return 0


def _curve(args):
    if args.config:
        _, config, raw = load_config(args.config)
        grid = int(raw.get("grid_resolution", DEFAULT_GRID))
        mc_samples = int(float(raw.get("mc_samples", DEFAULT_MC_SAMPLES)))
        seed = int(raw.get("seed", args.seed))
    else:
        config, grid, mc_samples, seed = FIG2_CONFIG, 101, DEFAULT_MC_SAMPLES, args.seed
    rng = np.random.default_rng(seed) if config.scheme is Scheme.RELAY else None
    curve = build_curve(config, grid_resolution=grid, mc_samples=mc_samples, rng=rng)
    with open(args.out, "w") as fh:
        fh.write(curve.to_text())
    log.info("wrote %d-point %s curve to %s", grid, curve.method.value, args.out)
    return 0


def _validate(args):
    report = validate(args.level)
    for check in report:
        print(check.line())
    failed = [c for c in report if not c.passed]
    print(f"{len(report) - len(failed)}/{len(report)} checks passed")
    return 1 if failed else 0


def build_parser():
    parser = argparse.ArgumentParser(prog="secrecy-outage", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run an outage sweep and write CSV")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="flat key = value sweep file")
    src.add_argument("--preset", help="built-in figure preset, e.g. fig4")
    p.add_argument("--out", required=True)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, help="thread count (default: $SECRECY_OUTAGE_WORKERS or 1)")
    p.set_defaults(func=_sweep)

    p = sub.add_parser("curve", help="dump the expected wiretap capacity curve")
    p.add_argument("--config", help="scenario file; defaults to the fig2 scenario")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=1)
    p.set_defaults(func=_curve)

    p = sub.add_parser("validate", help="run the built-in check suite")
    p.add_argument("--level", choices=("fast", "full"), default="fast")
    p.set_defaults(func=_validate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
