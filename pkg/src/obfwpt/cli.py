"""Command-line entry point: config in, CSV out."""
import argparse
import dataclasses
import logging
import os
import sys

from .config import ConfigError, expand_curves, load_config
from .sweep import CsvWriteError, SweepError, emit_csv, run_sweep

log = logging.getLogger("obfwpt")

EXIT_CONFIG = 2
EXIT_SWEEP = 3
EXIT_OUTPUT = 4


def build_parser():
    p = argparse.ArgumentParser(
        prog="obfwpt",
        description="Outage of opportunistic beamforming with wirelessly powered 1-bit feedback.",
    )
    p.add_argument("--config", required=True, help="flat YAML config file")
    p.add_argument("--out", default="-",
                   help="CSV output file (default stdout); a directory when the config "
                        "lists several N, L or e_dc values")
    p.add_argument("--trials", type=int, help="override trials per point")
    p.add_argument("--seed", type=int, help="override base seed")
    p.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")

    try:
        params = load_config(args.config)
        overrides = {k: getattr(args, k) for k in ("trials", "seed") if getattr(args, k) is not None}
        if overrides:
            params = dataclasses.replace(params, **overrides)
        curves = expand_curves(params)
    except (ConfigError, OSError) as exc:
        print(f"obfwpt: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if len(curves) > 1 and args.out == "-":
        print("obfwpt: config error: several curves need --out DIR", file=sys.stderr)
        return EXIT_CONFIG

    for label, curve in curves:
        log.info("running curve %s", label)
        try:
            rows = run_sweep(curve, workers=args.workers)
        except (SweepError, ValueError, ArithmeticError) as exc:
            print(f"obfwpt: sweep error ({label}): {exc}", file=sys.stderr)
            return EXIT_SWEEP
        try:
            if args.out == "-":
                emit_csv(rows, sys.stdout)
            else:
                path = args.out
                if len(curves) > 1:
                    os.makedirs(args.out, exist_ok=True)
                    path = os.path.join(args.out, f"{label}.csv")
                with open(path, "w", encoding="utf-8", newline="") as fh:
                    emit_csv(rows, fh)
        except OSError as exc:
            print(f"obfwpt: output error: {exc}", file=sys.stderr)
            return EXIT_OUTPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
