"""Command-line surface: simulate / fake / compare / oracle / permtest.

Exit codes: 0 success, 2 config error, 3 data error, 4 numerical guard.
The --threads flag changes scheduling only; outputs are bit-identical for
any thread count.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .config import load_config
from .errors import ConfigError, DataError, GbsError, NumericalGuardError
from .pipeline import MODES, run_pipeline


def _parse_seed_overrides(pairs: list[str]) -> dict[str, int]:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"--seed-override expects K=V, got {pair!r}")
        key, value = pair.split("=", 1)
        if key not in ("ensemble", "faker", "partition"):
            raise ConfigError(f"unknown seed name {key!r}")
        try:
            out[key] = int(value)
        except ValueError as exc:
            raise ConfigError(f"seed override {pair!r} is not an integer") from exc
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gbsval",
        description="Simulate and statistically validate threshold-detected "
                    "Gaussian boson sampling networks.")
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        p = sub.add_parser(mode)
        p.add_argument("--config", required=True, type=Path)
        p.add_argument("--out", type=Path, default=None)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--seed-override", action="append", default=[],
                       metavar="K=V")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        overrides = _parse_seed_overrides(args.seed_override)
        if overrides:
            config = dataclasses.replace(
                config, **{f"seed_{k}": v for k, v in overrides.items()})
        run_pipeline(config, args.mode, threads=args.threads, out_dir=args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except NumericalGuardError as exc:
        print(f"numerical guard: {exc}", file=sys.stderr)
        return 4
    except GbsError as exc:  # fallback for the base class
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
