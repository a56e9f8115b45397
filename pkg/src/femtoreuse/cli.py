"""``simulate`` command line entry point."""

from __future__ import annotations

import argparse
import logging
import sys

from .config import ConfigError, ScenarioConfig, apply_overrides, dump_config, load_config
from .schemes import SchemeKind
from .sweep import emit_csv, emit_summary, run_sweep

log = logging.getLogger("femtoreuse")


def _csv_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(s) for s in text.split(",") if s.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _csv_schemes(text: str) -> tuple[SchemeKind, ...]:
    try:
        return tuple(SchemeKind.parse(s) for s in text.split(",") if s.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="simulate",
        description="Sweep femtocell densities across frequency allocation schemes.",
    )
    p.add_argument("--config", help="key = value scenario file (defaults apply to missing keys)")
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--seed", type=int)
    p.add_argument("--schemes", type=_csv_schemes, help="e.g. shared,static,dynamic")
    p.add_argument("--counts", type=_csv_ints, help="e.g. 10,100,1000")
    p.add_argument("--trials", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--summary", action="store_true", help="print the per-regime summary to stdout")
    p.add_argument("--print-defaults", action="store_true", help="dump the default configuration and exit")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.print_defaults:
        sys.stdout.write(dump_config(ScenarioConfig()))
        return 0
    try:
        cfg = load_config(args.config) if args.config else ScenarioConfig()
        overrides = {k: getattr(args, k) for k in ("seed", "schemes", "counts", "trials", "workers")
                     if getattr(args, k) is not None}
        cfg = apply_overrides(cfg, overrides)
        if not args.out and not args.summary:
            raise ConfigError("--out", "an output path (or --summary) is required")
        log.info("running %d schemes x %d counts, %d trials each",
                 len(cfg.schemes), len(cfg.counts), cfg.trials)
        result = run_sweep(cfg)
        if args.out:
            emit_csv(result, args.out)
        if args.summary:
            sys.stdout.write(emit_summary(result))
    except (ConfigError, RuntimeError, OSError) as exc:
        print(f"simulate: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
