"""Command line entry point: ``toposources run|sweep|plot``.

Exit codes: 0 on success (whatever the estimate), 1 for config or input
errors, 2 for runtime and numerical errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .errors import ConfigError, ParseError, ToposourcesError, UnknownAxis
from .experiment import (
    OUTPUT_DIR_ENV,
    StageError,
    load_config,
    resolve_output_dir,
    run_experiment,
    sweep,
)
from .persistence.barcode_io import barcode_from_csv, barcode_svg

log = logging.getLogger("toposources")

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


def _parse_values(text: str) -> list[float]:
    text = text.strip()
    if not text:
        return []
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"--values must be comma-separated numbers: {exc}") from None


def cmd_run(args) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    report = run_experiment(config, args.output_dir)
    est = report.estimate
    summary = {
        "status": est.status.value,
        "n": est.n,
        "betti": list(est.betti_observed.betti),
        "mdl": report.mdl,
        "aic": report.aic,
        "full_column_rank": report.independence["full_column_rank"],
        "output": str(resolve_output_dir(config, args.output_dir)),
    }
    print(json.dumps(summary))
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = load_config(args.config)
    table = sweep(config, args.axis, _parse_values(args.values), args.reps, workers=args.workers)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(table)
    else:
        sys.stdout.write(table)
    return EXIT_OK


def cmd_plot(args) -> int:
    path = Path(args.barcode)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    barcode = barcode_from_csv(text)
    out = Path(args.out) if args.out else path.with_suffix(".svg")
    out.write_text(barcode_svg(barcode, persistence_fraction=args.fraction))
    print(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toposources",
                                description="Topological source counting for monocomponent mixtures.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run one experiment from a JSON config")
    r.add_argument("config")
    r.add_argument("--seed", type=int, help="override the config seed")
    r.add_argument("--output-dir", help=f"output directory (overrides ${OUTPUT_DIR_ENV} and the config)")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("sweep", help="success rates over one config axis")
    s.add_argument("config")
    s.add_argument("--axis", required=True)
    s.add_argument("--values", required=True, help="comma-separated, may be empty")
    s.add_argument("--reps", type=int, default=10)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", help="write the CSV here instead of stdout")
    s.set_defaults(func=cmd_sweep)

    pl = sub.add_parser("plot", help="render a barcode CSV as SVG")
    pl.add_argument("barcode")
    pl.add_argument("--out")
    pl.add_argument("--fraction", type=float, default=0.5, help="persistence threshold to mark")
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, ParseError, UnknownAxis) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG if isinstance(exc.cause, ConfigError) else EXIT_RUNTIME
    except (ToposourcesError, ArithmeticError, ValueError, MemoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
