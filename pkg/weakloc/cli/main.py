"""
Command-line entry point.

    weakloc [--out DIR] [-v] [--seed N] [--threads N] [--config FILE] localize --space gabor ...
    weakloc ... run {anti-wick,calderon-toeplitz,bergman} [--symbol ...]
    weakloc ... config {anti-wick,calderon-toeplitz,bergman}

Exit codes: 0 ok, 1 error, 2 negative localization verdict.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from weakloc import __version__
from weakloc.core.audit.logger import AuditLogger
from weakloc.core.config import Config
from weakloc.core.errors import ConfigError, WeaklocError
from weakloc.core.logging import level_from_verbosity, setup_logger
from weakloc.experiments import (
    EXPERIMENTS,
    KERNELS,
    RUNNERS,
    SPACE_EXPERIMENTS,
    config_to_json,
    load_config,
    run_localization,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weakloc",
        description="Weak localization diagnostics and operator experiments for discretized continuous frames.",
    )
    parser.add_argument("--version", action="version", version=f"weakloc {__version__}")
    parser.add_argument("--out", type=Path, default=None,
                        help="Output directory (default: $WEAKLOC_OUTPUT_DIR or ./weakloc-out)")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="Increase log verbosity (-v INFO, -vv DEBUG)")
    parser.add_argument("--seed", type=int, default=None, help="Seed for test-vector sampling")
    parser.add_argument("--threads", type=int, default=None, help="Upper bound on assembly threads")
    parser.add_argument("--config", type=Path, default=None,
                        help="JSON config file; command-line flags override its values")
    commands = parser.add_subparsers(dest="command", required=True)

    localize = commands.add_parser("localize", help="Check a frame kernel for weak localization")
    localize.add_argument("--space", required=True, choices=sorted(SPACE_EXPERIMENTS))
    localize.add_argument("--kernel", choices=KERNELS, default="frame",
                          help="Kernel to test; constant-one is a designed counterexample")
    _grid_flags(localize)
    localize.add_argument("--epsilon", type=float, action="append", default=None,
                          help="eps level for rho (repeatable)")

    run = commands.add_parser("run", help="Run an experiment and write its report bundle")
    run.add_argument("experiment", choices=EXPERIMENTS)
    run.add_argument("--symbol", default=None, help="Symbol descriptor, e.g. indicator:1, radial:r2")
    run.add_argument("--half-width", type=float, default=None,
                     help="Half-width of an indicator symbol")
    _grid_flags(run)
    run.add_argument("--cover-r", type=float, action="append", default=None,
                     help="Cover radius (repeatable)")
    run.add_argument("--epsilon", type=float, action="append", default=None,
                     help="eps level (repeatable)")
    run.add_argument("--k0", type=int, default=None, help="Singular-value index for the compactness proxy")

    show = commands.add_parser("config", help="Print the merged configuration of an experiment")
    show.add_argument("experiment", choices=EXPERIMENTS)
    return parser


def _grid_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--resolution", type=float, default=None, help="Grid step h")
    parser.add_argument("--truncation", type=float, default=None, help="Truncation radius R")
    parser.add_argument("--weight", default=None,
                        help="Weight descriptor: const, power-affine:<delta>, power-disc:<alpha>")


def _symbol(args: argparse.Namespace) -> Optional[str]:
    half_width = getattr(args, "half_width", None)
    symbol = getattr(args, "symbol", None)
    if half_width is None:
        return symbol
    family = (symbol or "indicator").partition(":")[0]
    if family != "indicator":
        raise ConfigError(f"--half-width applies to indicator symbols, not {symbol!r}")
    return f"indicator:{half_width:g}"


def overrides_from_args(args: argparse.Namespace, settings: Config) -> Dict[str, Any]:
    """Nested config overrides from the flags that were given."""
    overrides: Dict[str, Any] = {
        "output_dir": str(settings.output_dir),
        "threads": settings.threads,
        "seed": settings.seed,
    }
    grid = {key: getattr(args, key) for key in ("resolution", "truncation") if getattr(args, key, None) is not None}
    if grid:
        overrides["grid"] = grid
    sweep = {}
    if getattr(args, "cover_r", None):
        sweep["cover_radii"] = args.cover_r
    if getattr(args, "epsilon", None):
        sweep["epsilons"] = args.epsilon
    if sweep:
        overrides["sweep"] = sweep
    if getattr(args, "k0", None) is not None:
        overrides["thresholds"] = {"k0": args.k0}
    if getattr(args, "weight", None) is not None:
        overrides["weight"] = args.weight
    symbol = _symbol(args)
    if symbol is not None:
        overrides["symbol"] = symbol
    return overrides


def _settings(args: argparse.Namespace) -> Config:
    env = Config.from_env()
    return Config(
        output_dir=args.out or env.output_dir,
        audit_dir=None if args.out else env.audit_dir,
        log_level=env.log_level,
        threads=env.threads if args.threads is None else args.threads,
        seed=env.seed if args.seed is None else args.seed,
    )


def cmd_localize(args: argparse.Namespace, settings: Config, audit: AuditLogger) -> int:
    experiment = SPACE_EXPERIMENTS[args.space]
    config = load_config(experiment, args.config, overrides_from_args(args, settings))
    run = run_localization(config, kernel=args.kernel)
    print(run.summary_line())
    audit.log(
        action="localize",
        actor="cli",
        object_type="localization",
        object_id=args.space,
        result=run.document["verdict"]["verdict"],
        details={"paths": {k: str(v) for k, v in run.paths.items()}},
    )
    return EXIT_OK if run.localized else EXIT_NEGATIVE


def cmd_run(args: argparse.Namespace, settings: Config, audit: AuditLogger) -> int:
    config = load_config(args.experiment, args.config, overrides_from_args(args, settings))
    report = RUNNERS[args.experiment](config, audit_logger=audit)
    print(report.summary_line())
    return EXIT_OK if report.localized else EXIT_NEGATIVE


def cmd_config(args: argparse.Namespace, settings: Config, audit: AuditLogger) -> int:
    config = load_config(args.experiment, args.config, overrides_from_args(args, settings))
    sys.stdout.write(config_to_json(config))
    return EXIT_OK


COMMANDS = {
    "localize": cmd_localize,
    "run": cmd_run,
    "config": cmd_config,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; 2 is reserved for negative verdicts here
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR

    try:
        settings = _settings(args)
    except ValueError as exc:
        print(f"weakloc: error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    level = level_from_verbosity(args.verbose) if args.verbose else getattr(logging, settings.log_level)
    setup_logger("weakloc", level=level, run_label=args.command)
    audit = AuditLogger(settings.audit_dir, run_label=args.command)
    audit.log(
        action="command_start",
        actor="cli",
        object_type="command",
        object_id=args.command,
        result="ok",
        details={"argv": list(sys.argv[1:] if argv is None else argv), "settings": settings.to_dict()},
    )

    try:
        code = COMMANDS[args.command](args, settings, audit)
    except WeaklocError as exc:
        cause = f" ({type(exc.__cause__).__name__}: {exc.__cause__})" if exc.__cause__ else ""
        print(f"weakloc: error: {exc}{cause}", file=sys.stderr)
        code = EXIT_ERROR

    audit.log(
        action="command_complete",
        actor="cli",
        object_type="command",
        object_id=args.command,
        result={EXIT_OK: "ok", EXIT_ERROR: "error", EXIT_NEGATIVE: "negative"}[code],
        details={"exit_code": code, "stages": audit.counts("stage")},
    )
    audit.save()
    return code


if __name__ == "__main__":
    sys.exit(main())
