"""Command line: ``cavity-collision {angle,fig2,fig3,selftest}``.

Exit status: 0 success, 1 configuration error, 2 numerical-accuracy failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import acceptance, figures
from .config import ConfigError, RunConfig
from .dynamics import IntegrationAccuracyError
from .model import InvalidParameterError

EXIT_OK, EXIT_CONFIG, EXIT_ACCURACY = 0, 1, 2


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cavity-collision", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "angle": "derived parameters and closed-form mixing angles",
        "fig2": "joint detection probabilities versus eta (CSV)",
        "fig3": "Bell signal versus analysis phase (CSV)",
        "selftest": "run the acceptance criteria",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", type=Path, help="key = value configuration file")
        p.add_argument("--out", type=Path, help="output file (default: stdout)")
        p.add_argument("--threads", type=int, default=1, help="worker threads for sweep points")
        p.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                       help="override one configuration key (repeatable)")
    return parser


def load_config(command: str, path: Path | None, overrides: list[str]) -> RunConfig:
    base = RunConfig.fig3_defaults() if command == "fig3" else RunConfig()
    config = RunConfig.from_file(path, base) if path else base
    config = config.with_overrides(overrides)
    # surface inconsistent physical/numerical settings as configuration errors
    config.setup()
    config.scenario()
    config.detection()
    return config


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        config = load_config(args.command, args.config, args.override)
    except (ConfigError, InvalidParameterError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "angle":
            _emit(figures.angle_text(config, figures.angle_report(config)), args.out)
            return EXIT_OK
        if args.command == "fig2":
            rows = figures.fig2_sweep(config, threads=args.threads)
            _emit(figures.fig2_csv(config, rows), args.out)
            failed = [r for r in rows if r.status != "ok"]
            for r in failed:
                print(f"eta = {r.eta:.4g}: {r.status} (norm drift {r.norm_drift:.2e})", file=sys.stderr)
            return EXIT_ACCURACY if failed else EXIT_OK
        if args.command == "fig3":
            _emit(figures.fig3_csv(config, figures.fig3_scan(config)), args.out)
            return EXIT_OK
        results = acceptance.run_all(config)
        _emit("".join(r.line() + "\n" for r in results), args.out)
        return EXIT_OK if all(r.passed for r in results) else EXIT_ACCURACY
    except IntegrationAccuracyError as exc:
        print(f"numerical accuracy failure: {exc}", file=sys.stderr)
        return EXIT_ACCURACY


if __name__ == "__main__":
    sys.exit(main())
