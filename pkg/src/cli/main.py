"""``pdsplit`` command line.

``pdsplit run CONFIG`` solves one configuration and writes its outputs;
``pdsplit certify CONFIG`` prints the step-length certificates only.

Exit codes: 0 success, 1 numeric failure, 2 configuration error,
3 solver/problem incompatibility, 4 certificate rejected, 5 image I/O error.
"""

import argparse
import sys
from collections.abc import Sequence
from enum import IntEnum
from pathlib import Path

import structlog

from src.cli.config_file import load_config
from src.cli.runner import certify_config, run
from src.config.logging import configure_logging
from src.core.errors import (
    CertificateRejected,
    ConfigError,
    ImageFormatError,
    LayoutError,
    NumericFailure,
    ParameterError,
    PDSplitError,
    ProblemError,
)

logger = structlog.get_logger(__name__)


class ExitCode(IntEnum):
    OK = 0
    NUMERIC = 1
    CONFIG = 2
    INCOMPATIBLE = 3
    CERTIFICATE = 4
    IMAGE = 5


def exit_code_for(exc: PDSplitError) -> ExitCode:
    match exc:
        case CertificateRejected():
            return ExitCode.CERTIFICATE
        case ImageFormatError():
            return ExitCode.IMAGE
        case ProblemError() | LayoutError():
            return ExitCode.INCOMPATIBLE
        case NumericFailure():
            return ExitCode.NUMERIC
        case ConfigError() | ParameterError():
            return ExitCode.CONFIG
    return ExitCode.CONFIG


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pdsplit", description="Primal-dual proximal splitting runs")
    commands = parser.add_subparsers(dest="command", required=True)
    run_cmd = commands.add_parser("run", help="Solve a configuration and write its outputs")
    run_cmd.add_argument("config", type=Path, help="key = value run configuration")
    certify_cmd = commands.add_parser("certify", help="Print the step-length certificates of a configuration")
    certify_cmd.add_argument("config", type=Path, help="key = value run configuration")
    return parser


def cmd_run(config_path: Path) -> ExitCode:
    outcome = run(load_config(config_path))
    print(outcome.trace.to_summary())
    for certificate in outcome.trace.certificates:
        print(certificate.to_summary())
    if outcome.trace.stop_reason == "numeric":
        return ExitCode.NUMERIC
    return ExitCode.OK


def cmd_certify(config_path: Path) -> ExitCode:
    certificates = certify_config(load_config(config_path))
    print("\n\n".join(c.to_text_block() for c in certificates))
    return ExitCode.OK if all(c.passed for c in certificates) else ExitCode.CERTIFICATE


def main(argv: Sequence[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)
    configure_logging()
    try:
        if args.command == "certify":
            code = cmd_certify(args.config)
        else:
            code = cmd_run(args.config)
    except PDSplitError as exc:
        code = exit_code_for(exc)
        logger.error("run_failed", command=args.command, config=str(args.config), error=str(exc), exit_code=int(code))
        print(f"error: {exc}", file=sys.stderr)
    return int(code)


if __name__ == "__main__":
    sys.exit(main())
