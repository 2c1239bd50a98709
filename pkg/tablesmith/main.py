"""
Command-line entry point.
"""
import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from tablesmith import __version__
from tablesmith.commands import COMMANDS
from tablesmith.core.config import LOG_DIR, LOG_LEVEL, WORKERS, load_pipeline_config
from tablesmith.core.errors import ConfigError, InternalError, TablesmithError
from tablesmith.core.logging_config import setup_logging
from tablesmith.schemas.table import AnnotationRecord

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tablesmith",
        description="Generate, check, augment, score and sample annotated HTML tables.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--schema", action="store_true", help="Print the manifest record JSON schema and exit")
    parser.add_argument("--config", help="Pipeline config JSON")
    parser.add_argument("--workers", type=int, help=f"Parallelism budget (default {WORKERS})")
    parser.add_argument("--log-level", help=f"Logging level (default {LOG_LEVEL})")

    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def report_error(error: TablesmithError) -> None:
    """Human message through logging, machine-readable object as the last stderr line."""
    logger.error(f"{error.kind}: {error.message}")
    print(json.dumps(error.to_error_object(), ensure_ascii=False), file=sys.stderr)


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one subcommand.

    Returns:
        0 on success, 1 when items failed, 2 on configuration or usage errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 for --help/--version
        return e.code if isinstance(e.code, int) else 2

    setup_logging(args.log_level or LOG_LEVEL, LOG_DIR)

    if args.schema:
        print(json.dumps(AnnotationRecord.model_json_schema(), indent=2))
        return 0
    if not args.command:
        parser.print_usage(sys.stderr)
        return 2
    try:
        if args.workers is not None and args.workers < 1:
            raise ConfigError(f"--workers must be at least 1, got {args.workers}")
        config = load_pipeline_config(args.config)
        return args.handler(args, config, args.workers or WORKERS)
    except TablesmithError as e:
        report_error(e)
        return e.exit_code
    except KeyboardInterrupt:
        logger.warning("Interrupted")
        return 130
    except Exception as e:
        logger.exception(f"Unhandled error in command={args.command}")
        error = InternalError(f"{type(e).__name__}: {e}", command=args.command)
        print(json.dumps(error.to_error_object(), ensure_ascii=False), file=sys.stderr)
        return error.exit_code


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
