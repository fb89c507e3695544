import argparse
import sys
from typing import List, Optional

import structlog

from config.logging_config import configure_logging
from config.settings import validate_settings

# Import command modules
from commands import bound_commands, heaviness_commands, simulate_commands, transform_commands, verify_commands
from commands.common import CommandResult, build_config, write_table
from models.experiment import ExperimentConfig
from utils.errors import ToolkitError

logger = structlog.get_logger(__name__)

COMMANDS = {
    "heaviness": heaviness_commands,
    "bound": bound_commands,
    "transform": transform_commands,
    "simulate": simulate_commands,
    "verify": verify_commands,
}


def add_run_flags(parser: argparse.ArgumentParser) -> None:
    """Flags shared by every command"""
    parser.add_argument("--config", help="experiment file (.json or .toml) with the same keys as the flags")
    parser.add_argument("--trials", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--workers", type=int, help="worker threads for trial-parallel runs")
    parser.add_argument("--out", help="output file (stdout when omitted)")
    parser.add_argument("--format", choices=("csv", "json"))
    parser.add_argument("--log-level", dest="log_level", help="DEBUG, INFO, WARNING or ERROR")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="martingale-bounds",
        description="Self-normalized martingale tail bounds: evaluation and Monte Carlo verification",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in COMMANDS.values():
        module.register(subparsers)
    for command_parser in subparsers.choices.values():
        add_run_flags(command_parser)
    return parser


def run(config: ExperimentConfig) -> CommandResult:
    """Dispatch to the command module and write its table"""
    result = COMMANDS[config.command].run(config)
    write_table(result.rows, result.columns, config.out, config.format)
    logger.info("command_finished", command=config.command, status=result.status, summary=result.summary)
    return result


def main(argv: Optional[List[str]] = None) -> int:
    """0 on success, 1 on errors, 2 when a verification fails"""
    args = build_parser().parse_args(argv)
    flags = vars(args)
    command = flags.pop("command")
    flags.pop("handler", None)
    config_path = flags.pop("config", None)
    configure_logging(level=flags.pop("log_level", None))

    try:
        validate_settings()
        config = build_config(command, flags, config_path)
        return run(config).status
    except ToolkitError as e:
        print(f"error: {e}", file=sys.stderr)
        logger.debug("command_failed", command=command, error=str(e))
        return 1
    except ValueError as e:
        # invalid settings
        print(f"error: {e}", file=sys.stderr)
        logger.debug("command_failed", command=command, error=str(e))
        return 1


if __name__ == "__main__":
    sys.exit(main())
