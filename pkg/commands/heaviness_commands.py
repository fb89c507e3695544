"""heaviness: H(a) scan and heavy-on-left classification of a centered catalog law."""

import argparse

import structlog

from commands.common import DIST_FLAGS, CommandResult, law_from_descriptor
from distributions.catalog import centered
from heaviness.heaviness_service import heaviness_service
from models.experiment import ExperimentConfig
from models.heaviness import GridPolicy
from utils.errors import ConfigError

logger = structlog.get_logger(__name__)

COLUMNS = ("a", "H", "T_a_mean")


def add_distribution_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dist", help="catalog name or name:key=value,...")
    for key in DIST_FLAGS:
        parser.add_argument(f"--{key}", dest=f"dist_{key}", type=float, help=f"distribution parameter {key}")


def register(subparsers) -> None:
    parser = subparsers.add_parser("heaviness", help="classify a centered law as heavy on left/right")
    add_distribution_flags(parser)
    parser.add_argument("--a-grid", dest="a_grid", help="truncation levels, lo:hi:count or comma list")
    parser.add_argument("--tolerance", type=float, help="classification tolerance")
    parser.set_defaults(handler=run)


def run(config: ExperimentConfig) -> CommandResult:
    if not config.dist:
        raise ConfigError("dist", "a distribution is required")
    variable = centered(law_from_descriptor(config.dist, config.dist_params))

    policy = GridPolicy(points=heaviness_service.grid_points, a_grid=config.a_grid)
    report = heaviness_service.classify(variable, policy, config.tolerance)

    summary = report.to_dict()
    base = variable.base
    if base.name == "poisson":
        summary["poisson_condition"] = heaviness_service.poisson_heavy_left_condition(base.params["lam"])
    return CommandResult(0, COLUMNS, report.rows(), summary)


__all__ = ["register", "run", "add_distribution_flags"]
