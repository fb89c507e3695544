"""simulate: per-path terminal values of a regression, AR(1) or Galton-Watson run."""

import structlog

from commands.bound_commands import add_model_flags
from commands.common import CommandResult, build_model
from models.experiment import ExperimentConfig
from models.processes import AR1Model, BranchingModel
from processes.simulators import simulate

logger = structlog.get_logger(__name__)

BASE_COLUMNS = ("path_index", "M", "total_variation", "predictable_variation")


def estimator_columns(model) -> tuple:
    if isinstance(model, AR1Model):
        return ("theta_hat", "theta_tilde")
    if isinstance(model, BranchingModel):
        return ("m_tilde", "m_hat")
    return ("theta_hat",)


def register(subparsers) -> None:
    parser = subparsers.add_parser("simulate", help="simulate paths and print their terminal values")
    add_model_flags(parser)
    parser.set_defaults(handler=run)


def run(config: ExperimentConfig) -> CommandResult:
    model = build_model(config)
    estimators = estimator_columns(model)
    columns = BASE_COLUMNS + estimators + ("extinct",)

    rows = []
    extinct = 0
    for index in range(config.trials):
        path = simulate(model, config.n, (config.seed, index), index)
        row = {
            "path_index": index,
            "M": path.M,
            "total_variation": path.total,
            "predictable_variation": path.predictable,
            "extinct": path.extinct,
        }
        for name in estimators:
            row[name] = path.estimate(name)
        rows.append(row)
        extinct += path.extinct

    logger.info("paths_simulated", model=config.model, n=config.n, trials=config.trials, seed=config.seed, extinct=extinct)
    summary = {**model.to_dict(), "n": config.n, "trials": config.trials, "seed": config.seed, "extinct": extinct}
    return CommandResult(0, columns, rows, summary)


__all__ = ["register", "run", "estimator_columns"]
