"""verify: Monte Carlo certification of a bound on an x grid, or of the exponential process means on a t grid."""

import inspect
from collections import Counter
from typing import Any, Callable, Dict, List, Tuple

import structlog

from commands.bound_commands import add_bound_flags, add_model_flags, bound_function
from commands.common import CommandResult, build_model, require_grid
from models.experiment import ExperimentConfig
from models.processes import AR1Model, BranchingModel, RegressionModel
from models.verification import REPORT_COLUMNS, VerificationReport
from utils.errors import ConfigError
from verify.events import EVENT_FAMILIES, Event
from verify.verification_service import PathSource, verification_service

logger = structlog.get_logger(__name__)

# bound name -> (event family, fixed event parameters)
DEFAULT_EVENTS: Dict[str, Tuple[str, Dict[str, Any]]] = {
    "azuma-hoeffding": ("two-sided", {}),
    "freedman": ("predictable-ceiling", {}),
    "delapena": ("total-ceiling", {}),
    "thm21": ("sum-ceiling", {}),
    "thm22-lower": ("lower-variation-gap", {}),
    "thm22-ratio": ("variation-ratio", {"sided": "two"}),
    "thm41": ("total-ceiling", {"sided": "one"}),
    "thm42": ("total-normalized", {}),
    "thm42-floor": ("total-normalized", {"floor": None}),
    "thm42-ratio": ("variation-ratio", {"sided": "one"}),
    "subgaussian": ("predictable-normalized", {}),
    "regression": ("least-squares", {}),
    "regression-bernoulli-gaussian": ("least-squares", {}),
    "ar1-ls": ("least-squares", {}),
    "ar1-simple": ("least-squares", {}),
    "ar1-mgf": ("least-squares", {}),
    "ar1-yw": ("yule-walker", {}),
    "lotka-nagaev": ("lotka-nagaev", {}),
    "geometric-branching": ("lotka-nagaev", {}),
    "harris": ("harris", {}),
}

DEFAULT_BOUNDS = {"ar1": "ar1-ls", "regression": "regression", "galton-watson": "lotka-nagaev"}


def _event_params(config: ExperimentConfig) -> Dict[str, Any]:
    return {
        "y": config.y,
        "a": config.a,
        "b": config.b,
        "sided": config.sided,
        "exchange": config.exchange,
        "theta": config.theta,
        "one_sided": config.one_sided,
    }


def event_family(config: ExperimentConfig) -> Callable[[float], Event]:
    """x -> Event for --event, or the event the configured bound speaks about"""
    family, fixed = config.event, {}
    if family is None:
        family, fixed = DEFAULT_EVENTS[config.bound]
    if family not in EVENT_FAMILIES:
        raise ConfigError("event", f"unknown event {family!r}; expected one of {', '.join(EVENT_FAMILIES)}")
    factory = EVENT_FAMILIES[family]

    available = _event_params(config)
    if "floor" in fixed:
        fixed = {**fixed, "floor": config.y}
    params = {}
    for name, parameter in list(inspect.signature(factory).parameters.items())[1:]:
        value = fixed[name] if name in fixed else available.get(name)
        if value is None:
            if parameter.default is inspect.Parameter.empty:
                raise ConfigError(name, f"required by event {family!r}")
            continue
        params[name] = value
    return lambda x: factory(x, **params)


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="check a bound or a supermartingale mean by simulation")
    parser.add_argument("--bound", help="bound to certify (defaults per model)")
    parser.add_argument("--event", choices=sorted(EVENT_FAMILIES), help="event family (defaults per bound)")
    parser.add_argument("--check", choices=("tail", "V", "W", "subgaussian", "identity"))
    parser.add_argument("--x", dest="x_grid", help="x grid for tail checks")
    parser.add_argument("--t", dest="t_grid", help="t grid for mean and identity checks")
    add_bound_flags(parser)
    add_model_flags(parser)
    parser.set_defaults(handler=run)


def _tail_reports(config: ExperimentConfig, model) -> List[VerificationReport]:
    if config.bound is None:
        config = config.model_copy(update={"bound": DEFAULT_BOUNDS[config.model]})
    bound_fn = bound_function(config)
    source = PathSource(model, config.n)
    return verification_service.sweep(
        require_grid(config, "x_grid"), bound_fn, event_family(config), source, config.trials, config.seed
    )


def _mean_reports(config: ExperimentConfig, model) -> List[VerificationReport]:
    reports = []
    for t in require_grid(config, "t_grid"):
        if config.check == "identity":
            if not isinstance(model, BranchingModel):
                raise ConfigError("check", "identity needs --model galton-watson")
            report = verification_service.check_branching_identity(model, t, config.n, config.trials, config.seed)
        else:
            source = PathSource(model, config.n)
            report = verification_service.check_supermartingale_mean(
                source, config.check, t, config.trials, config.seed, config.alpha
            )
        reports.append(report.model_copy(update={"x": t}))
    return reports


def run(config: ExperimentConfig) -> CommandResult:
    if config.model is None:
        raise ConfigError("model", "verify needs --model")
    model = build_model(config)
    if config.workers:
        verification_service.workers = config.workers

    if config.check == "tail":
        reports = _tail_reports(config, model)
    else:
        reports = _mean_reports(config, model)

    verdicts = Counter(r.verdict for r in reports)
    status = 2 if verdicts.get("fail") else 0
    logger.info("verify_finished", model=config.model, check=config.check, verdicts=dict(verdicts), status=status)

    summary: Dict[str, Any] = {
        **model.to_dict(),
        "check": config.check,
        "verdicts": dict(verdicts),
        "events": [r.event for r in reports],
    }
    if isinstance(model, (RegressionModel, AR1Model)):
        summary["increments"] = verification_service.increment_heaviness(model)
    return CommandResult(status, REPORT_COLUMNS, [r.row() for r in reports], summary)


__all__ = ["DEFAULT_EVENTS", "DEFAULT_BOUNDS", "event_family", "register", "run"]
