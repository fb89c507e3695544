"""bound: evaluate a tail bound on an x grid."""

import math
from typing import Callable, Dict, Union

import structlog

from applications.autoregressive import (
    ar1_bound_ls,
    ar1_bound_simple,
    ar1_bound_via_mgf,
    ar1_bound_yw,
    ar1_qv_mgf_handle,
)
from applications.branching import geometric_branching_bound, harris_bound, lotka_nagaev_bound, offspring_rate
from applications.regression import (
    noise_square_rate,
    regression_bernoulli_gaussian_bound,
    regression_bound,
    regressor_square_cgf,
)
from bounds.classical import azuma_hoeffding, delapena, freedman
from bounds.mgf import iid_sum, scaled
from bounds.self_normalized import (
    subgaussian_self_normalized,
    thm21,
    thm22_lower_variation,
    thm22_ratio,
    thm41,
    thm42_ratio,
    thm42_self_normalized,
    thm42_with_floor,
)
from commands.common import CommandResult, build_model, law_from_descriptor, parse_descriptor, require_grid
from distributions.catalog import square_cgf
from models.applications import ApplicationBound
from models.bounds import BoundResult, MgfHandle
from models.experiment import ExperimentConfig
from models.processes import AR1Model, BranchingModel, RegressionModel
from processes.population import population_mgf, total_population_mgf
from utils.errors import ConfigError

logger = structlog.get_logger(__name__)

COLUMNS = ("x", "bound_raw", "bound_clamped", "argmin", "method", "notes")

AnyBound = Union[BoundResult, ApplicationBound]
BoundFn = Callable[[float], AnyBound]


def _need(config: ExperimentConfig, field: str):
    value = getattr(config, field)
    if value is None:
        raise ConfigError(field, f"required by bound {config.bound!r}")
    return value


def _increment_range(config: ExperimentConfig):
    text = _need(config, "increment_range")
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError as e:
        raise ConfigError("increment_range", f"expected lo:hi, got {text!r}") from e
    return [(lo, hi)] * config.n


# Variation handles from the process model

def qv_handle(config: ExperimentConfig) -> MgfHandle:
    """Handle of <M>_n for the configured model"""
    model = build_model(config)
    if isinstance(model, AR1Model):
        return ar1_qv_mgf_handle(config.n, model.sigma2)
    if isinstance(model, RegressionModel):
        # <M>_n = sigma2 (phi_0^2 + .. + phi_{n-1}^2)
        return iid_sum(scaled(regressor_square_cgf(model.regressor), model.sigma2), config.n)
    raise ConfigError("model", "a variation handle needs --model ar1 or regression")


def tv_handle(config: ExperimentConfig) -> MgfHandle:
    """Handle of [M]_n for a regression with a constant regressor"""
    model = build_model(config)
    if not isinstance(model, RegressionModel) or model.regressor.name != "dirac":
        raise ConfigError("model", "[M]_n handle needs --model regression with a dirac regressor")
    c = model.regressor.mean
    if c == 0:
        return MgfHandle.deterministic(0.0)
    return iid_sum(scaled(square_cgf(model.noise), c * c), config.n)


# Bound factories: config -> (x -> bound)

def _regression(config: ExperimentConfig) -> BoundFn:
    model = build_model(config)
    if not isinstance(model, RegressionModel):
        raise ConfigError("model", "bound regression needs --model regression")
    y = _need(config, "y")
    H = regressor_square_cgf(model.regressor)
    rate = noise_square_rate(model.noise)
    return lambda x: regression_bound(x, y, config.n, H, rate, model.sigma2, model.paired)


def _branching(config: ExperimentConfig, total: bool) -> BoundFn:
    model = build_model(config)
    if not isinstance(model, BranchingModel):
        raise ConfigError("model", "branching bounds need --model galton-watson")
    rate = offspring_rate(model.offspring)
    if total:
        handle = total_population_mgf(model.offspring, config.n - 1)
        return lambda x: harris_bound(x, config.n, rate, handle)
    handle = population_mgf(model.offspring, config.n - 1)
    return lambda x: lotka_nagaev_bound(x, config.n, rate, handle)


def _geometric_p(config: ExperimentConfig) -> float:
    if config.p is not None:
        return config.p
    name, params = parse_descriptor(config.offspring)
    if name != "geometric" or params.get("start", 1) != 1:
        raise ConfigError("p", "geometric-branching needs --p or a geometric offspring on {1, 2, ..}")
    return law_from_descriptor(config.offspring).params["p"]


BOUND_FACTORIES: Dict[str, Callable[[ExperimentConfig], BoundFn]] = {
    "azuma-hoeffding": lambda c: (lambda x, r=_increment_range(c): azuma_hoeffding(x, r)),
    "freedman": lambda c: (lambda x: freedman(x, _need(c, "y"), _need(c, "c"))),
    "delapena": lambda c: (lambda x: delapena(x, _need(c, "y"), c.sided)),
    "thm21": lambda c: (lambda x: thm21(x, _need(c, "y"), c.sided)),
    "thm22-lower": lambda c: (lambda x: thm22_lower_variation(x, _need(c, "y"), c.a, c.b, c.exchange)),
    "thm22-ratio": lambda c: (lambda x, h=qv_handle(c): thm22_ratio(x, _need(c, "y"), c.a, c.b, h, c.exchange)),
    "thm41": lambda c: (lambda x: thm41(x, _need(c, "y"))),
    "thm42": lambda c: (lambda x, h=tv_handle(c): thm42_self_normalized(x, c.a, c.b, h)),
    "thm42-floor": lambda c: (lambda x: thm42_with_floor(x, _need(c, "y"), c.a, c.b)),
    "thm42-ratio": lambda c: (lambda x, h=qv_handle(c): thm42_ratio(x, _need(c, "y"), c.a, c.b, h)),
    "subgaussian": lambda c: (lambda x, h=qv_handle(c): subgaussian_self_normalized(x, c.a, c.b, c.alpha, h)),
    "regression": _regression,
    "regression-bernoulli-gaussian": lambda c: (
        lambda x: regression_bernoulli_gaussian_bound(x, c.n, _need(c, "p"), c.tau2 or 1.0)
    ),
    "ar1-ls": lambda c: (lambda x: ar1_bound_ls(x, c.n)),
    "ar1-simple": lambda c: (lambda x: ar1_bound_simple(x, c.n)),
    "ar1-yw": lambda c: (lambda x: ar1_bound_yw(x, c.n, c.theta, c.one_sided)),
    "ar1-mgf": lambda c: (lambda x: ar1_bound_via_mgf(x, c.n, c.sigma2)),
    "lotka-nagaev": lambda c: _branching(c, total=False),
    "harris": lambda c: _branching(c, total=True),
    "geometric-branching": lambda c: (lambda x, p=_geometric_p(c): geometric_branching_bound(x, c.n, p)),
}


def bound_function(config: ExperimentConfig) -> BoundFn:
    """x -> bound for config.bound; handles are built once"""
    name = _need(config, "bound")
    try:
        factory = BOUND_FACTORIES[name]
    except KeyError:
        raise ConfigError("bound", f"unknown bound {name!r}; expected one of {', '.join(BOUND_FACTORIES)}")
    return factory(config)


def bound_row(x: float, bound: AnyBound) -> dict:
    if isinstance(bound, ApplicationBound):
        argmin, method = bound.argmin, bound.method
    else:
        argmin, method = bound.argmin_p, "closed-form" if bound.argmin_p is None else "optimized"
    return {
        "x": x,
        "bound_raw": bound.raw,
        "bound_clamped": bound.clamped,
        "argmin": math.nan if argmin is None else argmin,
        "method": method,
        "notes": "; ".join(bound.notes),
    }


def register(subparsers) -> None:
    parser = subparsers.add_parser("bound", help="evaluate a tail bound on an x grid")
    parser.add_argument("--bound", choices=sorted(BOUND_FACTORIES), required=False)
    parser.add_argument("--x", dest="x_grid", help="x grid, lo:hi:count or comma list")
    add_bound_flags(parser)
    add_model_flags(parser)
    parser.set_defaults(handler=run)


def add_bound_flags(parser) -> None:
    parser.add_argument("--y", type=float)
    parser.add_argument("--a", type=float)
    parser.add_argument("--b", type=float)
    parser.add_argument("--c", type=float)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--sided", choices=("one", "two"))
    parser.add_argument("--one-sided", dest="one_sided", action="store_true", default=None)
    parser.add_argument("--exchange", action="store_true", default=None)
    parser.add_argument("--range", dest="increment_range", help="increment range lo:hi for azuma-hoeffding")
    parser.add_argument("--p", type=float, help="Bernoulli noise or geometric offspring parameter")


def add_model_flags(parser) -> None:
    parser.add_argument("--model", choices=("regression", "ar1", "galton-watson"))
    parser.add_argument("--theta", type=float)
    parser.add_argument("--sigma2", type=float, help="AR(1) noise variance")
    parser.add_argument("--tau2", type=float, help="AR(1) initial variance or Gaussian regressor variance")
    parser.add_argument("--zero-start", dest="zero_start", action="store_true", default=None)
    parser.add_argument("--regressor", help="regressor law, name:key=value,...")
    parser.add_argument("--noise", help="noise law, centered if needed")
    parser.add_argument("--paired", action="store_true", default=None)
    parser.add_argument("--offspring", help="offspring law on {0, 1, ..}")
    parser.add_argument("--extinction-policy", dest="extinction_policy", choices=("flag", "error"))
    parser.add_argument("--n", type=int)


def run(config: ExperimentConfig) -> CommandResult:
    grid = require_grid(config, "x_grid")
    evaluate = bound_function(config)
    rows = [bound_row(x, evaluate(x)) for x in grid]
    logger.info("bounds_evaluated", bound=config.bound, points=len(rows))
    return CommandResult(0, COLUMNS, rows, {"bound": config.bound, "points": len(rows)})


__all__ = [
    "BOUND_FACTORIES",
    "bound_function",
    "bound_row",
    "qv_handle",
    "tv_handle",
    "register",
    "run",
    "add_bound_flags",
    "add_model_flags",
]
