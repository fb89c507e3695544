"""transform: y_x, the Cramer function, Fenchel-Legendre transforms and AR(1) rates."""

import math

import structlog

from commands.common import CommandResult, law_from_descriptor, require_grid
from commands.heaviness_commands import add_distribution_flags
from distributions.catalog import centered, mgf_handle
from models.experiment import ExperimentConfig
from models.transforms import TransformResult
from transforms.convex import cramer_h, fenchel_legendre, maximize_ell, solve_yx, usable_end
from transforms.rates import ar1_ldp_rates
from utils.errors import ConfigError

logger = structlog.get_logger(__name__)

COLUMNS = ("input", "value", "arg", "residual", "boundary_flag")


def _fenchel(config: ExperimentConfig):
    if not config.dist:
        raise ConfigError("dist", "fenchel needs --dist")
    handle = mgf_handle(centered(law_from_descriptor(config.dist, config.dist_params)))
    t_lo = usable_end(handle.domain, -1) if config.t_lo is None else config.t_lo
    t_hi = usable_end(handle.domain, +1) if config.t_hi is None else config.t_hi
    return lambda x: fenchel_legendre(handle, x, (t_lo, t_hi))


def _ldp(config: ExperimentConfig, which: int):
    return lambda x: TransformResult(value=ar1_ldp_rates(x, config.theta)[which], arg=x, residual=0.0)


def _evaluator(config: ExperimentConfig):
    mode = config.transform
    if mode == "solve-yx":
        return solve_yx
    if mode == "cramer-h":
        return lambda y: TransformResult(value=cramer_h(y), arg=y, residual=0.0)
    if mode == "maximize-ell":
        return maximize_ell
    if mode == "fenchel":
        return _fenchel(config)
    if mode == "ldp-ls":
        return _ldp(config, 0)
    if mode == "ldp-yw":
        return _ldp(config, 1)
    raise ConfigError("transform", "choose --solve-yx, --cramer-h, --maximize-ell, --fenchel or --ldp")


def register(subparsers) -> None:
    parser = subparsers.add_parser("transform", help="evaluate a transform on an x grid")
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument("--solve-yx", dest="transform", action="store_const", const="solve-yx")
    mode.add_argument("--cramer-h", dest="transform", action="store_const", const="cramer-h")
    mode.add_argument("--maximize-ell", dest="transform", action="store_const", const="maximize-ell")
    mode.add_argument("--fenchel", dest="transform", action="store_const", const="fenchel")
    mode.add_argument("--ldp", dest="transform", choices=("ldp-ls", "ldp-yw"))
    parser.add_argument("--x", dest="x_grid", help="inputs, lo:hi:count or comma list")
    parser.add_argument("--t-lo", dest="t_lo", type=float)
    parser.add_argument("--t-hi", dest="t_hi", type=float)
    parser.add_argument("--theta", type=float, help="AR(1) parameter for --ldp")
    add_distribution_flags(parser)
    parser.set_defaults(handler=run)


def run(config: ExperimentConfig) -> CommandResult:
    grid = require_grid(config, "x_grid")
    evaluate = _evaluator(config)
    rows = []
    for x in grid:
        result = evaluate(x)
        rows.append(
            {
                "input": x,
                "value": result.value,
                "arg": result.arg,
                "residual": result.residual,
                "boundary_flag": result.boundary_flag,
            }
        )
    worst = max((r["residual"] for r in rows if math.isfinite(r["residual"])), default=0.0)
    logger.info("transform_evaluated", transform=config.transform, points=len(rows), max_residual=worst)
    return CommandResult(0, COLUMNS, rows, {"transform": config.transform, "max_residual": worst})


__all__ = ["register", "run"]
