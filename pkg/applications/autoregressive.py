"""
Tail bounds for the least-squares and Yule-Walker estimators of the AR(1)
process X_{k+1} = theta X_k + eps_{k+1} with Gaussian noise, valid for every
value of theta.
"""

import math

import structlog

from bounds.self_normalized import subgaussian_self_normalized
from models.applications import ApplicationBound
from models.bounds import MgfHandle
from models.common import nonpositive
from transforms.convex import maximize_ell, solve_yx
from utils.errors import DomainError, ParameterError

logger = structlog.get_logger(__name__)


def _check(x: float, n: int) -> None:
    if x < 0 or not math.isfinite(x):
        raise ParameterError("Deviation x must be nonnegative", f"got {x!r}")
    if int(n) != n or n < 1:
        raise ParameterError("Horizon must be a positive integer", f"got {n!r}")


def _trivial(parameters: dict) -> ApplicationBound:
    return ApplicationBound(value=2.0, parameters=parameters, notes=["x = 0: trivial bound"])


def _gaussian_exponent(x: float, n: int) -> tuple:
    """(n x^2 / (2 (1 + y_x)), y_x)"""
    y_x = solve_yx(x).value
    return n * x * x / (2 * (1 + y_x)), y_x


def ar1_bound_ls(x: float, n: int) -> ApplicationBound:
    """P(|theta_hat_n - theta| >= x) <= 2 exp(-n x^2 / (2 (1 + y_x)))"""
    _check(x, n)
    parameters = {"x": x, "n": n}
    if x == 0:
        return _trivial(parameters)
    exponent, y_x = _gaussian_exponent(x, n)
    return ApplicationBound(
        value=2.0 * math.exp(-exponent),
        components={"y_x": y_x},
        parameters=parameters,
        method="closed-form",
    )


def ar1_bound_simple(x: float, n: int) -> ApplicationBound:
    """2 exp(-n x^2 / (2 (1 + 2x))) for 0 < x < 1/2; never below ar1_bound_ls"""
    _check(x, n)
    if not x < 0.5:
        raise ParameterError("Simplified AR(1) bound holds for 0 < x < 1/2", f"got x={x!r}")
    parameters = {"x": x, "n": n}
    if x == 0:
        return _trivial(parameters)
    return ApplicationBound(
        value=2.0 * math.exp(-n * x * x / (2 * (1 + 2 * x))),
        parameters=parameters,
        method="closed-form",
        notes=["uses y_x <= 2x, from h(y) > y^2/4 on (0, 1)"],
    )


def ar1_bound_yw(x: float, n: int, theta: float, one_sided: bool = False) -> ApplicationBound:
    """
    Yule-Walker estimator: P(|theta_tilde_n - theta| >= x + |theta|) is at most
    the least-squares bound. With theta > 0 the one-sided event
    theta_tilde_n - theta >= x has half that bound.
    """
    _check(x, n)
    if one_sided and not theta > 0:
        raise ParameterError("One-sided Yule-Walker bound needs theta > 0", f"got theta={theta!r}")

    base = ar1_bound_ls(x, n)
    threshold = x if one_sided else x + abs(theta)
    value = base.value / 2 if one_sided else base.value
    return ApplicationBound(
        value=value,
        components={**base.components, "threshold": threshold},
        parameters={"x": x, "n": n, "theta": theta, "one_sided": one_sided},
        method="closed-form",
        notes=base.notes + (["event: theta_tilde_n - theta >= x"] if one_sided else ["event: |theta_tilde_n - theta| >= x + |theta|"]),
    )


def ar1_qv_mgf_bound(t: float, n: int, sigma2: float) -> float:
    """E[exp(t <M>_n)] <= (1 - 2 sigma2^2 t)^(-n/2) for X_0 ~ N(0, tau2), tau2 >= sigma2"""
    if not sigma2 > 0:
        raise ParameterError("sigma2 must be positive", f"got {sigma2!r}")
    limit = 1 / (2 * sigma2 * sigma2)
    if not t < limit:
        raise DomainError("Quadratic variation bound diverges", t, f"(-inf, {limit})")
    return math.exp(-(n / 2) * math.log1p(-2 * sigma2 * sigma2 * t))


def ar1_qv_mgf_handle(n: int, sigma2: float) -> MgfHandle:
    """ar1_qv_mgf_bound on t <= 0 as an upper-bound handle"""
    if not sigma2 > 0:
        raise ParameterError("sigma2 must be positive", f"got {sigma2!r}")
    factor = 2 * sigma2 * sigma2
    return MgfHandle(
        log_evaluator=lambda t: -(n / 2) * math.log1p(-factor * t),
        domain=nonpositive(),
        flavor="upper-bound",
        description=f"AR(1) <M>_{n} bound, sigma2={sigma2:g}",
    )


def ar1_bound_via_mgf(x: float, n: int, sigma2: float = 1.0) -> ApplicationBound:
    """
    2 inf_{y>0} exp(-(n x^2 / 2) l(y)) with l(y) = log(1 + y) / (x^2 + y),
    maximized numerically. The maximizer is y_x, so the value agrees with
    ar1_bound_ls. The sub-Gaussian self-normalized bound driven by the
    quadratic variation handle is reported as `subgaussian_route`.
    """
    _check(x, n)
    parameters = {"x": x, "n": n, "sigma2": sigma2}
    if x == 0:
        return _trivial(parameters)

    best = maximize_ell(x)
    value = 2.0 * math.exp(-(n * x * x / 2) * best.value)

    # |theta_hat - theta| >= x is |M_n| >= (x / sigma2) <M>_n
    route = subgaussian_self_normalized(x / sigma2, 0.0, 1.0, 1.0, ar1_qv_mgf_handle(n, sigma2))

    logger.debug("ar1_bound_via_mgf", x=x, n=n, y_star=best.arg, value=value, route=2 * route.raw)
    return ApplicationBound(
        value=value,
        components={"ell_max": best.value, "subgaussian_route": 2 * route.raw, "route_argmin_p": route.argmin_p or math.nan},
        parameters=parameters,
        method="cross-check",
        argmin=best.arg,
        notes=["optimizer hit the search window"] if best.boundary_flag else [],
    )


__all__ = [
    "ar1_bound_ls",
    "ar1_bound_simple",
    "ar1_bound_yw",
    "ar1_qv_mgf_bound",
    "ar1_qv_mgf_handle",
    "ar1_bound_via_mgf",
]
