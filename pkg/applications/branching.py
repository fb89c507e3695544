"""
Tail bounds for the Lotka-Nagaev and Harris estimators of the offspring
mean of a supercritical Galton-Watson process.
"""

import math

import structlog

from bounds.optimizer import optimize_p
from distributions.catalog import centered, make_distribution, mgf_handle
from models.applications import ApplicationBound
from models.bounds import MgfHandle
from models.distribution import DistributionSpec
from processes.population import geometric_population_bound
from transforms.convex import SymmetricRate
from utils.errors import ParameterError

logger = structlog.get_logger(__name__)


def offspring_rate(offspring: DistributionSpec) -> SymmetricRate:
    """J(x) = min(I(x), I(-x)), I the transform of the centered offspring cgf on [-c, c]"""
    return SymmetricRate(mgf_handle(centered(offspring)), description=f"centered {offspring.label}")


def _rate_at(x: float, n: int, offspring_rate) -> float:
    if x < 0 or int(n) != n or n < 1:
        raise ParameterError("Need x >= 0 and a positive integer n", f"x={x!r}, n={n!r}")
    return 0.0 if x == 0 else float(offspring_rate(x))


def _optimized(J: float, handle: MgfHandle):
    """2 inf_{p>1} (E[exp(-(p-1) J Z)])^(1/p)"""
    best = optimize_p(lambda p: handle.log_value(-(p - 1) * J) / p)
    return 2.0 * math.exp(best.value), best


def _flavor_notes(handle: MgfHandle) -> list:
    if handle.flavor == "upper-bound":
        return [f"population mgf flavor upper-bound ({handle.description})"]
    return []


def _zero_rate(parameters: dict) -> ApplicationBound:
    return ApplicationBound(
        value=2.0,
        components={"J": 0.0, "plain": 2.0, "optimized": 2.0},
        parameters=parameters,
        notes=["J(x) = 0: trivial bound"],
    )


def lotka_nagaev_bound(x: float, n: int, offspring_rate, pop_mgf: MgfHandle) -> ApplicationBound:
    """
    P(|m_tilde_n - m| >= x) <= 2 E[exp(-J(x) X_{n-1})]            (plain)
                            <= 2 inf_{p>1} (E[exp(-(p-1) J(x) X_{n-1})])^(1/p)

    `pop_mgf` is the handle v -> log E[exp(v X_{n-1})]. Both forms are
    returned; the optimized one is the value.
    """
    J = _rate_at(x, n, offspring_rate)
    parameters = {"x": x, "n": n}
    if J == 0:
        return _zero_rate(parameters)

    plain = 2.0 * pop_mgf.evaluate(-J)
    optimized, best = _optimized(J, pop_mgf)
    return ApplicationBound(
        value=optimized,
        components={"J": J, "plain": plain, "optimized": optimized},
        parameters=parameters,
        method="optimized",
        argmin=best.p,
        notes=best.notes + _flavor_notes(pop_mgf),
    )


def harris_bound(x: float, n: int, offspring_rate, totalpop_mgf: MgfHandle) -> ApplicationBound:
    """P(|m_hat_n - m| >= x) <= 2 inf_{p>1} (E[exp(-(p-1) J(x) S_{n-1})])^(1/p)"""
    J = _rate_at(x, n, offspring_rate)
    parameters = {"x": x, "n": n}
    if J == 0:
        return _zero_rate(parameters)

    optimized, best = _optimized(J, totalpop_mgf)
    return ApplicationBound(
        value=optimized,
        components={"J": J, "optimized": optimized},
        parameters=parameters,
        method="optimized",
        argmin=best.p,
        notes=best.notes + _flavor_notes(totalpop_mgf),
    )


def geometric_branching_bound(x: float, n: int, p: float) -> ApplicationBound:
    """
    Geometric(p) offspring on {1, 2, ..} (m = 1/p), from E[s^{X_k}] <= p^k s / (1 - s):
    P(|m_tilde_n - m| >= x) <= 2 p^n exp(-J(x)) / (p (1 - exp(-J(x))))
    """
    if not 0 < p < 1:
        raise ParameterError("p must lie in (0, 1)", f"got {p!r}")
    rate = offspring_rate(make_distribution("geometric", p=p))
    J = _rate_at(x, n, rate)
    if not J > 0:
        raise ParameterError("Geometric branching bound needs J(x) > 0", f"x={x!r}")

    log_value = math.log(2.0) + (n - 1) * math.log(p) - J - math.log(-math.expm1(-J))
    substitution = 2.0 * geometric_population_bound(p, n - 1).evaluate(-J)
    return ApplicationBound(
        value=math.exp(log_value),
        components={"J": J, "pgf_substitution": substitution, "m": 1 / p},
        parameters={"x": x, "n": n, "p": p},
        method="closed-form",
        notes=["X_{n-1} pgf bound p^(n-1) s / (1 - s) at s = exp(-J(x))"],
    )


__all__ = ["offspring_rate", "lotka_nagaev_bound", "harris_bound", "geometric_branching_bound"]
