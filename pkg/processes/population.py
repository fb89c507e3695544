"""
Moment generating functions of the Galton-Watson population X_k and of the
total progeny S_k = X_0 + .. + X_k, started from X_0 = 1.

With f the offspring generating function, E[s^{X_k}] = f(f(..f(s))) (k
times) and E[s^{S_k}] = s f(E[s^{S_{k-1}}]). Both are iterated in log
space, u -> cgf(u), so that very negative arguments do not underflow.
"""

import math
from functools import lru_cache

from distributions.catalog import cgf
from models.bounds import MgfHandle
from models.common import below, nonpositive
from models.distribution import DistributionSpec
from utils.errors import ParameterError


def _check(offspring: DistributionSpec, k: int) -> None:
    if offspring.kind != "discrete" or offspring.lower < 0:
        raise ParameterError("Offspring law must be integer valued on [0, inf)", offspring.label)
    if k < 0:
        raise ParameterError("Generation must be nonnegative", f"got {k!r}")


def log_population_mgf(offspring: DistributionSpec, k: int, v: float) -> float:
    """log E[exp(v X_k)] for v <= 0"""
    u = v
    for _ in range(k):
        u = cgf(offspring, u)
    return u


def log_total_population_mgf(offspring: DistributionSpec, k: int, v: float) -> float:
    """log E[exp(v S_k)] for v <= 0"""
    u = v
    for _ in range(k):
        u = v + cgf(offspring, u)
    return u


def population_mgf(offspring: DistributionSpec, k: int) -> MgfHandle:
    _check(offspring, k)
    cached = lru_cache(maxsize=4096)(lambda v: log_population_mgf(offspring, k, v))
    return MgfHandle(
        log_evaluator=cached,
        domain=nonpositive(),
        flavor="exact",
        description=f"X_{k} of {offspring.label}",
    )


def total_population_mgf(offspring: DistributionSpec, k: int) -> MgfHandle:
    _check(offspring, k)
    cached = lru_cache(maxsize=4096)(lambda v: log_total_population_mgf(offspring, k, v))
    return MgfHandle(
        log_evaluator=cached,
        domain=nonpositive(),
        flavor="exact",
        description=f"S_{k} of {offspring.label}",
    )


def geometric_population_mgf(p: float, k: int) -> MgfHandle:
    """Exact handle: with Geometric(p) offspring on {1, 2, ..}, X_k ~ Geometric(p^k)"""
    if not 0 < p < 1:
        raise ParameterError("p must lie in (0, 1)", f"got {p!r}")
    log_pk = k * math.log(p)
    qk = -math.expm1(log_pk)
    return MgfHandle(
        log_evaluator=lambda v: log_pk + v - math.log1p(-qk * math.exp(v)),
        domain=nonpositive(),
        flavor="exact",
        description=f"X_{k} of geometric(p={p:g})",
    )


def geometric_population_bound(p: float, k: int) -> MgfHandle:
    """Upper-bound handle v -> p^k e^v / (1 - e^v), from E[s^{X_k}] <= p^k s / (1 - s)"""
    if not 0 < p < 1:
        raise ParameterError("p must lie in (0, 1)", f"got {p!r}")
    log_pk = k * math.log(p)
    return MgfHandle(
        log_evaluator=lambda v: log_pk + v - math.log(-math.expm1(v)),
        domain=below(0.0),
        flavor="upper-bound",
        description=f"p^k s/(1-s) bound for X_{k}, p={p:g}",
    )


__all__ = [
    "log_population_mgf",
    "log_total_population_mgf",
    "population_mgf",
    "total_population_mgf",
    "geometric_population_mgf",
    "geometric_population_bound",
]
