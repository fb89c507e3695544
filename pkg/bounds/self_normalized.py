"""
Exponential bounds for self-normalized martingales.

Closed forms cover the events with a floor or ceiling on the variations;
the ratio bounds take an infimum over the Hoelder exponent p > 1 and are
driven by an MgfHandle of <M>_n or [M]_n.
"""

import math
from typing import List

import structlog

from bounds.classical import validated_params
from bounds.optimizer import optimize_p
from models.bounds import BoundResult, MgfHandle

logger = structlog.get_logger(__name__)


def _handle_notes(handle: MgfHandle) -> List[str]:
    if handle.flavor == "upper-bound":
        return ["mgf flavor upper-bound: value bounds the formula from above"]
    return []


def optimized_bound(leading: float, kappa: float, a: float, b: float, handle: MgfHandle) -> BoundResult:
    """
    leading * inf_{p>1} (E[exp(-(p-1) kappa (ab + b^2 Z / 2))])^(1/p)
    with Z the variable of `handle`, evaluated in log space.
    """
    if kappa == 0:
        return BoundResult.from_raw(leading, notes=["x = 0: trivial bound"])

    def log_objective(p: float) -> float:
        s = (p - 1) * kappa
        return (-s * a * b + handle.log_value(-s * b * b / 2)) / p

    best = optimize_p(log_objective)
    notes = best.notes + _handle_notes(handle)
    return BoundResult.from_raw(leading * math.exp(best.value), argmin_p=best.p, notes=notes)


def thm21(x: float, y: float, sided: str = "two") -> BoundResult:
    """P(|M_n| >= x, [M]_n + <M>_n <= y) <= 2 exp(-x^2 / (2y)); no assumption on M"""
    params = validated_params(x=x, y=y, sided=sided)
    raw = params.leading_factor * math.exp(-params.x**2 / (2.0 * params.y))
    return BoundResult.from_raw(raw, notes=["event: [M]_n + <M>_n <= y"], params=params.to_dict())


def thm22_lower_variation(x: float, y: float, a: float = 0.0, b: float = 1.0, exchange: bool = False) -> BoundResult:
    """P(|M_n| / (a + b<M>_n) >= x, <M>_n >= [M]_n + y) <= 2 exp(-x^2 (ab + b^2 y / 2))"""
    params = validated_params(x=x, y=y, a=a, b=b, sided="two")
    raw = 2.0 * math.exp(-params.x**2 * (params.a * params.b + params.b**2 * params.y / 2))
    notes = ["event: |M_n|/(a + b<M>_n) >= x and <M>_n >= [M]_n + y"]
    if exchange:
        notes = ["exchanged: |M_n|/(a + b[M]_n) >= x and [M]_n >= <M>_n + y"]
    return BoundResult.from_raw(raw, notes=notes, params=params.to_dict())


def thm22_ratio(x: float, y: float, a: float, b: float, qv_mgf: MgfHandle, exchange: bool = False) -> BoundResult:
    """
    P(|M_n| / (a + b<M>_n) >= x, [M]_n <= y<M>_n)
        <= 2 inf_{p>1} (E[exp(-(p-1) x^2/(1+y) (ab + b^2 <M>_n / 2))])^(1/p)
    """
    params = validated_params(x=x, y=y, a=a, b=b, sided="two")
    result = optimized_bound(2.0, params.x**2 / (1 + params.y), params.a, params.b, qv_mgf)
    result.notes.append("exchanged roles of <M>_n and [M]_n" if exchange else "event: [M]_n <= y<M>_n")
    result.params = params.to_dict()
    return result


def thm41(x: float, y: float) -> BoundResult:
    """Heavy-on-left martingales: P(M_n >= x, [M]_n <= y) <= exp(-x^2 / (2y))"""
    params = validated_params(x=x, y=y, sided="one")
    raw = math.exp(-params.x**2 / (2.0 * params.y))
    return BoundResult.from_raw(raw, notes=["event: M_n >= x and [M]_n <= y"], params=params.to_dict())


def thm42_self_normalized(x: float, a: float, b: float, tv_mgf: MgfHandle) -> BoundResult:
    """P(M_n / (a + b[M]_n) >= x) <= inf_{p>1} (E[exp(-(p-1) x^2 (ab + b^2 [M]_n / 2))])^(1/p)"""
    params = validated_params(x=x, a=a, b=b, sided="one")
    result = optimized_bound(1.0, params.x**2, params.a, params.b, tv_mgf)
    result.params = params.to_dict()
    return result


def thm42_with_floor(x: float, y: float, a: float = 0.0, b: float = 1.0) -> BoundResult:
    """P(M_n / (a + b[M]_n) >= x, [M]_n >= y) <= exp(-x^2 (ab + b^2 y / 2))"""
    params = validated_params(x=x, y=y, a=a, b=b, sided="one")
    raw = math.exp(-params.x**2 * (params.a * params.b + params.b**2 * params.y / 2))
    return BoundResult.from_raw(raw, notes=["event: [M]_n >= y"], params=params.to_dict())


def thm42_ratio(x: float, y: float, a: float, b: float, qv_mgf: MgfHandle) -> BoundResult:
    """As thm22_ratio for heavy-on-left martingales: divisor y and leading factor 1"""
    params = validated_params(x=x, y=y, a=a, b=b, sided="one")
    result = optimized_bound(1.0, params.x**2 / params.y, params.a, params.b, qv_mgf)
    result.notes.append("event: [M]_n <= y<M>_n")
    result.params = params.to_dict()
    return result


def subgaussian_self_normalized(x: float, a: float, b: float, alpha: float, qv_mgf: MgfHandle) -> BoundResult:
    """
    Sub-Gaussian martingales (E[exp(t dM_n) | F] <= exp(alpha^2 t^2 d<M>_n / 2)):
    P(M_n / (a + b<M>_n) >= x) <= inf_{p>1} (E[exp(-(p-1) x^2/alpha^2 (ab + b^2 <M>_n / 2))])^(1/p)
    """
    params = validated_params(x=x, a=a, b=b, alpha=alpha, sided="one")
    result = optimized_bound(1.0, params.x**2 / params.alpha**2, params.a, params.b, qv_mgf)
    result.params = params.to_dict()
    return result


__all__ = [
    "optimized_bound",
    "thm21",
    "thm22_lower_variation",
    "thm22_ratio",
    "thm41",
    "thm42_self_normalized",
    "thm42_with_floor",
    "thm42_ratio",
    "subgaussian_self_normalized",
]
