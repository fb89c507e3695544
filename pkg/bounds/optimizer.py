import math
from typing import Callable, List, NamedTuple, Optional

import structlog

from config.settings import settings
from utils.numerics import golden_section

logger = structlog.get_logger(__name__)

# search range of u = log(p - 1)
LOG_P_MINUS_ONE_MIN = -12.0


class PResult(NamedTuple):
    p: float
    value: float
    at_limit: bool
    notes: List[str]


def optimize_p(
    objective: Callable[[float], float],
    p_max: Optional[float] = None,
    rel_tol: float = 1e-8,
) -> PResult:
    """
    Minimize objective(p) over p in (1, p_max].

    Golden-section search runs on u = log(p - 1) in [-12, log(p_max - 1)].
    The value at p = 2 is always a candidate, so the result is never worse
    than that special case. When the minimum sits at p_max the objective was
    still decreasing there and a "limit" note is attached.
    """
    p_max = float(p_max or settings.P_MAX)
    u_hi = math.log(p_max - 1)

    def in_u(u: float) -> float:
        return objective(1.0 + math.exp(u))

    search = golden_section(in_u, LOG_P_MINUS_ONE_MIN, u_hi, rel_tol=rel_tol, abs_tol=1e-12)
    p_best, value = 1.0 + math.exp(search.x), search.value

    at_limit = search.at_upper
    if search.at_upper:
        p_best = p_max

    value_at_two = objective(2.0)
    if value_at_two < value:
        p_best, value, at_limit = 2.0, value_at_two, False

    notes: List[str] = []
    if at_limit:
        notes.append(f"limit: objective still decreasing at p_max={p_max:g}")
    logger.debug("optimize_p", p=p_best, value=value, at_limit=at_limit, iterations=search.iterations)
    return PResult(p_best, value, at_limit, notes)


__all__ = ["PResult", "optimize_p"]
