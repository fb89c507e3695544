"""
Small numerical kernels shared by the transforms, bounds and heaviness code:
golden-section search, knot-split quadrature and Newton polishing of roots.
"""

import math
import warnings
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

from scipy import integrate

from utils.errors import DomainError, IntegrationError, OptimizationError

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2


class SearchResult(NamedTuple):
    x: float
    value: float
    width: float
    at_lower: bool
    at_upper: bool
    iterations: int


def _safe(f: Callable[[float], float]) -> Callable[[float], float]:
    """NaN is treated as +inf so that comparisons stay meaningful"""

    def wrapped(x: float) -> float:
        try:
            y = f(x)
        except OverflowError:
            return math.inf
        except DomainError:
            raise
        except (ZeroDivisionError, ValueError, ArithmeticError) as e:
            raise OptimizationError("Objective evaluation failed", f"at {x!r}: {e}") from e
        y = float(y)
        return math.inf if math.isnan(y) else y

    return wrapped


def golden_section(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-14,
    check_endpoints: bool = True,
    max_iter: int = 10_000,
) -> SearchResult:
    """
    Golden-section search for the minimum of a unimodal f on [lo, hi].

    Shrinks the bracket until its width is below
    max(abs_tol, rel_tol * |x|). With check_endpoints the endpoints are
    evaluated too and win ties, which is how boundary optima are reported.
    """
    f = _safe(f)
    a, b = min(lo, hi), max(lo, hi)
    h = b - a
    if h == 0:
        y = f(a)
        return SearchResult(a, y, 0.0, True, True, 0)

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)

    iterations = 0
    while h > max(abs_tol, rel_tol * max(abs(c), abs(d))) and iterations < max_iter:
        if yc < yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)
        iterations += 1

    x, y = (c, yc) if yc < yd else (d, yd)
    at_lower = at_upper = False
    if check_endpoints:
        y_lo = f(min(lo, hi))
        y_hi = f(max(lo, hi))
        if y_lo <= y and y_lo <= y_hi:
            x, y, at_lower = min(lo, hi), y_lo, True
        elif y_hi <= y:
            x, y, at_upper = max(lo, hi), y_hi, True
    return SearchResult(x, y, h, at_lower, at_upper, iterations)


def golden_section_max(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-14,
    check_endpoints: bool = True,
) -> SearchResult:
    """Golden-section search for the maximum of a unimodal f on [lo, hi]"""
    result = golden_section(lambda t: -f(t), lo, hi, rel_tol, abs_tol, check_endpoints)
    return result._replace(value=-result.value)


def integrate_segments(
    f: Callable[[float], float],
    edges: Sequence[float],
    epsabs: float,
    epsrel: float,
    max_error: Optional[float] = None,
    limit: int = 200,
) -> Tuple[float, float]:
    """
    Adaptive quadrature of f over consecutive segments of `edges`.

    Infinite end points are allowed (QUADPACK maps them by a change of
    variables). Raises IntegrationError when the summed error estimate
    exceeds max_error.
    """
    knots: List[float] = sorted(set(float(e) for e in edges))
    total = 0.0
    error = 0.0
    for left, right in zip(knots[:-1], knots[1:]):
        if right <= left:
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            value, err = integrate.quad(f, left, right, epsabs=epsabs, epsrel=epsrel, limit=limit)
        total += value
        error += err

    budget = max_error if max_error is not None else max(100 * epsabs, epsrel * abs(total))
    if not math.isfinite(total) or error > budget:
        raise IntegrationError("Quadrature did not converge", achieved=error, requested=budget)
    return total, error


def newton_polish(
    g: Callable[[float], float],
    dg: Callable[[float], float],
    x0: float,
    steps: int = 4,
) -> Tuple[float, float]:
    """A few Newton steps on g(x) = 0 keeping the iterate with the smallest |g|"""
    best_x, best_r = x0, abs(g(x0))
    x = x0
    for _ in range(steps):
        slope = dg(x)
        if slope == 0 or not math.isfinite(slope):
            break
        x = x - g(x) / slope
        r = abs(g(x))
        if r < best_r:
            best_x, best_r = x, r
        if r == 0:
            break
    return best_x, best_r


__all__ = [
    "SearchResult",
    "golden_section",
    "golden_section_max",
    "integrate_segments",
    "newton_polish",
]
