"""
Convex-analysis kernel: Fenchel-Legendre transforms of cumulant generating
functions, the rate-function objects built on them, the Cramer function h,
its inverse y_x and the objective l(y) whose maximizer is y_x.
"""

import math
import sys
from typing import Callable, Optional, Tuple, Union

import structlog
from scipy import optimize

from config.settings import settings
from models.bounds import MgfHandle
from models.common import Interval
from models.transforms import TransformResult
from utils.errors import DomainError, ParameterError
from utils.numerics import golden_section_max, newton_polish

logger = structlog.get_logger(__name__)

LogEvaluator = Callable[[float], float]
CgfLike = Union[MgfHandle, LogEvaluator]

MAX_DOUBLINGS = 60
PROBE_DOUBLINGS = 50
EDGE_SHRINK = 1e-9


def _log_evaluator(cgf: CgfLike) -> LogEvaluator:
    return cgf.log_value if isinstance(cgf, MgfHandle) else cgf


def _concave_objective(cgf: CgfLike, x: float) -> Callable[[float], float]:
    L = _log_evaluator(cgf)

    def objective(t: float) -> float:
        try:
            value = x * t - L(t)
        except (OverflowError, DomainError):
            return -math.inf
        return -math.inf if math.isnan(value) else value

    return objective


def _expand(objective: Callable[[float], float], anchor: float, direction: int) -> Tuple[float, bool]:
    """
    Walk from anchor with doubling steps until the concave objective stops
    increasing. Returns (end, unbounded); unbounded means the objective kept
    growing by more than one unit per doubling up to the cap.
    """
    step = 1.0
    previous = objective(anchor)
    growth = 0.0
    for _ in range(MAX_DOUBLINGS):
        t = anchor + direction * step
        value = objective(t)
        if value <= previous:
            return t, False
        growth = value - previous
        previous = value
        step *= 2
    return anchor + direction * step / 2, growth > 1.0


def fenchel_legendre(cgf: CgfLike, x: float, interval: Tuple[float, float]) -> TransformResult:
    """
    sup over t in [t_lo, t_hi] of x t - L(t).

    Infinite ends are handled by bracket expansion; when the objective grows
    without bound the result is the +inf sentinel.
    """
    t_lo, t_hi = float(interval[0]), float(interval[1])
    if t_lo > t_hi:
        raise ParameterError("Empty transform interval", f"[{t_lo}, {t_hi}]")

    objective = _concave_objective(cgf, x)
    lo, hi = t_lo, t_hi
    if math.isinf(hi):
        anchor = lo if math.isfinite(lo) else 0.0
        hi, unbounded = _expand(objective, anchor, +1)
        if unbounded:
            return TransformResult.unbounded(hi)
    if math.isinf(lo):
        anchor = hi if math.isfinite(t_hi) else 0.0
        lo, unbounded = _expand(objective, min(anchor, hi), -1)
        if unbounded:
            return TransformResult.unbounded(lo)

    result = golden_section_max(objective, lo, hi, rel_tol=settings.GOLDEN_TOLERANCE, abs_tol=1e-14)
    boundary = (result.at_lower and math.isfinite(t_lo)) or (result.at_upper and math.isfinite(t_hi))
    return TransformResult(
        value=result.value,
        arg=result.x,
        residual=result.width,
        boundary_flag=bool(boundary),
    )


def usable_end(domain: Interval, side: int) -> float:
    """Finite end of a cgf domain pulled slightly inside when it is open"""
    end = domain.hi if side > 0 else domain.lo
    if math.isinf(end):
        return end
    closed = domain.hi_closed if side > 0 else domain.lo_closed
    if closed:
        return end
    return end - side * EDGE_SHRINK * max(1.0, abs(end))


def symmetric_radius(cgf: CgfLike) -> float:
    """
    Largest c (up to 2**50) with L finite on [-c, c], found by doubling
    probes and refined by bisection.
    """
    L = _log_evaluator(cgf)

    def finite_at(t: float) -> bool:
        try:
            return math.isfinite(L(t))
        except (DomainError, OverflowError, ValueError, ZeroDivisionError):
            return False

    def radius(direction: int) -> float:
        probe, last_ok = 1.0, 0.0
        for _ in range(PROBE_DOUBLINGS):
            if not finite_at(direction * probe):
                break
            last_ok = probe
            probe *= 2
        else:
            return last_ok
        lo, hi = last_ok, probe
        for _ in range(64):
            mid = (lo + hi) / 2
            if mid in (lo, hi):
                break
            if finite_at(direction * mid):
                lo = mid
            else:
                hi = mid
        return lo * (1 - EDGE_SHRINK)

    c = min(radius(+1), radius(-1))
    if not c > 0:
        raise ParameterError("Cumulant generating function is not finite around 0")
    return c


class RateFunction:
    """I(x) = sup over t in [t_lo, t_hi] of x t - L(t)"""

    def __init__(self, cgf: CgfLike, t_lo: float = 0.0, t_hi: Optional[float] = None, description: str = ""):
        if t_hi is None:
            if not isinstance(cgf, MgfHandle):
                raise ParameterError("Upper transform limit needed for a bare cgf")
            t_hi = usable_end(cgf.domain, +1)
        self.cgf = cgf
        self.t_lo = t_lo
        self.t_hi = t_hi
        self.description = description or (cgf.description if isinstance(cgf, MgfHandle) else "")

    def transform(self, x: float) -> TransformResult:
        return fenchel_legendre(self.cgf, x, (self.t_lo, self.t_hi))

    def __call__(self, x: float) -> float:
        return self.transform(x).value

    def __repr__(self):
        return f"<RateFunction(on=[{self.t_lo}, {self.t_hi}], {self.description})>"


class SymmetricRate:
    """J(x) = min(I(x), I(-x)) with I the transform on [-c, c]"""

    def __init__(self, cgf: CgfLike, c: Optional[float] = None, description: str = ""):
        self.c = symmetric_radius(cgf) if c is None else c
        if not self.c > 0:
            raise ParameterError("Symmetric transform needs c > 0", f"got {self.c!r}")
        self.rate = RateFunction(cgf, -self.c, self.c, description)

    def __call__(self, x: float) -> float:
        return min(self.rate(x), self.rate(-x))

    def __repr__(self):
        return f"<SymmetricRate(c={self.c:g})>"


# Cramer function of the centered unit Poisson law

def cramer_h(y: float) -> float:
    """h(y) = (1 + y) log(1 + y) - y"""
    if y < 0:
        raise ParameterError("Cramer function is defined for y >= 0", f"got {y!r}")
    if y < 1e-3:
        # sum_{k>=2} (-1)^k y^k / (k (k - 1))
        return sum((-1) ** k * y**k / (k * (k - 1)) for k in range(2, 10))
    return (1 + y) * math.log1p(y) - y


def cramer_h_prime(y: float) -> float:
    return math.log1p(y)


def solve_yx(x: float) -> TransformResult:
    """Positive root y_x of h(y) = x^2"""
    if not x > 0:
        raise ParameterError("solve_yx needs x > 0", f"got {x!r}")
    target = x * x

    def g(y: float) -> float:
        return cramer_h(y) - target

    y_hi = 1.0
    while g(y_hi) <= 0:
        y_hi *= 2
    root = optimize.brentq(g, 0.0, y_hi, xtol=1e-300, rtol=4 * sys.float_info.epsilon, maxiter=500)
    root, residual = newton_polish(g, cramer_h_prime, root)
    return TransformResult(value=root, arg=root, residual=residual)


def ar1_ell(y: float, x: float) -> float:
    """l(y) = log(1 + y) / (x^2 + y)"""
    if not y > 0 or not x > 0:
        raise ParameterError("l(y) needs y > 0 and x > 0", f"y={y!r}, x={x!r}")
    return math.log1p(y) / (x * x + y)


def maximize_ell(x: float, span: float = 2.0) -> TransformResult:
    """Maximize l over y by golden section on log y around y_x"""
    center = math.log(solve_yx(x).value)
    result = golden_section_max(
        lambda u: ar1_ell(math.exp(u), x),
        center - span,
        center + span,
        rel_tol=settings.GOLDEN_TOLERANCE,
        abs_tol=1e-12,
    )
    return TransformResult(
        value=result.value,
        arg=math.exp(result.x),
        residual=result.width,
        boundary_flag=result.at_lower or result.at_upper,
    )


__all__ = [
    "fenchel_legendre",
    "usable_end",
    "symmetric_radius",
    "RateFunction",
    "SymmetricRate",
    "cramer_h",
    "cramer_h_prime",
    "solve_yx",
    "ar1_ell",
    "maximize_ell",
]
