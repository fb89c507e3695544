"""Constructors and checks for moment generating function handles."""

import math
from typing import Iterable, Sequence

import numpy as np
from scipy.special import logsumexp

from models.bounds import MgfFlavor, MgfHandle
from models.common import Interval, everywhere
from utils.errors import ParameterError


def deterministic(constant: float) -> MgfHandle:
    return MgfHandle.deterministic(constant)


def scaled(handle: MgfHandle, factor: float) -> MgfHandle:
    """Handle of factor * Z from the handle of Z (factor > 0)"""
    if not factor > 0:
        raise ParameterError("Scale factor must be positive", f"got {factor!r}")
    domain = Interval(
        lo=handle.domain.lo / factor,
        hi=handle.domain.hi / factor,
        lo_closed=handle.domain.lo_closed,
        hi_closed=handle.domain.hi_closed,
    )
    return MgfHandle(
        log_evaluator=lambda s: handle.log_value(factor * s),
        domain=domain,
        flavor=handle.flavor,
        description=f"{factor:g} x {handle.description}",
    )


def iid_sum(handle: MgfHandle, count: int) -> MgfHandle:
    """Handle of the sum of `count` independent copies of Z"""
    if count < 1:
        raise ParameterError("Need at least one summand", f"got {count!r}")
    return MgfHandle(
        log_evaluator=lambda s: count * handle.log_value(s),
        domain=handle.domain,
        flavor=handle.flavor,
        description=f"sum of {count} x {handle.description}",
    )


def empirical(samples: Sequence[float], flavor: MgfFlavor = "numeric") -> MgfHandle:
    """Sample average of exp(s Z) over simulated values of Z"""
    values = np.asarray(samples, dtype=float)
    if values.size == 0:
        raise ParameterError("Empirical handle needs at least one sample")
    log_count = math.log(values.size)
    return MgfHandle(
        log_evaluator=lambda s: float(logsumexp(s * values) - log_count),
        domain=everywhere(),
        flavor=flavor,
        description=f"empirical over {values.size} samples",
    )


def check_handle(handle: MgfHandle, grid: Iterable[float], tolerance: float = 1e-9) -> bool:
    """
    The value at 0 is 1 (at least 1 for upper bounds) and the log is convex
    on the grid points inside the domain.
    """
    if handle.domain.contains(0.0):
        at_zero = handle.log_value(0.0)
        if handle.flavor == "upper-bound":
            if at_zero < -tolerance:
                return False
        elif abs(at_zero) > tolerance:
            return False

    points = sorted(s for s in grid if handle.domain.contains(s))
    logs = [handle.log_value(s) for s in points]
    for (s0, l0), (s1, l1), (s2, l2) in zip(zip(points, logs), zip(points[1:], logs[1:]), zip(points[2:], logs[2:])):
        # l1 must lie below the chord from (s0, l0) to (s2, l2)
        chord = l0 + (l2 - l0) * (s1 - s0) / (s2 - s0)
        if l1 > chord + tolerance * max(1.0, abs(chord)):
            return False
    return True


__all__ = ["deterministic", "scaled", "iid_sum", "empirical", "check_handle"]
