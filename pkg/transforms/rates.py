"""Large deviation rate functions of the stable AR(1) estimators."""

import math
from typing import Tuple

from utils.errors import ParameterError


def ar1_interval(theta: float) -> Tuple[float, float]:
    """End points a < b of the branch where the least-squares rate is smooth"""
    root = math.sqrt(theta * theta + 8)
    return (theta - root) / 4, (theta + root) / 4


def _smooth_branch(x: float, theta: float) -> float:
    return 0.5 * math.log((1 + theta * theta - 2 * theta * x) / (1 - x * x))


def ar1_ldp_rates(x: float, theta: float) -> Tuple[float, float]:
    """
    (I(x), J(x)) for the least-squares and Yule-Walker estimators.

    I uses the smooth branch on [a, b] and log|theta - 2x| elsewhere; J uses
    the smooth branch on (-1, 1) and is +inf elsewhere.
    """
    if not abs(theta) < 1:
        raise ParameterError("Rate functions cover the stable case |theta| < 1", f"got theta={theta!r}")

    a, b = ar1_interval(theta)
    if a <= x <= b:
        rate_ls = _smooth_branch(x, theta)
    else:
        rate_ls = math.log(abs(theta - 2 * x))

    rate_yw = _smooth_branch(x, theta) if -1 < x < 1 else math.inf
    return rate_ls, rate_yw


__all__ = ["ar1_interval", "ar1_ldp_rates"]
