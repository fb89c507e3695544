"""Azuma-Hoeffding, Freedman and De la Pena tail bounds."""

import math
from typing import Sequence, Tuple

from pydantic import ValidationError

from models.bounds import BoundParams, BoundResult
from utils.errors import ParameterError


def validated_params(**kwargs) -> BoundParams:
    """BoundParams with pydantic errors turned into ParameterError"""
    try:
        return BoundParams(**kwargs)
    except ValidationError as e:
        problems = "; ".join(f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors())
        raise ParameterError("Invalid bound parameters", problems) from e


def azuma_hoeffding(x: float, ranges: Sequence[Tuple[float, float]]) -> BoundResult:
    """P(|M_n| >= x) <= 2 exp(-2 x^2 / sum (b_k - a_k)^2) for a_k <= dM_k <= b_k"""
    params = validated_params(x=x, sided="two")
    if not ranges:
        raise ParameterError("Azuma-Hoeffding needs at least one increment range")
    spread = 0.0
    for k, (a_k, b_k) in enumerate(ranges, start=1):
        if not a_k < b_k:
            raise ParameterError(f"Increment range {k} is empty", f"a={a_k!r} >= b={b_k!r}")
        spread += (b_k - a_k) ** 2
    raw = 2.0 * math.exp(-2.0 * params.x**2 / spread)
    return BoundResult.from_raw(raw, params={"x": x, "n": len(ranges)})


def freedman(x: float, y: float, c: float) -> BoundResult:
    """P(M_n >= x, <M>_n <= y) <= exp(-x^2 / (2 (y + c x))) for dM_k <= c"""
    params = validated_params(x=x, y=y, c=c)
    raw = math.exp(-params.x**2 / (2.0 * (params.y + params.c * params.x)))
    return BoundResult.from_raw(raw, notes=["event: M_n >= x and <M>_n <= y"], params=params.to_dict())


def delapena(x: float, y: float, sided: str = "one") -> BoundResult:
    """
    Conditionally symmetric martingales:
    P(M_n >= x, [M]_n <= y) <= exp(-x^2 / (2y)), twice that for |M_n|.
    """
    params = validated_params(x=x, y=y, sided=sided)
    raw = params.leading_factor * math.exp(-params.x**2 / (2.0 * params.y))
    event = "|M_n| >= x" if params.sided == "two" else "M_n >= x"
    return BoundResult.from_raw(raw, notes=[f"event: {event} and [M]_n <= y"], params=params.to_dict())


__all__ = ["validated_params", "azuma_hoeffding", "freedman", "delapena"]
