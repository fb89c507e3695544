import math
from typing import Any, Dict

from pydantic import BaseModel, ConfigDict, model_validator


class Interval(BaseModel):
    """Real interval with per-end closedness; infinite ends are always open"""

    model_config = ConfigDict(frozen=True)

    lo: float = -math.inf
    hi: float = math.inf
    lo_closed: bool = False
    hi_closed: bool = False

    @model_validator(mode="after")
    def check_order(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval: lo={self.lo} > hi={self.hi}")
        return self

    def contains(self, t: float) -> bool:
        """Membership test honoring open/closed ends"""
        if t < self.lo or t > self.hi:
            return False
        if t == self.lo and not (self.lo_closed and math.isfinite(self.lo)):
            return False
        if t == self.hi and not (self.hi_closed and math.isfinite(self.hi)):
            return False
        return True

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "lo_closed": self.lo_closed,
            "hi_closed": self.hi_closed,
        }

    def __str__(self) -> str:
        left = "[" if self.lo_closed and math.isfinite(self.lo) else "("
        right = "]" if self.hi_closed and math.isfinite(self.hi) else ")"
        return f"{left}{self.lo}, {self.hi}{right}"


def everywhere() -> Interval:
    return Interval()


def nonpositive() -> Interval:
    return Interval(hi=0.0, hi_closed=True)


def below(hi: float) -> Interval:
    return Interval(hi=hi)
