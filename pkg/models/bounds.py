import math
from typing import Any, Callable, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from models.common import Interval
from utils.errors import DomainError

MgfFlavor = Literal["exact", "numeric", "upper-bound"]


class MgfHandle(BaseModel):
    """
    s -> E[exp(s Z)] for some nonnegative variable Z (or an upper bound of it).

    The handle stores the log of the moment generating function, which is
    what every optimized bound consumes; the plain value is exp of it.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    log_evaluator: Callable[[float], float] = Field(repr=False)
    domain: Interval = Field(default_factory=Interval)
    flavor: MgfFlavor = "exact"
    description: str = ""

    def log_value(self, s: float) -> float:
        if not self.domain.contains(s):
            raise DomainError("Moment generating function is not finite", s, str(self.domain))
        return float(self.log_evaluator(s))

    def evaluate(self, s: float) -> float:
        return math.exp(self.log_value(s))

    def __call__(self, s: float) -> float:
        return self.evaluate(s)

    @classmethod
    def deterministic(cls, constant: float) -> "MgfHandle":
        """Handle of a variable that is almost surely equal to `constant`"""
        return cls(
            log_evaluator=lambda s: s * constant,
            flavor="exact",
            description=f"deterministic {constant:g}",
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "domain": self.domain.to_dict(),
            "flavor": self.flavor,
            "description": self.description,
        }


class BoundParams(BaseModel):
    """Validated inputs shared by the tail-bound calculators"""

    model_config = ConfigDict(frozen=True)

    x: float = Field(ge=0)
    y: Optional[float] = Field(default=None, gt=0)
    a: float = Field(default=0.0, ge=0)
    b: float = Field(default=1.0, gt=0)
    c: Optional[float] = Field(default=None, gt=0)
    alpha: float = Field(default=1.0, gt=0)
    n: Optional[int] = Field(default=None, ge=1)
    sided: Literal["one", "two"] = "one"

    @property
    def leading_factor(self) -> float:
        return 2.0 if self.sided == "two" else 1.0

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(exclude_none=True)


class BoundResult(BaseModel):
    """Value of a tail bound; raw may exceed 1, clamped never does"""

    raw: float = Field(ge=0)
    clamped: float = Field(ge=0, le=1)
    argmin_p: Optional[float] = None
    notes: List[str] = Field(default_factory=list)
    params: Dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def from_raw(
        cls,
        raw: float,
        argmin_p: Optional[float] = None,
        notes: Optional[List[str]] = None,
        params: Optional[Dict[str, Any]] = None,
    ) -> "BoundResult":
        raw = float(raw)
        return cls(
            raw=raw,
            clamped=min(raw, 1.0),
            argmin_p=argmin_p,
            notes=list(notes or []),
            params=dict(params or {}),
        )

    @property
    def theoretical(self) -> float:
        return self.clamped

    def to_dict(self) -> Dict[str, Any]:
        return {
            "bound_raw": self.raw,
            "bound_clamped": self.clamped,
            "argmin_p": self.argmin_p,
            "notes": "; ".join(self.notes),
        }
