from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field

Method = Literal["closed-form", "optimized", "cross-check"]


class ApplicationBound(BaseModel):
    """Right side of an estimator tail inequality with its breakdown"""

    value: float = Field(ge=0)
    components: Dict[str, float] = Field(default_factory=dict)
    parameters: Dict[str, Any] = Field(default_factory=dict)
    method: Method = "closed-form"
    argmin: Optional[float] = None  # p* or y* of the optimized route
    notes: List[str] = Field(default_factory=list)

    @property
    def raw(self) -> float:
        return self.value

    @property
    def clamped(self) -> float:
        return min(self.value, 1.0)

    @property
    def theoretical(self) -> float:
        return self.clamped

    def to_dict(self) -> Dict[str, Any]:
        return {
            "bound_raw": self.value,
            "bound_clamped": self.clamped,
            "method": self.method,
            "argmin": self.argmin,
            "components": dict(self.components),
            "parameters": dict(self.parameters),
            "notes": "; ".join(self.notes),
        }


__all__ = ["ApplicationBound"]
