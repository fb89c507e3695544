import math
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator

Classification = Literal["heavy-left", "heavy-right", "symmetric", "neither", "inconclusive"]


class GridPolicy(BaseModel):
    """How the truncation levels a are chosen when classifying"""

    points: int = Field(default=200, ge=2)
    decades: float = Field(default=3.0, gt=0)  # grid spans scale * 10**(+-decades)
    include_knots: bool = True
    a_grid: Optional[List[float]] = None  # explicit grid overrides the rest

    @field_validator("a_grid")
    @classmethod
    def check_grid(cls, v):
        if v is not None:
            if not v or any(a <= 0 for a in v):
                raise ValueError("a_grid must be a nonempty list of positive levels")
        return v


class HeavinessReport(BaseModel):
    """Classification of a centered variable with its H(a) evidence"""

    variable: str
    classification: Classification
    a_grid: List[float]
    h_values: List[float]
    min_h: float
    max_h: float
    tolerance: float
    notes: List[str] = Field(default_factory=list)

    @field_validator("a_grid")
    @classmethod
    def check_increasing(cls, v):
        if any(a <= 0 for a in v):
            raise ValueError("a_grid entries must be positive")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("a_grid must be strictly increasing")
        return v

    def rows(self) -> List[Dict[str, float]]:
        """(a, H, T_a_mean) rows; E[T_a(X)] = -H(a)"""
        return [{"a": a, "H": h, "T_a_mean": -h if math.isfinite(h) else h} for a, h in zip(self.a_grid, self.h_values)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "variable": self.variable,
            "classification": self.classification,
            "min_h": self.min_h,
            "max_h": self.max_h,
            "tolerance": self.tolerance,
            "grid_points": len(self.a_grid),
            "notes": list(self.notes),
        }


class ClosedFormCheck(BaseModel):
    """A printed closed form for H(a) compared with the generic integral"""

    a: float
    value: float  # authoritative (generic integral)
    closed_form: float
    discrepancy: bool

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump()
