import math
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

Verdict = Literal["pass", "fail", "vacuous", "off-assumption", "inconclusive"]
ReportKind = Literal["tail", "mean", "identity"]

# Column order of verification tables
REPORT_COLUMNS = (
    "x",
    "n",
    "trials",
    "hits",
    "empirical",
    "ci_halfwidth",
    "bound_raw",
    "bound_clamped",
    "verdict",
    "seed",
)


class VerificationReport(BaseModel):
    """
    Monte Carlo evidence for one inequality or identity.

    For tail reports `empirical` is hits / trials; for mean reports it is
    the sample mean of the exponential process and `hits` is unused (0).
    `trials` counts the paths that entered the statistic; excluded paths
    (extinct populations) are counted separately.
    """

    kind: ReportKind = "tail"
    event: str
    x: Optional[float] = None
    n: int
    trials: int = Field(ge=0)
    hits: int = Field(default=0, ge=0)
    empirical: float
    standard_error: float = Field(ge=0)
    z: float = Field(default=3.0, gt=0)
    bound_raw: Optional[float] = None
    bound_clamped: Optional[float] = None
    verdict: Optional[Verdict] = None
    seed: int
    excluded: int = Field(default=0, ge=0)
    off_assumption: bool = False
    notes: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_frequency(self):
        if self.kind == "tail" and not 0.0 <= self.empirical <= 1.0:
            raise ValueError(f"empirical frequency {self.empirical} outside [0, 1]")
        return self

    @property
    def ci_halfwidth(self) -> float:
        return self.z * self.standard_error

    @property
    def theoretical(self) -> Optional[float]:
        return self.bound_clamped

    @property
    def exclusion_rate(self) -> float:
        total = self.trials + self.excluded
        return self.excluded / total if total else 0.0

    def row(self) -> Dict[str, Any]:
        """Flat record in REPORT_COLUMNS order"""
        return {
            "x": math.nan if self.x is None else self.x,
            "n": self.n,
            "trials": self.trials,
            "hits": self.hits,
            "empirical": self.empirical,
            "ci_halfwidth": self.ci_halfwidth,
            "bound_raw": math.nan if self.bound_raw is None else self.bound_raw,
            "bound_clamped": math.nan if self.bound_clamped is None else self.bound_clamped,
            "verdict": self.verdict or "",
            "seed": self.seed,
        }

    def to_dict(self) -> Dict[str, Any]:
        return {
            **self.row(),
            "kind": self.kind,
            "event": self.event,
            "excluded": self.excluded,
            "off_assumption": self.off_assumption,
            "notes": "; ".join(self.notes),
        }


__all__ = ["REPORT_COLUMNS", "ReportKind", "Verdict", "VerificationReport"]
