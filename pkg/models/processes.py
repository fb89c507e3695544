import math
from typing import Any, Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.distribution import CenteredVariable, DistributionSpec

NoiseLaw = Union[DistributionSpec, CenteredVariable]


def _mean_of(law: NoiseLaw) -> float:
    return 0.0 if isinstance(law, CenteredVariable) else law.mean


class RegressionModel(BaseModel):
    """X_{k+1} = theta phi_k + eps_{k+1} with i.i.d. regressors and noise"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    theta: float
    regressor: DistributionSpec
    noise: NoiseLaw
    # eps_k = sign(phi_k) |eps'_k|: i.i.d. (phi, eps) pairs with symmetric eps
    paired: bool = False
    allow_degenerate_noise: bool = False

    @model_validator(mode="after")
    def check_noise(self):
        if abs(_mean_of(self.noise)) > 1e-12:
            raise ValueError(f"noise must be centered, mean is {_mean_of(self.noise)!r}")
        if not self.noise.variance > 0 and not self.allow_degenerate_noise:
            raise ValueError("noise variance must be positive")
        if not math.isfinite(self.noise.variance):
            raise ValueError("noise variance must be finite")
        return self

    @property
    def sigma2(self) -> float:
        return self.noise.variance

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": "regression",
            "theta": self.theta,
            "regressor": self.regressor.label,
            "noise": self.noise.name if isinstance(self.noise, CenteredVariable) else self.noise.label,
            "sigma2": self.sigma2,
            "paired": self.paired,
        }


class AR1Model(BaseModel):
    """X_{k+1} = theta X_k + eps_{k+1}, eps ~ N(0, sigma2), X_0 ~ N(0, tau2)"""

    model_config = ConfigDict(frozen=True)

    theta: float
    sigma2: float = Field(default=1.0, gt=0)
    tau2: Optional[float] = Field(default=None, gt=0)
    zero_start: bool = False  # X_0 = 0, outside the tau2 >= sigma2 assumption

    @model_validator(mode="after")
    def check_initial_variance(self):
        if not self.zero_start and self.tau2 is not None and self.tau2 < self.sigma2:
            raise ValueError(f"tau2={self.tau2} must be at least sigma2={self.sigma2}")
        return self

    @property
    def initial_variance(self) -> float:
        if self.zero_start:
            return 0.0
        return self.sigma2 if self.tau2 is None else self.tau2

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": "ar1",
            "theta": self.theta,
            "sigma2": self.sigma2,
            "tau2": self.initial_variance,
            "zero_start": self.zero_start,
        }


class BranchingModel(BaseModel):
    """Galton-Watson process from X_0 = 1 with i.i.d. offspring counts"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    offspring: DistributionSpec
    extinction_policy: Literal["flag", "error"] = "flag"

    @model_validator(mode="after")
    def check_offspring(self):
        law = self.offspring
        if law.kind != "discrete" or law.lower < 0 or law.sum_sampler is None:
            raise ValueError(f"offspring law must be integer valued on [0, inf), got {law.label}")
        if not law.mean > 1:
            raise ValueError(f"offspring mean must exceed 1, got {law.mean!r}")
        return self

    @property
    def mean(self) -> float:
        return self.offspring.mean

    @property
    def sigma2(self) -> float:
        return self.offspring.variance

    @property
    def extinction_possible(self) -> bool:
        return float(self.offspring.density(0)) > 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": "galton-watson",
            "offspring": self.offspring.label,
            "m": self.mean,
            "sigma2": self.sigma2,
            "extinction_policy": self.extinction_policy,
        }


class MartingalePath(BaseModel):
    """
    One simulated trajectory.

    Arrays are indexed by k = 0..n: martingale[0] = 0 and both variations
    start at 0; increments[0] is 0 as well. Estimator series hold NaN where
    the estimator is undefined.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    model: Literal["regression", "ar1", "galton-watson"]
    n: int
    increments: np.ndarray
    martingale: np.ndarray
    total_variation: np.ndarray
    predictable_variation: np.ndarray
    state: np.ndarray
    estimators: Dict[str, np.ndarray] = Field(default_factory=dict)
    target: float  # the estimated parameter (theta or m)
    extinct: bool = False
    off_assumption: bool = False
    path_index: Optional[int] = None
    notes: List[str] = Field(default_factory=list)

    @property
    def M(self) -> float:
        return float(self.martingale[-1])

    @property
    def total(self) -> float:
        return float(self.total_variation[-1])

    @property
    def predictable(self) -> float:
        return float(self.predictable_variation[-1])

    def estimate(self, name: str) -> float:
        """Terminal value of an estimator series"""
        return float(self.estimators[name][-1])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": self.model,
            "n": self.n,
            "M": self.M,
            "total_variation": self.total,
            "predictable_variation": self.predictable,
            "estimators": {k: float(v[-1]) for k, v in self.estimators.items()},
            "extinct": self.extinct,
            "off_assumption": self.off_assumption,
            "path_index": self.path_index,
        }
