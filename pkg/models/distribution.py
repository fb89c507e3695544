import math
from typing import Any, Callable, Dict, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from models.common import Interval


class DistributionSpec(BaseModel):
    """
    A probability law from the catalog.

    Wraps a frozen scipy.stats law for cdf/pmf/pdf evaluation and a numpy
    Generator based sampler. The cgf, when known in closed form, is stored
    together with the interval where E[exp(tY)] is finite.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    params: Dict[str, float]
    kind: Literal["discrete", "continuous"]
    law: Any = Field(repr=False)
    mean: float
    variance: float
    scale: float
    lower: float
    upper: float
    lattice: bool = False
    cgf_closed: Optional[Callable[[float], float]] = Field(default=None, repr=False)
    cgf_domain: Interval = Field(default_factory=Interval)
    sampler: Callable[[np.random.Generator, int], np.ndarray] = Field(repr=False)
    sum_sampler: Optional[Callable[[np.random.Generator, int], int]] = Field(default=None, repr=False)

    @property
    def label(self) -> str:
        args = ", ".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.name}({args})"

    @property
    def variance_finite(self) -> bool:
        return math.isfinite(self.variance)

    @property
    def std(self) -> float:
        return math.sqrt(self.variance) if self.variance_finite else math.inf

    def density(self, y):
        """pmf for discrete laws, pdf for continuous ones"""
        if self.kind == "discrete":
            return self.law.pmf(y)
        return self.law.pdf(y)

    def cdf(self, y):
        return self.law.cdf(y)

    def sf(self, y):
        return self.law.sf(y)

    def cdf_left(self, y):
        """Left limit F(y-); differs from F(y) only at atoms"""
        y = np.asarray(y, dtype=float)
        if self.kind == "continuous":
            return self.law.cdf(y)
        at_atom = np.floor(y) == y
        return np.where(at_atom, self.law.cdf(y) - self.law.pmf(y), self.law.cdf(y))

    def tail_cutoff(self, mass: float) -> int:
        """Smallest integer K with P(Y > K) < mass (discrete laws)"""
        if math.isfinite(self.upper):
            return int(self.upper)
        k = int(max(self.lower, float(self.law.isf(mass))))
        while float(self.law.sf(k)) >= mass:
            k = max(k + 1, int(k * 1.1))
        return k

    def atoms(self, mass: float) -> Tuple[np.ndarray, np.ndarray]:
        """Support points and probabilities up to a tail of at most `mass`"""
        if self.kind != "discrete":
            raise TypeError(f"{self.name} is not a discrete law")
        top = self.tail_cutoff(mass)
        values = np.arange(int(self.lower), top + 1, dtype=float)
        return values, self.law.pmf(values)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "params": dict(self.params),
            "kind": self.kind,
            "mean": self.mean,
            "variance": self.variance,
            "scale": self.scale,
            "lower": self.lower,
            "upper": self.upper,
            "lattice": self.lattice,
            "cgf_closed_form": self.cgf_closed is not None,
            "cgf_domain": self.cgf_domain.to_dict(),
        }


class CenteredVariable(BaseModel):
    """X = factor * (Y - shift) with shift the mean of Y, so E[X] = 0"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    base: DistributionSpec
    shift: float
    factor: float = 1.0

    @property
    def name(self) -> str:
        label = f"centered {self.base.label}"
        return label if self.factor == 1.0 else f"{self.factor:g} x {label}"

    @property
    def kind(self) -> str:
        return self.base.kind

    @property
    def mean(self) -> float:
        return 0.0

    @property
    def variance(self) -> float:
        return self.factor**2 * self.base.variance

    @property
    def scale(self) -> float:
        return self.factor * self.base.scale

    @property
    def lower(self) -> float:
        return self.factor * (self.base.lower - self.shift)

    @property
    def upper(self) -> float:
        return self.factor * (self.base.upper - self.shift)

    def to_base(self, u):
        """Map a value of X back to the scale of Y"""
        return self.shift + np.asarray(u, dtype=float) / self.factor

    def cdf(self, u):
        return self.base.cdf(self.to_base(u))

    def sf(self, u):
        return self.base.sf(self.to_base(u))

    def density(self, u):
        """pdf of X (continuous laws only)"""
        return self.base.density(self.to_base(u)) / self.factor

    def atoms(self, mass: float) -> Tuple[np.ndarray, np.ndarray]:
        values, probs = self.base.atoms(mass)
        return self.factor * (values - self.shift), probs

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return self.factor * (self.base.sampler(rng, count) - self.shift)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "base": self.base.to_dict(),
            "shift": self.shift,
            "factor": self.factor,
            "variance": self.variance,
        }
