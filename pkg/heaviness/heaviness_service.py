import math
from typing import List, Optional, Sequence, Union

import numpy as np
import structlog
from scipy import stats

from config.settings import settings
from distributions.catalog import centered, expect
from models.distribution import CenteredVariable, DistributionSpec
from models.heaviness import ClosedFormCheck, GridPolicy, HeavinessReport
from utils.errors import IntegrationError, ParameterError
from utils.numerics import integrate_segments

logger = structlog.get_logger(__name__)


class HeavinessService:
    """Truncated means, the H function and the heavy-on-left classifier"""

    def __init__(self):
        self.tolerance = settings.HEAVINESS_TOLERANCE
        self.grid_points = settings.HEAVINESS_GRID_POINTS

    # Truncation diagnostics

    def truncated_mean(self, x: CenteredVariable, a: float) -> float:
        """E[T_a(X)] with T_a(X) = min(|X|, a) sign(X)"""
        self._check_level(a)
        if x.kind == "discrete":
            values, probs = x.atoms(settings.TAIL_MASS)
            return float(np.sum(probs * np.clip(values, -a, a)))

        knots = [0.0, -a, a] + self._knots(x, a, signed=True)
        inner, _ = integrate_segments(
            lambda u: u * x.density(u),
            [k for k in knots if -a <= k <= a],
            epsabs=settings.QUAD_EPSABS,
            epsrel=settings.QUAD_EPSREL,
            max_error=self.tolerance,
        )
        return float(-a * x.cdf(-a) + inner + a * x.sf(a))

    def h_function(self, x: CenteredVariable, a: float) -> float:
        """
        H(a) = integral over [0, a] of F(-u) - (1 - F(u-)).

        For discrete laws the integrand is constant between the points |x_k|,
        so the integral is summed exactly on those segments (the midpoint of
        a segment is never an atom, which settles the left limits).
        """
        self._check_level(a)
        if x.kind == "discrete":
            values, _ = x.atoms(settings.TAIL_MASS)
            inside = np.abs(values[(values != 0) & (np.abs(values) < a)])
            edges = np.unique(np.concatenate(([0.0, a], inside)))
            mids = (edges[:-1] + edges[1:]) / 2
            integrand = x.cdf(-mids) - x.sf(mids)
            return float(np.sum(integrand * np.diff(edges)))

        total, _ = integrate_segments(
            lambda u: x.cdf(-u) - x.sf(u),
            [0.0, a] + self._knots(x, a, signed=False),
            epsabs=settings.QUAD_EPSABS,
            epsrel=settings.QUAD_EPSREL,
            max_error=self.tolerance,
        )
        return float(total)

    def h_curve(self, x: CenteredVariable, a_grid: Sequence[float]) -> List[float]:
        return [self.h_function(x, a) for a in a_grid]

    # Closed forms for nonnegative laws

    def h_closed_form_discrete(self, dist: Union[DistributionSpec, CenteredVariable], a: float) -> float:
        """
        Closed form of H(a) for an integer valued Y >= 0 with mean m:
        -a + sum_{k=[m-a]}^{[m+a]} s_k - s_[m+a] + {m+a} s_[m+a] - {m-a} s_[m-a]
        where s_n = P(Y <= n), s_n = 0 for n < 0, [.] is floor and {.} the
        fractional part.
        """
        self._check_level(a)
        base = self._nonnegative_base(dist)
        if base.kind != "discrete" or not base.lattice:
            raise ParameterError("Closed form needs an integer valued law", base.label)

        m = base.mean
        lo, hi = m - a, m + a
        k_lo, k_hi = math.floor(lo), math.floor(hi)
        ks = np.arange(k_lo, k_hi + 1)

        def s(k):
            return np.where(np.asarray(k) < 0, 0.0, base.cdf(k))

        total = float(np.sum(s(ks)))
        s_hi, s_lo = float(s(k_hi)), float(s(k_lo))
        return -a + total - s_hi + (hi - k_hi) * s_hi - (lo - k_lo) * s_lo

    def h_closed_form_continuous(self, dist: Union[DistributionSpec, CenteredVariable], a: float) -> ClosedFormCheck:
        """
        Closed form -a + 2a G(a_m) + integral over [a_m, m+a] of (m+a-u) g(u)
        with a_m = min(m - a, 0), g the density of Y >= 0 and G its cdf.

        The generic integral is returned as the value; `discrepancy` is set
        when the closed form does not reproduce it.
        """
        self._check_level(a)
        base = self._nonnegative_base(dist)
        if base.kind != "continuous":
            raise ParameterError("Closed form needs a law with a density", base.label)

        top = base.mean + a
        # a_m <= 0 and Y >= 0: G(a_m) = 0 and the integral starts at 0
        knots = [0.0, top] + [k for k in (base.mean, base.lower) if 0.0 < k < top]
        body, _ = integrate_segments(
            lambda u: (top - u) * base.density(u),
            knots,
            epsabs=settings.QUAD_EPSABS,
            epsrel=settings.QUAD_EPSREL,
            max_error=self.tolerance,
        )
        closed = -a + body
        generic = self.h_function(centered(base), a)
        discrepancy = abs(closed - generic) > self.tolerance
        if discrepancy:
            logger.debug("closed_form_mismatch", law=base.label, a=a, closed=closed, generic=generic)
        return ClosedFormCheck(a=a, value=generic, closed_form=closed, discrepancy=discrepancy)

    # Classification

    def grid_for(self, x: CenteredVariable, policy: Optional[GridPolicy] = None) -> List[float]:
        """Geometric grid around the scale of X plus the |atoms| inside it"""
        policy = policy or GridPolicy(points=self.grid_points)
        if policy.a_grid is not None:
            return sorted(set(policy.a_grid))

        scale = x.scale if math.isfinite(x.scale) and x.scale > 0 else 1.0
        lo, hi = scale * 10 ** (-policy.decades), scale * 10**policy.decades
        grid = set(np.geomspace(lo, hi, policy.points).tolist())
        if policy.include_knots and x.kind == "discrete":
            values, _ = x.atoms(settings.TAIL_MASS)
            grid.update(float(abs(v)) for v in values if lo <= abs(v) <= hi)
        return sorted(grid)

    def classify(
        self,
        x: CenteredVariable,
        policy: Optional[GridPolicy] = None,
        tolerance: Optional[float] = None,
    ) -> HeavinessReport:
        """heavy-left if H >= -eps on the grid, heavy-right if H <= eps, symmetric if both"""
        eps = self.tolerance if tolerance is None else tolerance
        if eps <= 0:
            raise ParameterError("Classification tolerance must be positive", f"got {eps!r}")

        grid = self.grid_for(x, policy)
        values: List[float] = []
        notes: List[str] = []
        failed = False
        for a in grid:
            try:
                values.append(self.h_function(x, a))
            except IntegrationError as e:
                values.append(math.nan)
                if not failed:
                    notes.append(f"integration failed at a={a:.6g}: {e}")
                failed = True

        finite = [v for v in values if math.isfinite(v)]
        min_h = min(finite) if finite else math.nan
        max_h = max(finite) if finite else math.nan

        if failed:
            label = "inconclusive"
        elif max(abs(min_h), abs(max_h)) <= eps:
            label = "symmetric"
        elif min_h >= -eps:
            label = "heavy-left"
        elif max_h <= eps:
            label = "heavy-right"
        else:
            label = "neither"

        logger.info("heaviness_classified", variable=x.name, classification=label, min_h=min_h, max_h=max_h)
        return HeavinessReport(
            variable=x.name,
            classification=label,
            a_grid=grid,
            h_values=values,
            min_h=min_h,
            max_h=max_h,
            tolerance=eps,
            notes=notes,
        )

    def poisson_heavy_left_condition(self, lam: float) -> bool:
        """2 P(Y <= [lam]) >= 1 for Y ~ Poisson(lam)"""
        if not lam > 0:
            raise ParameterError("Poisson parameter must be positive", f"got {lam!r}")
        return bool(2 * stats.poisson.cdf(math.floor(lam), lam) >= 1)

    # Exponential moment of the quadratic correction

    def lemma_L(self, x: CenteredVariable, t: float) -> float:
        """L(t) = E[exp(tX - t^2 X^2 / 2)]"""
        if t == 0:
            return 1.0
        knots = (0.0, 1.0 / t)
        return expect(x, lambda u: np.exp(t * u - 0.5 * t * t * u * u), knots=knots)

    # Helpers

    def _check_level(self, a: float) -> None:
        if not a > 0:
            raise ParameterError("Truncation level must be positive", f"got {a!r}")

    def _nonnegative_base(self, dist: Union[DistributionSpec, CenteredVariable]) -> DistributionSpec:
        if isinstance(dist, CenteredVariable):
            if dist.factor != 1.0:
                raise ParameterError("Closed forms are stated for the unscaled law", dist.name)
            dist = dist.base
        if dist.lower < 0:
            raise ParameterError("Closed forms need a law on [0, inf)", dist.label)
        return dist

    def _knots(self, x: CenteredVariable, a: float, signed: bool) -> List[float]:
        """Kinks of the integrand: support ends and a few scale multiples"""
        scale = x.scale if math.isfinite(x.scale) and x.scale > 0 else 1.0
        points = [k * scale for k in (1, 5, 20, 100)]
        points += [abs(x.lower), abs(x.upper)]
        if signed:
            points += [-p for p in points]
        return [p for p in points if math.isfinite(p) and 0 < abs(p) < a]


# Global heaviness service instance
heaviness_service = HeavinessService()


__all__ = ["HeavinessService", "heaviness_service"]
