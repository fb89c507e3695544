"""
Catalog of example laws and the operations built on them: centering,
scaling, cumulant generating functions (closed form or numeric), sampling
and the cgf of the squared variable.
"""

import math
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np
import structlog
from scipy import stats
from scipy.special import logsumexp

from config.settings import settings
from models.bounds import MgfHandle
from models.common import Interval, below, everywhere, nonpositive
from models.distribution import CenteredVariable, DistributionSpec
from utils.errors import DomainError, IntegrationError, ParameterError
from utils.numerics import integrate_segments
from utils.random_streams import SubstreamId, substream

logger = structlog.get_logger(__name__)

Law = Union[DistributionSpec, CenteredVariable]

# Longest support scanned when summing a discrete series with t > 0
MAX_SERIES_LENGTH = 1 << 22


# Catalog builders

def _check_probability(name: str, p: float) -> None:
    if not 0 < p < 1:
        raise ParameterError(f"{name}: p must lie in (0, 1)", f"got {p!r}")


def _check_positive(name: str, key: str, value: float) -> None:
    if not value > 0 or not math.isfinite(value):
        raise ParameterError(f"{name}: {key} must be positive", f"got {value!r}")


def _bernoulli(p: float) -> DistributionSpec:
    _check_probability("bernoulli", p)
    log_p, log_q = math.log(p), math.log1p(-p)
    return DistributionSpec(
        name="bernoulli",
        params={"p": p},
        kind="discrete",
        law=stats.bernoulli(p),
        mean=p,
        variance=p * (1 - p),
        scale=math.sqrt(p * (1 - p)),
        lower=0.0,
        upper=1.0,
        lattice=True,
        cgf_closed=lambda t: float(np.logaddexp(log_q, log_p + t)),
        cgf_domain=everywhere(),
        sampler=lambda rng, count: rng.binomial(1, p, size=count).astype(float),
        sum_sampler=lambda rng, count: int(rng.binomial(count, p)),
    )


def _geometric(p: float, start: float = 1) -> DistributionSpec:
    _check_probability("geometric", p)
    if start not in (0, 1):
        raise ParameterError("geometric: start must be 0 or 1", f"got {start!r}")
    start = int(start)
    q = 1 - p
    log_p = math.log(p)

    def sum_sampler(rng: np.random.Generator, count: int) -> int:
        if count == 0:
            return 0
        # negative_binomial counts failures before `count` successes
        return count * start + int(rng.negative_binomial(count, p))

    return DistributionSpec(
        name="geometric",
        params={"p": p, "start": float(start)},
        kind="discrete",
        law=stats.geom(p, loc=start - 1),
        mean=start - 1 + 1 / p,
        variance=q / p**2,
        scale=math.sqrt(q) / p,
        lower=float(start),
        upper=math.inf,
        lattice=True,
        cgf_closed=lambda t: log_p + start * t - math.log1p(-q * math.exp(t)),
        cgf_domain=below(-math.log(q)),
        sampler=lambda rng, count: (rng.geometric(p, size=count) + (start - 1)).astype(float),
        sum_sampler=sum_sampler,
    )


def _poisson(lam: float) -> DistributionSpec:
    _check_positive("poisson", "lam", lam)
    return DistributionSpec(
        name="poisson",
        params={"lam": lam},
        kind="discrete",
        law=stats.poisson(lam),
        mean=lam,
        variance=lam,
        scale=math.sqrt(lam),
        lower=0.0,
        upper=math.inf,
        lattice=True,
        cgf_closed=lambda t: lam * math.expm1(t),
        cgf_domain=everywhere(),
        sampler=lambda rng, count: rng.poisson(lam, size=count).astype(float),
        sum_sampler=lambda rng, count: int(rng.poisson(lam * count)),
    )


def _exponential(lam: float) -> DistributionSpec:
    _check_positive("exponential", "lam", lam)
    return DistributionSpec(
        name="exponential",
        params={"lam": lam},
        kind="continuous",
        law=stats.expon(scale=1 / lam),
        mean=1 / lam,
        variance=1 / lam**2,
        scale=1 / lam,
        lower=0.0,
        upper=math.inf,
        cgf_closed=lambda t: -math.log1p(-t / lam),
        cgf_domain=below(lam),
        sampler=lambda rng, count: rng.exponential(1 / lam, size=count),
    )


def _gamma(shape: float, lam: float) -> DistributionSpec:
    _check_positive("gamma", "shape", shape)
    _check_positive("gamma", "lam", lam)
    return DistributionSpec(
        name="gamma",
        params={"shape": shape, "lam": lam},
        kind="continuous",
        law=stats.gamma(shape, scale=1 / lam),
        mean=shape / lam,
        variance=shape / lam**2,
        scale=math.sqrt(shape) / lam,
        lower=0.0,
        upper=math.inf,
        cgf_closed=lambda t: -shape * math.log1p(-t / lam),
        cgf_domain=below(lam),
        sampler=lambda rng, count: rng.gamma(shape, 1 / lam, size=count),
    )


def _pareto(scale: float, lam: float) -> DistributionSpec:
    """Y = scale * exp(Z) with Z ~ Exponential(lam)"""
    _check_positive("pareto", "scale", scale)
    _check_positive("pareto", "lam", lam)
    mean = scale * lam / (lam - 1) if lam > 1 else math.inf
    variance = scale**2 * lam / ((lam - 1) ** 2 * (lam - 2)) if lam > 2 else math.inf
    return DistributionSpec(
        name="pareto",
        params={"scale": scale, "lam": lam},
        kind="continuous",
        law=stats.pareto(b=lam, scale=scale),
        mean=mean,
        variance=variance,
        scale=math.sqrt(variance) if math.isfinite(variance) else scale,
        lower=scale,
        upper=math.inf,
        cgf_domain=nonpositive(),
        sampler=lambda rng, count: scale * np.exp(rng.exponential(1 / lam, size=count)),
    )


def _lognormal(m: float, sigma2: float) -> DistributionSpec:
    """Y = exp(Z) with Z ~ Normal(m, sigma2)"""
    _check_positive("lognormal", "sigma2", sigma2)
    sigma = math.sqrt(sigma2)
    mean = math.exp(m + sigma2 / 2)
    variance = math.expm1(sigma2) * math.exp(2 * m + sigma2)
    return DistributionSpec(
        name="lognormal",
        params={"m": m, "sigma2": sigma2},
        kind="continuous",
        law=stats.lognorm(s=sigma, scale=math.exp(m)),
        mean=mean,
        variance=variance,
        scale=math.sqrt(variance),
        lower=0.0,
        upper=math.inf,
        cgf_domain=nonpositive(),
        sampler=lambda rng, count: rng.lognormal(m, sigma, size=count),
    )


def _normal(m: float = 0.0, sigma2: float = 1.0) -> DistributionSpec:
    _check_positive("normal", "sigma2", sigma2)
    sigma = math.sqrt(sigma2)
    return DistributionSpec(
        name="normal",
        params={"m": m, "sigma2": sigma2},
        kind="continuous",
        law=stats.norm(loc=m, scale=sigma),
        mean=m,
        variance=sigma2,
        scale=sigma,
        lower=-math.inf,
        upper=math.inf,
        cgf_closed=lambda t: m * t + sigma2 * t * t / 2,
        cgf_domain=everywhere(),
        sampler=lambda rng, count: rng.normal(m, sigma, size=count),
    )


def _dirac(value: float) -> DistributionSpec:
    """Point mass at an integer; used for degenerate noise and offspring"""
    if value != int(value):
        raise ParameterError("dirac: value must be an integer", f"got {value!r}")
    v = int(value)
    return DistributionSpec(
        name="dirac",
        params={"value": float(v)},
        kind="discrete",
        law=stats.randint(v, v + 1),
        mean=float(v),
        variance=0.0,
        scale=1.0,
        lower=float(v),
        upper=float(v),
        lattice=True,
        cgf_closed=lambda t: v * t,
        cgf_domain=everywhere(),
        sampler=lambda rng, count: np.full(count, float(v)),
        sum_sampler=lambda rng, count: count * v,
    )


# name -> (builder, parameter defaults; None marks a required parameter)
CATALOG: Dict[str, Tuple[Callable[..., DistributionSpec], Dict[str, Optional[float]]]] = {
    "bernoulli": (_bernoulli, {"p": None}),
    "geometric": (_geometric, {"p": None, "start": 1}),
    "poisson": (_poisson, {"lam": None}),
    "exponential": (_exponential, {"lam": None}),
    "gamma": (_gamma, {"shape": None, "lam": None}),
    "pareto": (_pareto, {"scale": None, "lam": None}),
    "lognormal": (_lognormal, {"m": None, "sigma2": None}),
    "normal": (_normal, {"m": 0.0, "sigma2": 1.0}),
    "dirac": (_dirac, {"value": None}),
}


def catalog_names() -> Sequence[str]:
    return tuple(CATALOG)


def make_distribution(name: str, params: Optional[Dict[str, float]] = None, **kwargs: float) -> DistributionSpec:
    """Build a catalog law from its name and parameters"""
    key = name.strip().lower()
    try:
        builder, defaults = CATALOG[key]
    except KeyError:
        raise ParameterError(f"Unknown distribution {name!r}", f"expected one of {', '.join(CATALOG)}")

    given = {**(params or {}), **kwargs}
    unknown = sorted(set(given) - set(defaults))
    if unknown:
        raise ParameterError(f"{key}: unknown parameter(s) {', '.join(unknown)}", f"accepted: {', '.join(defaults)}")

    values: Dict[str, float] = {}
    for param, default in defaults.items():
        if param in given:
            try:
                values[param] = float(given[param])
            except (TypeError, ValueError) as e:
                raise ParameterError(f"{key}: parameter {param} is not a number", str(e)) from e
        elif default is None:
            raise ParameterError(f"{key}: missing parameter {param}")
        else:
            values[param] = float(default)
    return builder(**values)


# Derived variables

def centered(dist: DistributionSpec) -> CenteredVariable:
    """X = Y - m"""
    if not math.isfinite(dist.mean):
        raise ParameterError(f"Cannot center {dist.label}", "mean is infinite")
    return CenteredVariable(base=dist, shift=dist.mean)


def scaled(x: CenteredVariable, c: float) -> CenteredVariable:
    """The centered variable c X for c > 0"""
    _check_positive("scaled", "c", c)
    return CenteredVariable(base=x.base, shift=x.shift, factor=x.factor * c)


def _base_of(law: Law) -> DistributionSpec:
    return law.base if isinstance(law, CenteredVariable) else law


# Expectations

def support_edges(law: Law, knots: Sequence[float] = ()) -> list:
    """Breakpoints for quadrature over the support of a continuous law"""
    lo, hi = law.lower, law.upper
    center = law.mean if math.isfinite(law.mean) else lo
    spread = law.scale if math.isfinite(law.scale) and law.scale > 0 else 1.0
    points = [lo, hi, center]
    points += [center + k * spread for k in (-20, -5, -1, 1, 5, 20)]
    points += list(knots)
    return sorted({float(p) for p in points if lo <= p <= hi})


def expect(law: Law, func: Callable, knots: Sequence[float] = (), mass: Optional[float] = None) -> float:
    """
    E[func(V)] for the variable V of `law`.

    Discrete laws are summed over the support up to a tail of `mass`
    (settings.TAIL_MASS by default); func must accept numpy arrays there.
    Continuous laws are integrated with quadrature split at the knots.
    """
    if law.kind == "discrete":
        values, probs = law.atoms(mass or settings.TAIL_MASS)
        return float(np.sum(probs * func(values)))

    total, _ = integrate_segments(
        lambda u: func(u) * law.density(u),
        support_edges(law, knots),
        epsabs=settings.QUAD_EPSABS,
        epsrel=settings.QUAD_EPSREL,
    )
    return total


# Cumulant generating functions

def cgf_domain(law: Law) -> Interval:
    """Interval of t where E[exp(tV)] is finite"""
    base = _base_of(law)
    domain = base.cgf_domain
    if isinstance(law, CenteredVariable):
        f = law.factor
        domain = Interval(lo=domain.lo / f, hi=domain.hi / f, lo_closed=domain.lo_closed, hi_closed=domain.hi_closed)
    return domain


def _numeric_cgf(dist: DistributionSpec, t: float) -> float:
    if t == 0:
        return 0.0
    if dist.kind == "discrete":
        values, _ = dist.atoms(settings.TAIL_MASS)
        top = int(values[-1])
        while True:
            support = np.arange(int(dist.lower), top + 1, dtype=float)
            log_terms = t * support + dist.law.logpmf(support)
            total = logsumexp(log_terms)
            if t <= 0 or log_terms[-1] - total < math.log(1e-17):
                return float(total)
            if top >= MAX_SERIES_LENGTH:
                raise IntegrationError("Moment series did not converge", achieved=math.exp(log_terms[-1] - total), requested=1e-17)
            top *= 2

    # shift by the mean so exp() stays in range
    anchor = dist.mean if math.isfinite(dist.mean) else dist.lower
    value = expect(dist, lambda y: np.exp(t * (y - anchor)))
    if not value > 0:
        raise IntegrationError("Moment integral vanished", achieved=abs(value), requested=0.0)
    return math.log(value) + t * anchor


def cgf(law: Law, t: float, method: str = "auto") -> float:
    """
    log E[exp(tV)] for a catalog law or a centered/scaled variable.

    method "auto" uses the closed form when the catalog has one, "numeric"
    forces summation or quadrature. Outside the domain a DomainError is
    raised; numerical failure raises IntegrationError.
    """
    domain = cgf_domain(law)
    if not domain.contains(t):
        raise DomainError(f"Moment generating function of {law.name} diverges", t, str(domain))

    base = _base_of(law)
    factor, shift = (law.factor, law.shift) if isinstance(law, CenteredVariable) else (1.0, 0.0)
    s = factor * t

    if method == "auto" and base.cgf_closed is not None:
        value = base.cgf_closed(s)
    elif method in ("auto", "numeric"):
        value = _numeric_cgf(base, s)
    else:
        raise ParameterError(f"Unknown cgf method {method!r}")
    return float(value - s * shift)


def mgf_handle(law: Law) -> MgfHandle:
    """MgfHandle for V itself (closed form when available)"""
    base = _base_of(law)
    return MgfHandle(
        log_evaluator=lambda s: cgf(law, s),
        domain=cgf_domain(law),
        flavor="exact" if base.cgf_closed is not None else "numeric",
        description=f"mgf of {law.name}",
    )


def _is_zero_mean_normal(law: Law) -> bool:
    base = _base_of(law)
    if base.name != "normal":
        return False
    shift = law.shift if isinstance(law, CenteredVariable) else 0.0
    return abs(base.mean - shift) <= 1e-15 * max(1.0, abs(base.mean))


def square_cgf(law: Law) -> MgfHandle:
    """
    Handle of t -> E[exp(t V^2)] for the variable V of `law`.

    A zero-mean normal gets the closed form -log(1 - 2 s^2 t)/2; discrete
    laws are summed exactly; other laws use quadrature on t <= 0.
    """
    if _is_zero_mean_normal(law):
        var = law.variance
        return MgfHandle(
            log_evaluator=lambda t: -0.5 * math.log1p(-2 * var * t),
            domain=below(1 / (2 * var)),
            flavor="exact",
            description=f"square of {law.name}",
        )

    bounded = math.isfinite(law.lower) and math.isfinite(law.upper)
    domain = everywhere() if bounded else nonpositive()

    if law.kind == "discrete":
        values, probs = law.atoms(settings.TAIL_MASS)
        squares = values**2
        log_probs = np.log(probs, where=probs > 0, out=np.full_like(probs, -np.inf))

        def log_sum(t: float) -> float:
            return float(logsumexp(t * squares + log_probs))

        return MgfHandle(log_evaluator=log_sum, domain=domain, flavor="exact", description=f"square of {law.name}")

    def log_integral(t: float) -> float:
        if t == 0:
            return 0.0
        return math.log(expect(law, lambda u: np.exp(t * u * u), knots=(0.0,)))

    return MgfHandle(log_evaluator=log_integral, domain=domain, flavor="numeric", description=f"square of {law.name}")


# Sampling

def sample(law: Law, seed: SubstreamId, count: int) -> np.ndarray:
    """count i.i.d. draws; the same substream identifier gives the same draws"""
    if int(count) < 1:
        raise ParameterError("Sample size must be at least 1", f"got {count!r}")
    rng = substream(seed)
    if isinstance(law, CenteredVariable):
        return law.sample(rng, int(count))
    return law.sampler(rng, int(count))


__all__ = [
    "CATALOG",
    "Law",
    "catalog_names",
    "make_distribution",
    "centered",
    "scaled",
    "support_edges",
    "expect",
    "cgf_domain",
    "cgf",
    "mgf_handle",
    "square_cgf",
    "sample",
]
