"""
Tail bounds for the least-squares estimator of the stable regression
X_{k+1} = theta phi_k + eps_{k+1}.
"""

import math

import structlog

from bounds.mgf import iid_sum
from bounds.self_normalized import optimized_bound
from distributions.catalog import make_distribution, square_cgf
from models.applications import ApplicationBound
from models.bounds import MgfHandle
from models.distribution import CenteredVariable, DistributionSpec
from transforms.convex import RateFunction
from utils.errors import ParameterError

logger = structlog.get_logger(__name__)


def regressor_square_cgf(regressor: DistributionSpec) -> MgfHandle:
    """H(t) = log E[exp(t phi^2)]"""
    return square_cgf(regressor)


def noise_square_rate(noise) -> RateFunction:
    """I(z) = sup over 0 <= t <= c of z t - L(t), with L(t) = log E[exp(t eps^2)]"""
    handle = square_cgf(noise)
    name = noise.name if isinstance(noise, CenteredVariable) else noise.label
    return RateFunction(handle, 0.0, None, description=f"square of {name}")


def regression_bound(
    x: float,
    y: float,
    n: int,
    regressor_cgf: MgfHandle,
    noise_sq_rate: RateFunction,
    sigma2: float,
    paired: bool = False,
) -> ApplicationBound:
    """
    P(|theta_hat_n - theta| >= x) <= term1 + term2 with

        term1 = 2 inf_{p>1} exp((n/p) H(-(p-1) x^2 / (2 sigma2 (1 + y))))
        term2 = exp(-n I(sigma2 y / n))

    For i.i.d. (phi, eps) pairs with symmetric eps (paired=True) the factor
    1 + y becomes y.
    """
    if x < 0 or not y > 0 or n < 1 or not sigma2 > 0:
        raise ParameterError("Regression bound needs x >= 0, y > 0, n >= 1, sigma2 > 0", f"x={x}, y={y}, n={n}, sigma2={sigma2}")

    divisor = y if paired else 1 + y
    term1 = optimized_bound(2.0, x * x / (sigma2 * divisor), 0.0, 1.0, iid_sum(regressor_cgf, n))

    rate = noise_sq_rate.transform(sigma2 * y / n)
    term2 = 0.0 if rate.infinite else math.exp(-n * rate.value)

    notes = list(term1.notes)
    if rate.infinite:
        notes.append("rate infinite: sum of squared noise cannot exceed sigma2 y")
    if paired:
        notes.append("paired regressor/noise: 1 + y replaced by y")

    logger.debug("regression_bound", x=x, y=y, n=n, term1=term1.raw, term2=term2)
    return ApplicationBound(
        value=term1.raw + term2,
        components={"term1": term1.raw, "term2": term2, "rate": rate.value},
        parameters={"x": x, "y": y, "n": n, "sigma2": sigma2, "paired": paired},
        method="optimized",
        argmin=term1.argmin_p,
        notes=notes,
    )


def regression_bernoulli_gaussian_bound(x: float, n: int, p: float, tau2: float) -> ApplicationBound:
    """
    Centered Bernoulli(p) noise and N(0, tau2) regressors:
    2 exp(-(n/4) log(1 + tau2 x^2 / (2 r^2))) with r = max(p, q), q = 1 - p.

    The same value is rebuilt from the squared-regressor cgf H as
    2 exp((n/2) H(-x^2 / (4 r^2))) and returned as `generic_h`.
    """
    if not 0 < p < 1 or not tau2 > 0 or x < 0 or n < 1:
        raise ParameterError("Need 0 < p < 1, tau2 > 0, x >= 0, n >= 1", f"p={p}, tau2={tau2}, x={x}, n={n}")

    q = 1 - p
    r = max(p, q)
    closed = 2.0 * math.exp(-(n / 4) * math.log1p(tau2 * x * x / (2 * r * r)))

    H = regressor_square_cgf(make_distribution("normal", m=0.0, sigma2=tau2))
    generic = 2.0 * math.exp((n / 2) * H.log_value(-x * x / (4 * r * r)))

    return ApplicationBound(
        value=closed,
        components={"closed_form": closed, "generic_h": generic, "r": r, "q": q, "variation_ratio": r * r / (p * q)},
        parameters={"x": x, "n": n, "p": p, "tau2": tau2},
        method="closed-form",
        notes=["[M]_n <= (r^2 / pq) <M>_n on every path"],
    )


__all__ = [
    "regressor_square_cgf",
    "noise_square_rate",
    "regression_bound",
    "regression_bernoulli_gaussian_bound",
]
