"""
Seeded simulators for the regression, AR(1) and Galton-Watson models.

Each call draws one path from the substream given by `seed` (a master seed,
a (master seed, path index) tuple or a live Generator), so paths can be
produced in any order and in parallel with identical results.
"""

import math
from typing import Optional

import numpy as np
import structlog

from models.distribution import CenteredVariable
from models.processes import AR1Model, BranchingModel, MartingalePath, RegressionModel
from processes.kernels import ar1_recursion, ratio_series, running_sums
from utils.errors import ParameterError, SimulationError
from utils.random_streams import SubstreamId, substream

logger = structlog.get_logger(__name__)


def _check_horizon(n: int) -> int:
    if int(n) != n or n < 1:
        raise ParameterError("Horizon must be a positive integer", f"got {n!r}")
    return int(n)


def _with_origin(series: np.ndarray) -> np.ndarray:
    """Prepend NaN for k = 0, where no estimator is defined"""
    return np.concatenate(([math.nan], series))


def _draw_noise(model: RegressionModel, rng: np.random.Generator, count: int) -> np.ndarray:
    if isinstance(model.noise, CenteredVariable):
        return model.noise.sample(rng, count)
    return model.noise.sampler(rng, count)


def simulate_regression(
    model: RegressionModel,
    n: int,
    seed: SubstreamId,
    path_index: Optional[int] = None,
) -> MartingalePath:
    """
    dM_k = phi_{k-1} eps_k and <M>_n = sigma2 sum phi_{k-1}^2.

    `state` holds the regressors phi_0..phi_{n-1}; the least-squares series
    theta_hat is computed from the responses X_k = theta phi_{k-1} + eps_k.
    """
    n = _check_horizon(n)
    rng = substream(seed)
    notes = []

    if model.paired:
        # pairs (phi_k, eps_k) for k = 0..n; eps_k shares the sign of phi_k
        draws = model.regressor.sampler(rng, n + 1)
        phi = draws[:n]
        noise = np.sign(draws[1:]) * np.abs(_draw_noise(model, rng, n))
        notes.append("paired regressor/noise variant")
    else:
        phi = model.regressor.sampler(rng, n)
        noise = _draw_noise(model, rng, n)

    response = model.theta * phi + noise
    increments = phi * noise
    martingale, total, predictable = running_sums(increments, model.sigma2 * phi * phi)

    sum_squares = np.cumsum(phi * phi)
    theta_hat = _with_origin(ratio_series(np.cumsum(phi * response), sum_squares))
    if sum_squares[-1] == 0:
        notes.append("degenerate regressor: least-squares estimator undefined")

    return MartingalePath(
        model="regression",
        n=n,
        increments=np.concatenate(([0.0], increments)),
        martingale=martingale,
        total_variation=total,
        predictable_variation=predictable,
        state=phi,
        estimators={"theta_hat": theta_hat},
        target=model.theta,
        path_index=path_index,
        notes=notes,
    )


def simulate_ar1(
    model: AR1Model,
    n: int,
    seed: SubstreamId,
    path_index: Optional[int] = None,
) -> MartingalePath:
    """
    AR(1) path X_0..X_n with the least-squares estimator theta_hat, the
    Yule-Walker estimator theta_tilde and f_k = X_k^2 / sum_{j<=k} X_j^2.
    """
    n = _check_horizon(n)
    rng = substream(seed)

    x0 = 0.0 if model.zero_start else rng.normal(0.0, math.sqrt(model.initial_variance))
    noise = rng.normal(0.0, math.sqrt(model.sigma2), size=n)
    states = ar1_recursion(float(x0), float(model.theta), noise)

    previous = states[:-1]
    increments = previous * noise
    martingale, total, predictable = running_sums(increments, model.sigma2 * previous * previous)

    cross = np.cumsum(previous * states[1:])
    squares_all = np.cumsum(states * states)  # sum_{j=0}^{k} X_j^2
    theta_hat = _with_origin(ratio_series(cross, np.cumsum(previous * previous)))
    theta_tilde = _with_origin(ratio_series(cross, squares_all[1:]))
    f_series = ratio_series(states * states, squares_all)
    f_series[0] = math.nan

    return MartingalePath(
        model="ar1",
        n=n,
        increments=np.concatenate(([0.0], increments)),
        martingale=martingale,
        total_variation=total,
        predictable_variation=predictable,
        state=states,
        estimators={"theta_hat": theta_hat, "theta_tilde": theta_tilde, "f": f_series},
        target=model.theta,
        off_assumption=model.zero_start,
        path_index=path_index,
        notes=["X_0 = 0 start"] if model.zero_start else [],
    )


def simulate_galton_watson(
    model: BranchingModel,
    n: int,
    seed: SubstreamId,
    path_index: Optional[int] = None,
) -> MartingalePath:
    """
    Population X_0 = 1..X_n, xi_k = X_k - m X_{k-1}, <M>_n = sigma2 S_{n-1}
    with S_k = X_0 + .. + X_k. Estimators: Lotka-Nagaev m_tilde = X_k / X_{k-1}
    and Harris m_hat = (S_k - 1) / S_{k-1}.
    """
    n = _check_horizon(n)
    rng = substream(seed)
    draw = model.offspring.sum_sampler

    population = [1]
    for _ in range(n):
        population.append(draw(rng, population[-1]) if population[-1] > 0 else 0)

    states = np.asarray(population, dtype=float)
    extinct = population[-1] == 0
    if extinct and model.extinction_policy == "error":
        raise SimulationError("Population died out", path_index=path_index, detail=f"horizon {n}")

    previous = states[:-1]
    m = model.mean
    increments = states[1:] - m * previous
    martingale, total, predictable = running_sums(increments, model.sigma2 * previous)

    sizes = np.cumsum(states)
    m_tilde = _with_origin(ratio_series(states[1:], previous))
    m_hat = _with_origin(ratio_series(sizes[1:] - 1.0, sizes[:-1]))

    return MartingalePath(
        model="galton-watson",
        n=n,
        increments=np.concatenate(([0.0], increments)),
        martingale=martingale,
        total_variation=total,
        predictable_variation=predictable,
        state=states,
        estimators={"m_tilde": m_tilde, "m_hat": m_hat},
        target=m,
        extinct=extinct,
        off_assumption=extinct,
        path_index=path_index,
        notes=["extinct before the horizon"] if extinct else [],
    )


def simulate(model, n: int, seed: SubstreamId, path_index: Optional[int] = None) -> MartingalePath:
    """Dispatch on the model type"""
    if isinstance(model, RegressionModel):
        return simulate_regression(model, n, seed, path_index)
    if isinstance(model, AR1Model):
        return simulate_ar1(model, n, seed, path_index)
    if isinstance(model, BranchingModel):
        return simulate_galton_watson(model, n, seed, path_index)
    raise ParameterError("Unknown process model", type(model).__name__)


__all__ = ["simulate_regression", "simulate_ar1", "simulate_galton_watson", "simulate"]
