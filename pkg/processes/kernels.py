"""numba kernels for the per-path recursions."""

import numba
import numpy as np


@numba.njit(cache=True)
def ar1_recursion(x0, theta, noise):
    """X_0 = x0, X_k = theta X_{k-1} + noise[k-1] for k = 1..n"""
    n = noise.shape[0]
    states = np.empty(n + 1)
    states[0] = x0
    for k in range(1, n + 1):
        states[k] = theta * states[k - 1] + noise[k - 1]
    return states


@numba.njit(cache=True)
def running_sums(increments, predictable_increments):
    """
    M_k, [M]_k and <M>_k for k = 0..n from the increments dM_1..dM_n and
    the conditional variances E[dM_k^2 | F_{k-1}].
    """
    n = increments.shape[0]
    martingale = np.zeros(n + 1)
    total = np.zeros(n + 1)
    predictable = np.zeros(n + 1)
    for k in range(1, n + 1):
        d = increments[k - 1]
        martingale[k] = martingale[k - 1] + d
        total[k] = total[k - 1] + d * d
        predictable[k] = predictable[k - 1] + predictable_increments[k - 1]
    return martingale, total, predictable


@numba.njit(cache=True)
def ratio_series(numerators, denominators):
    """Elementwise ratio with NaN where the denominator vanishes"""
    out = np.empty(numerators.shape[0])
    for k in range(numerators.shape[0]):
        if denominators[k] == 0.0:
            out[k] = np.nan
        else:
            out[k] = numerators[k] / denominators[k]
    return out
