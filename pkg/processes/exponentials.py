"""Exponential (super)martingales evaluated along a simulated path."""

import numpy as np

from models.processes import MartingalePath
from utils.errors import ParameterError


def log_v_process(path: MartingalePath, t: float) -> np.ndarray:
    return t * path.martingale - 0.5 * t * t * (path.total_variation + path.predictable_variation)


def v_process(path: MartingalePath, t: float) -> np.ndarray:
    """V_k(t) = exp(t M_k - t^2 ([M]_k + <M>_k) / 2), V_0 = 1"""
    return np.exp(log_v_process(path, t))


def log_w_process(path: MartingalePath, t: float) -> np.ndarray:
    return t * path.martingale - 0.5 * t * t * path.total_variation


def w_process(path: MartingalePath, t: float) -> np.ndarray:
    """W_k(t) = exp(t M_k - t^2 [M]_k / 2); a supermartingale for t >= 0 when M is heavy on left"""
    return np.exp(log_w_process(path, t))


def log_subgaussian_process(path: MartingalePath, t: float, alpha: float = 1.0) -> np.ndarray:
    return t * path.martingale - 0.5 * alpha * alpha * t * t * path.predictable_variation


def subgaussian_process(path: MartingalePath, t: float, alpha: float = 1.0) -> np.ndarray:
    """exp(t M_k - alpha^2 t^2 <M>_k / 2)"""
    return np.exp(log_subgaussian_process(path, t, alpha))


def log_branching_exponential(path: MartingalePath, t: float, cgf_value: float) -> np.ndarray:
    """t M_k - L(t) S_{k-1} with L the cgf of the centered offspring law"""
    if path.model != "galton-watson":
        raise ParameterError("Branching exponential needs a Galton-Watson path", path.model)
    sizes_before = np.concatenate(([0.0], np.cumsum(path.state)[:-1]))
    return t * path.martingale - cgf_value * sizes_before


def branching_exponential(path: MartingalePath, t: float, cgf_value: float) -> np.ndarray:
    """exp(t M_k - L(t) S_{k-1}); has mean one for every k"""
    return np.exp(log_branching_exponential(path, t, cgf_value))


# variant name -> log process
LOG_PROCESSES = {
    "V": log_v_process,
    "W": log_w_process,
    "subgaussian": log_subgaussian_process,
}


__all__ = [
    "LOG_PROCESSES",
    "log_v_process",
    "v_process",
    "log_w_process",
    "w_process",
    "log_subgaussian_process",
    "subgaussian_process",
    "log_branching_exponential",
    "branching_exponential",
]
