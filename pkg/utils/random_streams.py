"""Deterministic random substreams for reproducible simulations."""

from typing import Tuple, Union

import numpy as np

from utils.errors import ParameterError

# A substream is a master seed, optionally followed by a spawn key
SubstreamId = Union[int, Tuple[int, ...], np.random.Generator]


def substream(seed: SubstreamId, *key: int) -> np.random.Generator:
    """
    Generator for (master seed, key...).

    The same identifier always yields the same stream; distinct keys give
    statistically independent streams, so paths can be generated in any
    order or in parallel.
    """
    if isinstance(seed, np.random.Generator):
        if key:
            raise ParameterError("Cannot derive a keyed substream from a live generator")
        return seed

    if isinstance(seed, (tuple, list)):
        if not seed:
            raise ParameterError("Empty substream identifier")
        master, spawn_key = seed[0], tuple(seed[1:]) + tuple(key)
    else:
        master, spawn_key = seed, tuple(key)

    master = int(master)
    if not 0 <= master < 2**64:
        raise ParameterError("Seed must be a 64-bit unsigned integer", repr(master))
    sequence = np.random.SeedSequence(entropy=master, spawn_key=tuple(int(k) for k in spawn_key))
    return np.random.Generator(np.random.PCG64(sequence))


__all__ = ["SubstreamId", "substream"]
