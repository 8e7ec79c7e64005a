"""
Deterministic random substreams

Every sweep point and replication draws from its own generator, derived from
the master seed and an index path, so results do not depend on how tasks are
spread over workers.
"""

from typing import Sequence

import numpy as np

from src.utils.errors import InvalidInputError

MAX_PATH_LENGTH = 8


def seed_substream(master: int, path: Sequence[int]) -> np.random.Generator:
    """PCG64 generator for SeedSequence(entropy=master, spawn_key=path).

    Args:
        master: Master seed, 0 <= master < 2**64
        path: Up to eight nonnegative indices

    Returns:
        A fresh generator
    """
    path = tuple(int(i) for i in path)
    if len(path) > MAX_PATH_LENGTH:
        raise InvalidInputError(f"Substream path has {len(path)} indices, at most {MAX_PATH_LENGTH} allowed")
    if not 0 <= master < 2**64 or any(i < 0 for i in path):
        raise InvalidInputError("Seeds and path indices must be nonnegative and below 2**64")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=master, spawn_key=path)))
