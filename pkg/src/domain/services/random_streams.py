import numpy as np

from ..exceptions import GiniDomainError


def replication_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for replication ``index`` under ``seed``.

    Streams are keyed by (seed, index) alone, so any replication can be
    recomputed without drawing the ones before it.
    """
    if seed < 0:
        raise GiniDomainError(f"seed must be nonnegative, got {seed}")
    if index < 0:
        raise GiniDomainError(f"replication index must be nonnegative, got {index}")
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))
