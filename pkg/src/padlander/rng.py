"""Seeded RNG substreams.

All randomness in a run flows from one root seed. Each consumer asks for a
named substream so that, e.g., toggling wind sampling never shifts the
platform trajectory or the spawn position.
"""

import zlib

import numpy as np


def substream(root_seed: int, name: str) -> np.random.Generator:
    """Return an independent generator for (root_seed, name).

    Deterministic across processes: the stream identity is a CRC32 of the
    name, not Python's salted hash().
    """
    if root_seed < 0:
        raise ValueError(f"root seed must be non-negative, got {root_seed}")
    tag = zlib.crc32(name.encode("utf-8"))
    return np.random.default_rng(np.random.SeedSequence([root_seed, tag]))
