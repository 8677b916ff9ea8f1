"""
Seeded random-number substreams.

All randomness in the library goes through `substream(seed, *keys)`, which
returns a numpy Generator backed by the Philox counter-based bit generator.
The generator is fully determined by the seed and the key path, so draws
for (seed, "risk", chunk 7) are the same whichever worker produces them and
in whatever order chunks are scheduled.
"""

import zlib
from typing import Union

import numpy as np

Key = Union[int, str]


def _key_to_int(key: Key) -> int:
    if isinstance(key, str):
        return zlib.crc32(key.encode("utf-8"))
    if key < 0:
        raise ValueError("Substream keys must be non-negative")
    return int(key)


def substream(seed: int, *keys: Key) -> np.random.Generator:
    """
    Return the generator for the substream identified by (seed, *keys).

    Args:
        seed: Non-negative master seed
        keys: Stream identifiers (ints or short strings)

    Returns:
        numpy Generator over Philox
    """
    if seed < 0:
        raise ValueError("Seed must be non-negative")
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(_key_to_int(k) for k in keys))
    return np.random.Generator(np.random.Philox(sequence))


def chunk_sizes(total: int, chunk_size: int):
    """Split `total` draws into fixed-size chunks; the last one may be shorter."""
    full, rest = divmod(total, chunk_size)
    sizes = [chunk_size] * full
    if rest:
        sizes.append(rest)
    return sizes
