"""Deterministic random substreams.

Everything random in this package draws from numpy's Philox generator, a
counter-based 64-bit RNG with identical output on every platform.  A
substream is keyed by (seed, context, index): the context word separates
independent uses (trial blocks, pair generation, per-pair curve seeds) and
the index enumerates parallel units inside a use.  Batches drawn from one
substream fill row-major, so a (B, k) draw equals B sequential k-draws;
code relies on this to evaluate candidates in bulk without changing the
candidate sequence.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_INDEX_BITS = 48

CTX_TRIALS = 1  # Monte Carlo trial blocks
CTX_PAIRS = 2  # catalyzable-pair rejection sampling
CTX_CURVE = 3  # per-pair seeds for success-probability curves


def substream(seed: int, context: int, index: int = 0) -> np.random.Generator:
    """Independent generator for (seed, context, index)."""
    if not 0 <= index < (1 << _INDEX_BITS):
        raise ValueError(f"substream index out of range: {index}")
    if not 0 < context < (1 << 15):
        raise ValueError(f"substream context out of range: {context}")
    key = np.array(
        [seed & _MASK64, (context << _INDEX_BITS) | index],
        dtype=np.uint64,
    )
    return np.random.Generator(np.random.Philox(key=key))


def derive_seed(seed: int, context: int, index: int) -> int:
    """Stable 64-bit seed for a nested component (e.g. one curve pair)."""
    ss = np.random.SeedSequence(entropy=(seed & _MASK64, context, index))
    return int(ss.generate_state(1, np.uint64)[0])
