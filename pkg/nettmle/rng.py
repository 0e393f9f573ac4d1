"""Counter-based random streams.

Every stochastic step draws from a generator keyed by ``(master_seed, *keys)``, e.g.
``(seed, "data", r)`` for the dataset of replication ``r`` or ``(root, b)`` for
bootstrap replicate ``b``. Streams never share state, so results do not depend on the
order in which replicates are scheduled.
"""

import hashlib

import numpy as np

_MASK_63 = (1 << 63) - 1


def stable_key(key: int | str) -> int:
    """Map a stream key to a non-negative integer, stable across processes."""
    if isinstance(key, (int, np.integer)):
        if key < 0:
            raise ValueError(f"Stream keys must be non-negative, got {key}")
        return int(key)
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little") & _MASK_63


def derive_rng(master_seed: int, *keys: int | str) -> np.random.Generator:
    """Generator for the stream ``(master_seed, *keys)``.

    Args:
        master_seed: Study-level seed
        *keys: Stream coordinates (replication index, method name, replicate index...)

    Returns:
        Independent Philox-backed generator
    """
    entropy = [stable_key(master_seed), *(stable_key(k) for k in keys)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def child_seed(rng: np.random.Generator) -> int:
    """Draw a 63-bit root seed from ``rng`` for deriving per-replicate streams."""
    return int(rng.integers(0, _MASK_63, dtype=np.int64))
