"""Min-hash LSH blocking: candidate pairs without all-pairs comparison.

Records are shingled into attribute-tagged character 2-grams over the
comparison profile's attributes. Each record gets b*r seeded min-hash
values; the r minima of each band are folded into one 64-bit band key, and
records sharing a band key become candidates. Records with no usable
content produce no signature and are left out of every block.
"""

import struct
from dataclasses import dataclass
from functools import lru_cache
from hashlib import blake2b
from itertools import combinations
from typing import Iterable

import numpy as np

from .records import Record, RecordSet
from .similarity import ComparisonProfile, canonical

DEFAULT_BANDS = 100
DEFAULT_ROWS = 4

_UINT64_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class MinHashIndex:
    """Per-band buckets of record ids, keyed by the band's folded minima."""

    bands: tuple[dict[int, tuple[int, ...]], ...]
    num_bands: int
    band_size: int
    seed: int


def shingle(record: Record, profile: ComparisonProfile) -> set[str]:
    """Attribute-tagged character 2-grams of the record's profile values."""
    tokens: set[str] = set()
    for attr in profile.attributes:
        value = canonical(record.attributes.get(attr))
        for i in range(len(value) - 1):
            tokens.add(f"{attr}:{value[i : i + 2]}")
    return tokens


@lru_cache(maxsize=1 << 18)
def _token_hash(token: str) -> int:
    return int.from_bytes(blake2b(token.encode("utf-8"), digest_size=8).digest(), "little")


@lru_cache(maxsize=64)
def _hash_params(count: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    # Multiply-shift family: odd multipliers and offsets drawn from a seeded
    # generator, so signatures are reproducible across runs and platforms.
    import random

    rng = random.Random(seed)
    mult = np.array([rng.randrange(1 << 64) | 1 for _ in range(count)], dtype=np.uint64)
    add = np.array([rng.randrange(1 << 64) for _ in range(count)], dtype=np.uint64)
    return mult, add


def signature(
    tokens: Iterable[str], num_bands: int, band_size: int, seed: int
) -> list[int] | None:
    """The b*r min-hash values for a token set, or None for an empty set.

    The None sentinel never matches anything: empty records are excluded
    from all blocks rather than colliding with each other.
    """
    if num_bands < 1 or band_size < 1:
        raise ValueError("num_bands and band_size must be at least 1")
    token_values = [_token_hash(t) for t in tokens]
    if not token_values:
        return None
    mult, add = _hash_params(num_bands * band_size, seed)
    values = np.array(token_values, dtype=np.uint64)
    hashed = mult[:, None] * values[None, :] + add[:, None]  # wraps mod 2**64
    return [int(v) for v in hashed.min(axis=1)]


def _band_key(minima: list[int]) -> int:
    packed = struct.pack(f"<{len(minima)}Q", *(m & _UINT64_MASK for m in minima))
    return int.from_bytes(blake2b(packed, digest_size=8).digest(), "little")


def build_index(
    records: RecordSet,
    profile: ComparisonProfile,
    num_bands: int = DEFAULT_BANDS,
    band_size: int = DEFAULT_ROWS,
    seed: int = 0,
) -> MinHashIndex:
    """Place each record in one block per band, keyed by its band minima."""
    buckets: list[dict[int, list[int]]] = [{} for _ in range(num_bands)]
    for record in sorted(records, key=lambda r: r.id):
        sig = signature(shingle(record, profile), num_bands, band_size, seed)
        if sig is None:
            continue
        for band in range(num_bands):
            key = _band_key(sig[band * band_size : (band + 1) * band_size])
            buckets[band].setdefault(key, []).append(record.id)
    frozen = tuple(
        {key: tuple(ids) for key, ids in band.items()} for band in buckets
    )
    return MinHashIndex(bands=frozen, num_bands=num_bands, band_size=band_size, seed=seed)


def candidate_pairs(index: MinHashIndex) -> set[tuple[int, int]]:
    """All unordered id pairs co-blocked in any band, smaller id first."""
    pairs: set[tuple[int, int]] = set()
    for band in index.bands:
        for ids in band.values():
            if len(ids) < 2:
                continue
            for a, b in combinations(sorted(set(ids)), 2):
                pairs.add((a, b))
    return pairs
