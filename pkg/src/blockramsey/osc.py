"""Oscillation, the interval-hitting partition of the naturals, and the
oscillation classes ``A_n = {v : osc(v) in P_n}``.

``P_n`` is the set of ``k`` with ``k = 2**n - 1 (mod 2**(n+1))``, i.e. the
naturals whose binary expansion ends in exactly ``n`` ones.  That makes
:func:`partition_class` a trailing-ones count.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from .vecspace import DEFAULT_BOUND, BlockSeq, Vector, _check_bound, span_array, span_chunks, vector_from_row


def osc(v: Vector) -> int:
    """Number of support indices ``i`` with ``a_i != a_{i+1}``."""
    if not v:
        raise ValueError("oscillation of the zero vector is undefined")
    c = v.coeffs
    n = len(c)
    # the last support index always counts: a_{max+1} = 0
    return 1 + sum(1 for i in range(n - 1) if c[i] and c[i] != c[i + 1])


def partition_class(k: int) -> int:
    """The unique ``n`` with ``k = 2**n - 1 mod 2**(n+1)``."""
    if k < 0:
        raise ValueError("partition_class is defined on naturals")
    k += 1
    return (k & -k).bit_length() - 1


def in_partition(k: int, n: int) -> bool:
    return k % (1 << (n + 1)) == (1 << n) - 1


def asymptotic_class(v: Vector) -> int:
    return partition_class(osc(v))


# vectorized forms ----------------------------------------------------------


def osc_rows(rows: np.ndarray) -> np.ndarray:
    """Oscillation of each row of a dense residue array (rows must be nonzero)."""
    padded = np.zeros((rows.shape[0], rows.shape[1] + 1), dtype=rows.dtype)
    padded[:, :-1] = rows
    change = (padded[:, :-1] != 0) & (padded[:, :-1] != padded[:, 1:])
    return change.sum(axis=1)


def partition_class_array(k: np.ndarray) -> np.ndarray:
    k = np.asarray(k, dtype=np.int64) + 1
    low = k & -k
    # low is a power of two; log2 is exact for these sizes
    return np.log2(low).astype(np.int64)


def find_in_class(X: BlockSeq, n: int, bound: int | None = DEFAULT_BOUND) -> Vector | None:
    """Canonically first nonzero ``v`` in the span of ``X`` with class ``n``.

    Returns ``None`` when the span has no such vector.
    """
    _check_bound(len(X), bound)
    for _, rows in span_chunks(X):
        hits = np.flatnonzero(partition_class_array(osc_rows(rows)) == n)
        if hits.size:
            return vector_from_row(rows[hits[0]], X.p)
    return None


def find_in_class_bruteforce(X: BlockSeq, n: int) -> Vector | None:
    """Reference scan over :func:`enumerate_span` in pure Python."""
    from .vecspace import enumerate_span

    for v in enumerate_span(X, bound=None):
        if asymptotic_class(v) == n:
            return v
    return None


def longest_run(values: Iterable[int]) -> int:
    """Length of the longest run of consecutive integers in ``values``."""
    s = sorted(set(values))
    best = run = 0
    prev = None
    for x in s:
        run = run + 1 if prev is not None and x == prev + 1 else 1
        best = max(best, run)
        prev = x
    return best


@dataclass(frozen=True)
class OscImage:
    values: frozenset[int]
    longest_interval: int

    @property
    def classes(self) -> frozenset[int]:
        return frozenset(partition_class(k) for k in self.values)


def osc_image(X: BlockSeq, bound: int | None = DEFAULT_BOUND) -> OscImage:
    """Oscillation values over the nonzero span of ``X``."""
    if not X:
        return OscImage(frozenset(), 0)
    vals = np.unique(osc_rows(span_array(X, bound)))
    values = frozenset(int(k) for k in vals)
    return OscImage(values, longest_run(values))


# calibration -----------------------------------------------------------------


def basis_sequences(n_blocks: int, dim: int, p: int):
    """Every block sequence of ``n_blocks`` basis vectors with indices below ``dim``."""
    for idx in combinations(range(dim), n_blocks):
        yield BlockSeq.basis(idx, p)


def random_block_sequence(n_blocks: int, dim: int, p: int, rng) -> BlockSeq:
    """Random blocks on a random split of ``[0, dim)`` into ``n_blocks`` segments."""
    cuts = sorted(rng.sample(range(1, dim), n_blocks - 1)) if n_blocks > 1 else []
    edges = [0, *cuts, dim]
    blocks = []
    for lo, hi in zip(edges, edges[1:]):
        while True:
            c = [rng.randrange(p) for _ in range(hi - lo)]
            if any(c):
                break
        blocks.append(Vector([0] * lo + c, p))
    return BlockSeq(blocks, p)


def _summarize(images: list[OscImage]) -> dict:
    classes = [img.classes for img in images]
    return {
        "samples": len(images),
        "guaranteed_classes": sorted(frozenset.intersection(*classes)) if classes else [],
        "reachable_classes": sorted(frozenset.union(*classes)) if classes else [],
        "guaranteed_interval": min((img.longest_interval for img in images), default=0),
    }


def calibrate_shape(p: int, n_blocks: int, dim: int, random_samples: int = 0, seed: int = 0) -> dict:
    """Brute-force oscillation statistics for one ``(p, blocks, dim)`` shape.

    ``basis`` covers every sequence of ``n_blocks`` basis vectors below ``dim``;
    ``random`` covers ``random_samples`` seeded sequences of general blocks.
    A class is *guaranteed* when every sequence's span reaches it.
    """
    entry = {"p": p, "blocks": n_blocks, "dim": dim,
             "basis": _summarize([osc_image(X, bound=None) for X in basis_sequences(n_blocks, dim, p)])}
    if random_samples:
        rng = random.Random(f"{seed}:{p}:{n_blocks}:{dim}")
        entry["random"] = _summarize(
            [osc_image(random_block_sequence(n_blocks, dim, p, rng), bound=None) for _ in range(random_samples)]
        )
    return entry


def shape_key(p: int, n_blocks: int, dim: int) -> str:
    return f"p={p},blocks={n_blocks},dim={dim}"
