"""Finite dichotomy searches for families of linear maps and of vector sets.

Candidate witnesses are block sequences built from the ground sequence:
each candidate block is a combination of a contiguous window of at most
``max_width`` ground blocks with nonzero end coefficients, normalized so its
first nonzero window coefficient is 1 (rescaling a block changes neither
horn).  Candidates are ordered by window start, then window end, then
coefficients, and sequences of them lexicographically.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .osc import asymptotic_class
from .vecspace import (
    DEFAULT_BOUND,
    BlockSeq,
    FieldMismatch,
    FieldSpec,
    Vector,
    block_matrix,
    combine,
    span_array,
)

KERNEL, INJECTIVE, NEITHER = "kernel", "injective", "neither"
AVOID, ASYMPTOTIC = "avoid", "asymptotic"


# linear maps -----------------------------------------------------------------


def rank_mod_p(M: np.ndarray, p: int) -> int:
    """Rank over F_p by Gaussian elimination."""
    A = np.array(M, dtype=np.int64) % p
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i, c]), None)
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] = A[r] * pow(int(A[r, c]), p - 2, p) % p
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        r += 1
        if r == rows:
            break
    return r


@dataclass(frozen=True)
class LinMap:
    """Linear map defined on ``e_0, ..., e_{D-1}``; column ``j`` is the image of ``e_j``."""

    p: int
    rows: tuple[tuple[int, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        FieldSpec(self.p)
        rows = tuple(tuple(int(a) % self.p for a in r) for r in self.rows)
        if len({len(r) for r in rows}) > 1:
            raise ValueError("ragged matrix")
        object.__setattr__(self, "rows", rows)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64).reshape(len(self.rows), self.dim)

    @property
    def dim(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def apply_rows(self, V: np.ndarray) -> np.ndarray:
        """Images of the dense row vectors ``V`` (widths up to ``dim``)."""
        if V.shape[1] > self.dim:
            if np.any(V[:, self.dim:]):
                raise ValueError("vector support outside the map's domain")
            V = V[:, : self.dim]
        M = self.matrix[:, : V.shape[1]]
        return V @ M.T % self.p

    def __call__(self, v: Vector) -> Vector:
        if v.p != self.p:
            raise FieldMismatch(f"F_{v.p} vs F_{self.p}")
        if len(v) > self.dim:
            raise ValueError("vector support outside the map's domain")
        return Vector(self.apply_rows(np.array([v.coeffs or (0,)], dtype=np.int64))[0].tolist(), self.p)

    @classmethod
    def zero(cls, p: int, dim: int, codim: int | None = None) -> "LinMap":
        return cls(p, tuple((0,) * dim for _ in range(codim or dim)), "zero")

    @classmethod
    def identity(cls, p: int, dim: int) -> "LinMap":
        return cls(p, tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim)), "identity")

    @classmethod
    def projection(cls, p: int, dim: int, killed: Iterable[int]) -> "LinMap":
        killed = set(killed)
        rows = tuple(tuple(int(i == j and j not in killed) for j in range(dim)) for i in range(dim))
        return cls(p, rows, f"projection-killing-{sorted(killed)}")

    def to_json(self) -> dict:
        d = {"p": self.p, "rows": [list(r) for r in self.rows]}
        if self.name:
            d["name"] = self.name
        return d

    @classmethod
    def from_json(cls, d: dict) -> "LinMap":
        return cls(d["p"], tuple(tuple(r) for r in d["rows"]), d.get("name", ""))


def load_maps(path: str | Path) -> list[LinMap]:
    """A map file holds one ``{"p", "rows"}`` object or a list of them."""
    data = json.loads(Path(path).read_text())
    if isinstance(data, dict):
        data = [data]
    return [LinMap.from_json(d) for d in data]


# vector set oracles ----------------------------------------------------------


@dataclass(frozen=True)
class VecSetOracle:
    name: str
    contains: Callable[[Vector], bool] = field(compare=False)

    def __call__(self, v: Vector) -> bool:
        return bool(self.contains(v))


def class_oracle(n: int) -> VecSetOracle:
    return VecSetOracle(f"A_{n}", lambda v: asymptotic_class(v) == n)


def empty_oracle() -> VecSetOracle:
    return VecSetOracle("empty", lambda v: False)


def everything_oracle() -> VecSetOracle:
    return VecSetOracle("all", lambda v: bool(v))


# candidates ------------------------------------------------------------------


def candidate_blocks(ground: BlockSeq, max_width: int = 2) -> list[tuple[int, int, Vector]]:
    """``(first, last, vector)`` for every normalized window combination."""
    p = ground.p
    out = []
    for a in range(len(ground)):
        for b in range(a, min(len(ground), a + max_width)):
            inner = b - a - 1
            for mid in itertools.product(range(p), repeat=max(inner, 0)):
                for last in range(1, p) if b > a else (None,):
                    coeffs = [1] + list(mid) + ([last] if last is not None else [])
                    win = ground[a : b + 1]
                    out.append((a, b, combine(coeffs, win)))
    out.sort(key=lambda t: (t[0], t[1], t[2].coeffs))
    return out


def candidate_sequences(ground: BlockSeq, length: int, max_width: int = 2) -> Iterator[BlockSeq]:
    """Block sequences of ``length`` candidate blocks with disjoint increasing windows."""
    blocks = candidate_blocks(ground, max_width)

    def extend(start: int, after: int, acc: list) -> Iterator[list]:
        if len(acc) == length:
            yield acc
            return
        for i in range(start, len(blocks)):
            a, b, v = blocks[i]
            if a > after:
                yield from extend(i + 1, b, acc + [v])

    for seq in extend(0, -1, []):
        yield BlockSeq(seq, ground.p)


def subsequences(ground: BlockSeq, length: int) -> Iterator[BlockSeq]:
    for idx in itertools.combinations(range(len(ground)), length):
        yield BlockSeq((ground[i] for i in idx), ground.p)


# kernel dichotomy --------------------------------------------------------------


@dataclass(frozen=True)
class KernelVerdict:
    horn: str
    witness: BlockSeq | None
    searched: int

    def to_json(self) -> dict:
        return {
            "horn": self.horn,
            "witness": self.witness.to_json() if self.witness is not None else None,
            "searched": self.searched,
        }


def kills_blocks(maps: Sequence[LinMap], V: BlockSeq) -> bool:
    B = block_matrix(V)
    return all(V.max_supp < m.dim and not np.any(m.apply_rows(B)) for m in maps)


def injective_on_span(m: LinMap, V: BlockSeq, bound: int | None = DEFAULT_BOUND) -> bool:
    """Exhaustive check: no nonzero vector of the span maps to 0."""
    if V.max_supp >= m.dim:
        return False
    images = m.apply_rows(span_array(V, bound))
    return bool(np.all(images.any(axis=1)))


def injective_by_rank(m: LinMap, V: BlockSeq) -> bool:
    """Rank check: the images of the blocks are linearly independent."""
    if V.max_supp >= m.dim:
        return False
    return rank_mod_p(m.apply_rows(block_matrix(V)), m.p) == len(V)


def kernel_dichotomy_search(
    maps: Sequence[LinMap],
    ground: BlockSeq,
    target_len: int,
    max_width: int = 2,
    bound: int = DEFAULT_BOUND,
) -> KernelVerdict:
    """Look for ``V`` of ``target_len`` blocks on which all maps vanish, or on
    whose span all maps are injective.

    The injective horn is preferred: the first candidate (canonical order) on
    which every map is injective is returned; failing that, the first on which
    every map vanishes; failing that, ``neither``.
    """
    if not maps:
        raise ValueError("need at least one map")
    if any(m.p != ground.p for m in maps):
        raise FieldMismatch("maps and ground live over different fields")
    if target_len > bound:
        raise ValueError("target_len exceeds the exhaustive bound")
    first_kernel = None
    searched = 0
    for V in candidate_sequences(ground, target_len, max_width):
        searched += 1
        if all(injective_on_span(m, V, bound) for m in maps):
            return KernelVerdict(INJECTIVE, V, searched)
        if first_kernel is None and kills_blocks(maps, V):
            first_kernel = V
    if first_kernel is not None:
        return KernelVerdict(KERNEL, first_kernel, searched)
    return KernelVerdict(NEITHER, None, searched)


def verify_kernel_verdict(maps: Sequence[LinMap], v: KernelVerdict) -> bool:
    """Re-check a witness exhaustively (and by rank, for the injective horn)."""
    if v.horn == NEITHER:
        return v.witness is None
    V = v.witness
    if v.horn == KERNEL:
        for m in maps:
            if V.max_supp >= m.dim or np.any(m.apply_rows(span_array(V, None))):
                return False
        return True
    return all(injective_on_span(m, V, None) and injective_by_rank(m, V) for m in maps)


# asymptotic-below dichotomy ------------------------------------------------------


@dataclass(frozen=True)
class AsymptoticVerdict:
    horn: str
    witness: BlockSeq | None = None
    counterexample: BlockSeq | None = None
    missed: str | None = None
    searched: int = 0

    def to_json(self) -> dict:
        return {
            "horn": self.horn,
            "witness": self.witness.to_json() if self.witness is not None else None,
            "counterexample": self.counterexample.to_json() if self.counterexample is not None else None,
            "missed": self.missed,
            "searched": self.searched,
        }


def _span_vectors(V: BlockSeq, bound: int | None) -> list[Vector]:
    return [Vector(r.tolist(), V.p) for r in span_array(V, bound)]


def span_meets(V: BlockSeq, oracle: VecSetOracle, bound: int | None = DEFAULT_BOUND) -> bool:
    return any(oracle(v) for v in _span_vectors(V, bound))


def span_avoids_all(V: BlockSeq, oracles: Sequence[VecSetOracle], bound: int | None = DEFAULT_BOUND) -> bool:
    return not any(o(v) for v in _span_vectors(V, bound) for o in oracles)


def asymptotic_below_search(
    oracles: Sequence[VecSetOracle],
    ground: BlockSeq,
    probe_len: int,
    max_width: int = 2,
    bound: int = DEFAULT_BOUND,
) -> AsymptoticVerdict:
    """Find ``V`` whose span misses every oracle set, or certify that every
    ``probe_len``-block subsequence of ``ground`` meets every oracle set.

    The second verdict only probes subsequences of one bounded shape, so it
    under-approximates asymptoticity below ``ground``; it is not a proof of it.
    """
    if probe_len > bound:
        raise ValueError("probe_len exceeds the exhaustive bound")
    searched = 0
    for V in candidate_sequences(ground, probe_len, max_width):
        searched += 1
        if span_avoids_all(V, oracles, bound):
            return AsymptoticVerdict(AVOID, witness=V, searched=searched)
    for V in subsequences(ground, probe_len):
        searched += 1
        for o in oracles:
            if not span_meets(V, o, bound):
                return AsymptoticVerdict(NEITHER, counterexample=V, missed=o.name, searched=searched)
    return AsymptoticVerdict(ASYMPTOTIC, searched=searched)


def verify_asymptotic_verdict(
    oracles: Sequence[VecSetOracle], ground: BlockSeq, probe_len: int, v: AsymptoticVerdict
) -> bool:
    if v.horn == AVOID:
        return span_avoids_all(v.witness, oracles, None)
    if v.horn == ASYMPTOTIC:
        return all(span_meets(V, o, None) for V in subsequences(ground, probe_len) for o in oracles)
    missed = next(o for o in oracles if o.name == v.missed)
    return not span_meets(v.counterexample, missed, None)
