"""Vectors and block sequences in E = (+)_n F_p.

A vector is stored as a dense tuple of residues running up to its highest
nonzero index, so the zero vector is the empty tuple and equality is
structural.  A block sequence is a tuple of nonzero vectors whose support
windows are strictly increasing.

Canonical span order
--------------------
Every routine that needs "the first vector of a span" uses one order.  For a
block sequence ``(x_0, ..., x_{m-1})`` the nonzero combinations are listed by
the integer ``k = 1, 2, ..., p**m - 1`` with the coefficient of ``x_i`` equal
to the ``i``-th base-``p`` digit of ``k`` (least significant block first).
In particular every combination that only uses ``x_0, ..., x_{j-1}`` comes
before any combination that uses ``x_j``.  This order is part of the public
contract and will not change.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

#: Default cap on the number of blocks whose span is enumerated exhaustively.
DEFAULT_BOUND = 12


class FieldMismatch(ValueError):
    pass


class NotInSpan(ValueError):
    pass


class BoundExceeded(ValueError):
    pass


class NotBlockSequence(ValueError):
    pass


@lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The prime field F_p."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"field modulus must be prime, got {self.p!r}")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, self.p - 2, self.p)

    def elements(self) -> range:
        return range(self.p)

    def nonzero(self) -> range:
        return range(1, self.p)


def _check_p(p: int) -> int:
    FieldSpec(p)
    return p


@dataclass(frozen=True, init=False)
class Vector:
    """Finitely supported vector over F_p.

    ``coeffs`` is normalized: reduced mod ``p`` with trailing zeros removed.
    """

    coeffs: tuple[int, ...]
    p: int

    def __init__(self, coeffs: Iterable[int], p: int):
        _check_p(p)
        c = [int(a) % p for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))
        object.__setattr__(self, "p", p)

    # constructors

    @classmethod
    def zero(cls, p: int) -> "Vector":
        return cls((), p)

    @classmethod
    def basis(cls, n: int, p: int) -> "Vector":
        if n < 0:
            raise ValueError("basis index must be >= 0")
        return cls([0] * n + [1], p)

    @classmethod
    def from_terms(cls, terms: dict[int, int], p: int) -> "Vector":
        """Build ``sum(c * e_i for i, c in terms.items())``."""
        if not terms:
            return cls.zero(p)
        if min(terms) < 0:
            raise ValueError("negative basis index")
        c = [0] * (max(terms) + 1)
        for i, a in terms.items():
            c[i] += a
        return cls(c, p)

    # structure

    @property
    def field(self) -> FieldSpec:
        return FieldSpec(self.p)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> int:
        if i < 0:
            raise IndexError(i)
        return self.coeffs[i] if i < len(self.coeffs) else 0

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, a in enumerate(self.coeffs) if a)

    @property
    def min_supp(self) -> int:
        if not self.coeffs:
            raise ValueError("zero vector has empty support")
        return next(i for i, a in enumerate(self.coeffs) if a)

    @property
    def max_supp(self) -> int:
        if not self.coeffs:
            raise ValueError("zero vector has empty support")
        return len(self.coeffs) - 1

    # arithmetic

    def _same(self, other: "Vector"):
        if not isinstance(other, Vector):
            return NotImplemented
        if other.p != self.p:
            raise FieldMismatch(f"F_{self.p} vs F_{other.p}")

    def __add__(self, other: "Vector") -> "Vector":
        if self._same(other) is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Vector((self[i] + other[i] for i in range(n)), self.p)

    def __sub__(self, other: "Vector") -> "Vector":
        if self._same(other) is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Vector((self[i] - other[i] for i in range(n)), self.p)

    def __neg__(self) -> "Vector":
        return Vector((-a for a in self.coeffs), self.p)

    def __mul__(self, c: int) -> "Vector":
        if not isinstance(c, (int, np.integer)):
            return NotImplemented
        return Vector((int(c) * a for a in self.coeffs), self.p)

    __rmul__ = __mul__

    def restrict(self, lo: int, hi: int) -> "Vector":
        """Coordinates in ``[lo, hi]`` kept, everything else zeroed."""
        return Vector((a if lo <= i <= hi else 0 for i, a in enumerate(self.coeffs)), self.p)

    # serialization

    def to_json(self) -> dict:
        return {"p": self.p, "coeffs": list(self.coeffs)}

    @classmethod
    def from_json(cls, d: dict) -> "Vector":
        return cls(d["coeffs"], d["p"])

    def __repr__(self) -> str:
        if not self.coeffs:
            return f"Vector(0; F_{self.p})"
        terms = [(f"{a}*" if a != 1 else "") + f"e{i}" for i, a in enumerate(self.coeffs) if a]
        return f"Vector({' + '.join(terms)}; F_{self.p})"


def support(v: Vector) -> tuple[int, ...]:
    return v.support


@dataclass(frozen=True, init=False)
class BlockSeq:
    """Finite block sequence: nonzero vectors with increasing support windows."""

    blocks: tuple[Vector, ...]
    p: int

    def __init__(self, blocks: Iterable[Vector] = (), p: int | None = None):
        blocks = tuple(blocks)
        if p is None:
            if not blocks:
                raise ValueError("empty BlockSeq needs an explicit p")
            p = blocks[0].p
        _check_p(p)
        prev = -1
        for k, b in enumerate(blocks):
            if not isinstance(b, Vector):
                raise TypeError(f"block {k} is not a Vector")
            if b.p != p:
                raise FieldMismatch(f"block {k} lives over F_{b.p}, expected F_{p}")
            if not b:
                raise NotBlockSequence(f"block {k} is zero")
            if b.min_supp <= prev:
                raise NotBlockSequence(
                    f"block {k} starts at {b.min_supp}, previous block ends at {prev}"
                )
            prev = b.max_supp
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "p", p)

    @classmethod
    def basis(cls, indices: Iterable[int], p: int) -> "BlockSeq":
        return cls((Vector.basis(i, p) for i in indices), p)

    @property
    def field(self) -> FieldSpec:
        return FieldSpec(self.p)

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self) -> Iterator[Vector]:
        return iter(self.blocks)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return BlockSeq(self.blocks[i], self.p)
        return self.blocks[i]

    def __bool__(self) -> bool:
        return bool(self.blocks)

    @property
    def windows(self) -> tuple[tuple[int, int], ...]:
        return tuple((b.min_supp, b.max_supp) for b in self.blocks)

    @property
    def max_supp(self) -> int:
        """Largest support index, or -1 when empty."""
        return self.blocks[-1].max_supp if self.blocks else -1

    def append(self, v: Vector) -> "BlockSeq":
        return BlockSeq(self.blocks + (v,), self.p)

    def extend(self, other: Iterable[Vector]) -> "BlockSeq":
        return BlockSeq(self.blocks + tuple(other), self.p)

    def tail(self, n: int) -> "BlockSeq":
        return tail(self, n)

    def to_json(self) -> list:
        return [b.to_json() for b in self.blocks]

    @classmethod
    def from_json(cls, data: list, p: int | None = None) -> "BlockSeq":
        return cls((Vector.from_json(d) for d in data), p)

    def __repr__(self) -> str:
        return f"BlockSeq({', '.join(repr(b)[7:-1].split(';')[0] for b in self.blocks)}; F_{self.p})"


def tail(X: BlockSeq, n: int) -> BlockSeq:
    """The maximal suffix of ``X`` whose blocks all start above ``n``."""
    k = len(X)
    while k > 0 and X.blocks[k - 1].min_supp > n:
        k -= 1
    return BlockSeq(X.blocks[k:], X.p)


def _check_same_field(v, X: BlockSeq):
    if v.p != X.p:
        raise FieldMismatch(f"F_{v.p} vs F_{X.p}")


def decompose(v: Vector, X: BlockSeq) -> tuple[int, ...]:
    """Coefficients ``c`` with ``v == sum(c[i] * X[i])``.

    The residue is scanned from its highest index downwards.  The block whose
    window holds the current leading index fixes one coefficient by dividing
    leading entries; the window-restricted residue must then be exactly that
    multiple of the block.  Raises :class:`NotInSpan` otherwise.
    """
    _check_same_field(v, X)
    p = X.p
    coeffs = [0] * len(X)
    windows = X.windows
    starts = [w[0] for w in windows]
    r = v
    hi_block = len(X) - 1
    while r:
        j = r.max_supp
        # blocks are visited right to left, so only shrink the search range
        while hi_block >= 0 and starts[hi_block] > j:
            hi_block -= 1
        if hi_block < 0 or windows[hi_block][1] < j:
            raise NotInSpan(f"index {j} lies in no block window")
        x = X.blocks[hi_block]
        lo, hi = windows[hi_block]
        piece = r.restrict(lo, hi)
        if x[j] == 0:
            raise NotInSpan(f"block {hi_block} vanishes at leading index {j}")
        c = r[j] * pow(x[j], p - 2, p) % p
        if piece != c * x:
            raise NotInSpan(f"residue on window {lo}..{hi} is not a multiple of block {hi_block}")
        coeffs[hi_block] = c
        r = r - piece
        hi_block -= 1
    return tuple(coeffs)


def in_span(v: Vector, X: BlockSeq) -> bool:
    try:
        decompose(v, X)
    except NotInSpan:
        return False
    return True


def combine(coeffs: Sequence[int], X: BlockSeq) -> Vector:
    """``sum(c * x for c, x in zip(coeffs, X))``."""
    if len(coeffs) != len(X):
        raise ValueError("coefficient count does not match block count")
    out = [0] * (X.max_supp + 1)
    for c, x in zip(coeffs, X.blocks):
        if c % X.p:
            for i, a in enumerate(x.coeffs):
                out[i] += c * a
    return Vector(out, X.p)


def precedes(Y: BlockSeq, X: BlockSeq) -> bool:
    """Finite stand-in for Y <= X: every block of Y lies in the span of X."""
    if Y.p != X.p:
        raise FieldMismatch(f"F_{Y.p} vs F_{X.p}")
    return all(in_span(y, X) for y in Y)


def coefficient_tuple(k: int, m: int, p: int) -> tuple[int, ...]:
    """Base-``p`` digits of ``k``, least significant first, padded to ``m``."""
    out = []
    for _ in range(m):
        k, d = divmod(k, p)
        out.append(d)
    return tuple(out)


def _check_bound(m: int, bound: int | None):
    if bound is not None and m > bound:
        raise BoundExceeded(f"{m} blocks exceed the exhaustive bound {bound}")


def enumerate_span(X: BlockSeq, bound: int | None = DEFAULT_BOUND) -> Iterator[Vector]:
    """All nonzero vectors of the span of ``X`` in canonical order."""
    _check_bound(len(X), bound)
    m, p = len(X), X.p
    for k in range(1, p**m):
        yield combine(coefficient_tuple(k, m, p), X)


# numpy kernels ------------------------------------------------------------


def coefficient_matrix(m: int, p: int, start: int = 1, stop: int | None = None) -> np.ndarray:
    """Rows are the coefficient tuples of ``k in [start, stop)``."""
    if stop is None:
        stop = p**m
    k = np.arange(start, stop, dtype=np.int64)
    out = np.empty((k.size, m), dtype=np.int64)
    for i in range(m):
        k, out[:, i] = np.divmod(k, p)
    return out


def block_matrix(X: BlockSeq, width: int | None = None) -> np.ndarray:
    """Blocks of ``X`` as rows of a dense ``(len(X), width)`` array."""
    if width is None:
        width = X.max_supp + 1
    B = np.zeros((len(X), width), dtype=np.int64)
    for i, x in enumerate(X.blocks):
        B[i, : len(x.coeffs)] = x.coeffs
    return B


def span_array(X: BlockSeq, bound: int | None = DEFAULT_BOUND, width: int | None = None) -> np.ndarray:
    """All nonzero span vectors as rows, canonical order, shape ``(p**m - 1, width)``."""
    _check_bound(len(X), bound)
    C = coefficient_matrix(len(X), X.p)
    return C @ block_matrix(X, width) % X.p


def span_chunks(X: BlockSeq, width: int | None = None) -> Iterator[tuple[int, np.ndarray]]:
    """Canonical span order split by the highest block used.

    Yields ``(j, rows)`` where ``rows`` holds the combinations whose last
    nonzero coefficient is on block ``j`` (``k`` in ``[p**j, p**(j+1))``).
    Concatenating the chunks reproduces :func:`span_array`.  Lets searches
    stop at the first block that produces a hit without materializing the
    full span.
    """
    m, p = len(X), X.p
    B = block_matrix(X, width)
    for j in range(m):
        C = coefficient_matrix(j + 1, p, p**j, p ** (j + 1))
        yield j, C @ B[: j + 1] % p


def vector_from_row(row: np.ndarray, p: int) -> Vector:
    return Vector(row.tolist(), p)

