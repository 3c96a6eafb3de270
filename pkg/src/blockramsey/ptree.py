"""Finite-depth perfect trees standing in for Sacks conditions.

A :class:`PTree` of depth ``D`` is a downward closed set of binary strings
of length at most ``D`` in which every maximal node has length exactly
``D``.  "Perfect" is replaced by asking that :func:`branching_levels` be
defined at the level under test.

Such a tree is determined by its leaves, which are stored as a sorted
array of ``D``-bit integers.  The node ``s`` owns the contiguous leaf range
``[int(s) << (D - len(s)), (int(s) + 1) << (D - len(s)))``, so restriction is
a slice and intersection/union are sorted-array set operations.  The node
set is still available as :attr:`PTree.nodes`.

Verdicts from these truncations (compatibility especially) are relative to
the depth; callers that report them should report the depth too.
"""
from __future__ import annotations

import random
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

MAX_DEPTH = 62


class InvalidTree(ValueError):
    pass


class BranchingUndefined(ValueError):
    """Some branch has fewer branching nodes than the requested level."""


class DepthExhausted(BranchingUndefined):
    pass


class ChainViolation(ValueError):
    pass


class PTree:
    __slots__ = ("depth", "leaves", "__dict__")

    def __init__(self, depth: int, leaves: Iterable[int]):
        if not 0 <= depth <= MAX_DEPTH:
            raise InvalidTree(f"depth must be in [0, {MAX_DEPTH}]")
        arr = np.unique(np.asarray(list(leaves) if not isinstance(leaves, np.ndarray) else leaves, dtype=np.int64))
        if arr.size == 0:
            raise InvalidTree("a condition needs at least one branch")
        if arr[0] < 0 or arr[-1] >= (1 << depth):
            raise InvalidTree("leaf out of range for the depth")
        arr.setflags(write=False)
        self.depth = depth
        self.leaves = arr

    # constructors

    @classmethod
    def _trusted(cls, depth: int, leaves: np.ndarray) -> "PTree":
        t = cls.__new__(cls)
        leaves = np.ascontiguousarray(leaves, dtype=np.int64)
        if leaves.size == 0:
            raise InvalidTree("a condition needs at least one branch")
        leaves.setflags(write=False)
        t.depth, t.leaves = depth, leaves
        return t

    @classmethod
    def full(cls, depth: int) -> "PTree":
        return cls._trusted(depth, np.arange(1 << depth, dtype=np.int64))

    @classmethod
    def from_leaf_strings(cls, depth: int, leaves: Iterable[str]) -> "PTree":
        vals = []
        for s in leaves:
            if len(s) != depth or s.strip("01"):
                raise InvalidTree(f"bad leaf {s!r}")
            vals.append(int(s, 2) if s else 0)
        return cls(depth, vals)

    @classmethod
    def from_nodes(cls, depth: int, nodes: Iterable[str]) -> "PTree":
        """Build from an explicit node set, checking every tree invariant."""
        nodes = set(nodes)
        if "" not in nodes:
            raise InvalidTree("root missing")
        for s in nodes:
            if len(s) > depth or s.strip("01"):
                raise InvalidTree(f"bad node {s!r}")
            if s and s[:-1] not in nodes:
                raise InvalidTree(f"{s!r} has no parent")
            if len(s) < depth and s + "0" not in nodes and s + "1" not in nodes:
                raise InvalidTree(f"dead end at {s!r}")
        return cls.from_leaf_strings(depth, (s for s in nodes if len(s) == depth))

    # node arithmetic

    def _range(self, s: str) -> tuple[int, int]:
        if len(s) > self.depth or s.strip("01"):
            raise ValueError(f"bad node {s!r} for depth {self.depth}")
        shift = self.depth - len(s)
        v = int(s, 2) if s else 0
        return v << shift, (v + 1) << shift

    def _slice(self, s: str) -> tuple[int, int]:
        lo, hi = self._range(s)
        return int(np.searchsorted(self.leaves, lo)), int(np.searchsorted(self.leaves, hi))

    def count(self, s: str) -> int:
        """Number of leaves above ``s``."""
        a, b = self._slice(s)
        return b - a

    def __contains__(self, s: str) -> bool:
        return self.count(s) > 0

    def children(self, s: str) -> list[str]:
        if len(s) >= self.depth:
            return []
        return [s + b for b in "01" if s + b in self]

    def is_branching(self, s: str) -> bool:
        return len(s) < self.depth and s + "0" in self and s + "1" in self

    def leaf_strings(self) -> list[str]:
        return [format(int(x), f"0{self.depth}b") if self.depth else "" for x in self.leaves]

    @cached_property
    def nodes(self) -> frozenset[str]:
        out = set()
        for leaf in self.leaf_strings():
            for i in range(self.depth, -1, -1):
                s = leaf[:i]
                if s in out:
                    break
                out.add(s)
        return frozenset(out)

    def branching_nodes(self) -> list[str]:
        return sorted((s for s in self.nodes if self.is_branching(s)), key=lambda s: (len(s), s))

    # comparisons

    def __len__(self) -> int:
        return len(self.nodes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PTree):
            return NotImplemented
        return self.depth == other.depth and np.array_equal(self.leaves, other.leaves)

    def __hash__(self) -> int:
        return hash((self.depth, self.leaves.tobytes()))

    def __le__(self, other: "PTree") -> bool:
        """Node containment (``self`` is a stronger condition)."""
        return self.depth == other.depth and bool(np.isin(self.leaves, other.leaves, assume_unique=True).all())

    def __repr__(self) -> str:
        return f"PTree(depth={self.depth}, branches={self.leaves.size})"

    # serialization

    def to_json(self) -> dict:
        return {"depth": self.depth, "nodes": sorted(self.nodes, key=lambda s: (len(s), s))}

    @classmethod
    def from_json(cls, d: dict) -> "PTree":
        return cls.from_nodes(d["depth"], d["nodes"])


def is_valid(p: PTree) -> bool:
    """Re-derive the node set and check root, downward closure, no dead ends, uniform leaf depth."""
    try:
        PTree.from_nodes(p.depth, p.nodes)
    except InvalidTree:
        return False
    return all(len(s) == p.depth for s in p.nodes if not p.children(s))


def restrict(p: PTree, s: str) -> PTree:
    """``p|s``: the nodes of ``p`` comparable with ``s``."""
    a, b = p._slice(s)
    if a == b:
        raise KeyError(f"{s!r} is not a node of the tree")
    return PTree._trusted(p.depth, p.leaves[a:b])


def branching_levels(p: PTree, n: int) -> frozenset[str]:
    """``l(n, p)``: minimal nodes with exactly ``n`` branching strict predecessors."""
    if n < 0:
        raise ValueError("level must be >= 0")
    out = []
    stack = [("", 0)]
    while stack:
        s, k = stack.pop()
        if k == n:
            out.append(s)
            continue
        kids = p.children(s)
        if not kids:
            raise BranchingUndefined(f"branch through {s!r} has only {k} branching nodes, need {n}")
        bump = 1 if len(kids) == 2 else 0
        stack.extend((c, k + bump) for c in kids)
    return frozenset(out)


def union(trees: Sequence[PTree]) -> PTree:
    depth = trees[0].depth
    if any(t.depth != depth for t in trees):
        raise ValueError("trees of different depth")
    return PTree._trusted(depth, np.unique(np.concatenate([t.leaves for t in trees])))


def cone_union(p: PTree, n: int) -> PTree:
    """Union of ``p|s`` over ``s`` in ``l(n, p)``."""
    return union([restrict(p, s) for s in sorted(branching_levels(p, n))])


def leq_n(q: PTree, p: PTree, n: int) -> bool:
    """``q <=_n p``: ``q`` is a subtree of ``p`` with the same ``n``-th branching level."""
    if q.depth != p.depth:
        raise ValueError("trees of different depth")
    return q <= p and branching_levels(q, n) == branching_levels(p, n)


def _common_leaves(trees: Sequence[PTree]) -> np.ndarray:
    out = trees[0].leaves
    for t in trees[1:]:
        out = np.intersect1d(out, t.leaves, assume_unique=True)
    return out


def fuse(seq: Sequence[PTree]) -> PTree:
    """Fusion of ``p_0 >=_1 p_1 >=_2 ...``: the intersection, dead ends pruned.

    Pruning is automatic here: the pruned intersection of node sets is the
    tree spanned by the common leaves.
    """
    if not seq:
        raise ValueError("empty fusion sequence")
    depth = seq[0].depth
    for i in range(len(seq) - 1):
        if seq[i + 1].depth != depth:
            raise ChainViolation("trees of different depth")
        try:
            ok = leq_n(seq[i + 1], seq[i], i + 1)
        except BranchingUndefined as exc:
            raise ChainViolation(f"step {i + 1}: {exc}") from exc
        if not ok:
            raise ChainViolation(f"p_{i + 1} is not <=_{i + 1} p_{i}")
    return PTree._trusted(depth, _common_leaves(seq))


def compatible(q: PTree, p: PTree) -> bool:
    """Whether ``q`` and ``p`` share a full-depth branch (a common extension at this depth)."""
    if q.depth != p.depth:
        raise ValueError("trees of different depth")
    return _common_leaves([q, p]).size > 0


def compatible_by_nodes(q: PTree, p: PTree) -> bool:
    """Same verdict computed on node sets: prune dead ends from ``q & p`` and look for the root."""
    common = q.nodes & p.nodes
    alive = {s for s in common if len(s) == p.depth}
    for length in range(p.depth - 1, -1, -1):
        alive |= {s for s in common if len(s) == length and (s + "0" in alive or s + "1" in alive)}
    return "" in alive


Refiner = Callable[[PTree, int], PTree]


class RefinerError(ValueError):
    pass


def fusion_build(p: PTree, refiner: Refiner, stages: int) -> tuple[list[PTree], PTree]:
    """Build ``p_0 = p, ..., p_stages`` by refining cone by cone, then fuse.

    At stage ``n`` each cone ``p_n|t`` for ``t`` in ``l(n+1, p_n)`` is handed to
    ``refiner(cone, n)``, which must return a subtree of that cone; the
    results are unioned into ``p_{n+1}``.
    """
    seq = [p]
    for n in range(stages):
        cur = seq[-1]
        try:
            level = branching_levels(cur, n + 1)
        except BranchingUndefined as exc:
            raise DepthExhausted(f"stage {n}: {exc}") from exc
        parts = []
        for t in sorted(level):
            cone = restrict(cur, t)
            out = refiner(cone, n)
            if not isinstance(out, PTree) or out.depth != cone.depth or not out <= cone:
                raise RefinerError(f"stage {n}: refiner output is not a subtree of the cone at {t!r}")
            parts.append(out)
        nxt = union(parts)
        if not leq_n(nxt, cur, n + 1):
            raise RefinerError(f"stage {n}: union of refined cones is not <=_{n + 1} p_{n}")
        seq.append(nxt)
    return seq, fuse(seq)


# refiners and generators -----------------------------------------------------


def identity_refiner(cone: PTree, stage: int) -> PTree:
    return cone


def kill_child(p: PTree, s: str, bit: str) -> PTree:
    """Remove the cone above ``s + bit``; ``s`` must be branching."""
    if not p.is_branching(s):
        raise ValueError(f"{s!r} is not a branching node")
    a, b = p._slice(s + bit)
    return PTree._trusted(p.depth, np.concatenate([p.leaves[:a], p.leaves[b:]]))


def first_branching(p: PTree, s: str) -> str | None:
    """The first branching node at or above ``s`` following leftmost children."""
    while len(s) < p.depth:
        if p.is_branching(s):
            return s
        s = p.children(s)[0]
    return None


def kill_left_refiner(cone: PTree, stage: int) -> PTree:
    """Drop the left child of the first branching node of the cone."""
    stem = first_branching(cone, "")
    if stem is None:
        return cone
    return kill_child(cone, stem, "0")


def random_branching_node(p: PTree, rng: random.Random, tries: int = 64) -> str | None:
    """Walk down a random branch to a uniform random length, then on to the
    next branching node.  ``None`` if the tree has no branching node.
    """
    for _ in range(tries):
        s = ""
        stop = rng.randrange(max(p.depth, 1))
        while len(s) < stop:
            s = rng.choice(p.children(s))
        while len(s) < p.depth and not p.is_branching(s):
            s = rng.choice(p.children(s))
        if len(s) < p.depth:
            return s
    return None


def random_subcondition(p: PTree, rng: random.Random, cuts: int) -> PTree:
    """``cuts`` random cone restrictions: at a random branching node keep one child only."""
    q = p
    for _ in range(cuts):
        s = random_branching_node(q, rng)
        if s is None:
            break
        q = kill_child(q, s, rng.choice("01"))
    return q


def random_condition(depth: int, rng: random.Random, cuts: int) -> PTree:
    """Full tree of ``depth`` refined by ``cuts`` random cone restrictions.

    Each cut removes one branching node from the branches through it, so
    with ``cuts <= depth - n`` every branch keeps at least ``n`` branching nodes.
    """
    return random_subcondition(PTree.full(depth), rng, cuts)


def random_refiner(rng: random.Random, cuts: int = 1) -> Refiner:
    """Refiner that makes ``cuts`` random cone restrictions inside each cone."""

    def refine(cone: PTree, stage: int) -> PTree:
        return random_subcondition(cone, rng, cuts)

    return refine
