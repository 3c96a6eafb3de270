import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blockramsey.vecspace import (
    BlockSeq,
    BoundExceeded,
    FieldMismatch,
    FieldSpec,
    NotBlockSequence,
    NotInSpan,
    Vector,
    combine,
    decompose,
    enumerate_span,
    in_span,
    precedes,
    span_array,
    support,
    tail,
)

e = Vector.basis


def vec(p, **terms):
    return Vector.from_terms({int(k[1:]): c for k, c in terms.items()}, p)


def all_combos(X):
    """Reference span: every coefficient tuple, in plain Python."""
    p = X.p
    out = {}
    for c in itertools.product(range(p), repeat=len(X)):
        v = Vector.zero(p)
        for a, x in zip(c, X):
            v = v + a * x
        out.setdefault(v, []).append(c)
    return out


# fields and vectors


def test_field_rejects_composite():
    with pytest.raises(ValueError):
        FieldSpec(4)
    assert FieldSpec(5).inv(2) == 3


def test_vector_normalizes_trailing_zeros_and_residues():
    assert Vector([1, 3, 0, 0], 3) == Vector([1], 3)
    assert Vector([-1], 3).coeffs == (2,)
    assert not Vector([0, 0], 5)


@pytest.mark.parametrize("v, want", [(e(5, 3), (5,)), (Vector.zero(3), ()), (vec(3, e0=1, e2=2), (0, 2))])
def test_support(v, want):
    assert support(v) == want


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        e(0, 3) + e(0, 5)


def test_json_round_trip():
    v = vec(5, e1=4, e7=2)
    assert Vector.from_json(v.to_json()) == v
    X = BlockSeq([e(0, 5), v], 5)
    assert BlockSeq.from_json(X.to_json()) == X


# block sequences


def test_overlapping_windows_rejected():
    with pytest.raises(NotBlockSequence):
        BlockSeq([vec(3, e0=1, e2=1), e(1, 3)])
    with pytest.raises(NotBlockSequence):
        BlockSeq([e(0, 3), Vector.zero(3)])


@pytest.mark.parametrize(
    "X, n, want",
    [
        (BlockSeq.basis([0, 2, 5], 3), 1, BlockSeq.basis([2, 5], 3)),
        (BlockSeq.basis([0, 2, 5], 3), 10, BlockSeq((), 3)),
        (BlockSeq([vec(3, e0=1, e1=1), e(3, 3)]), 1, BlockSeq([e(3, 3)])),
    ],
)
def test_tail(X, n, want):
    assert tail(X, n) == want


def test_in_span_examples():
    X = BlockSeq([vec(3, e0=1, e1=2), e(3, 3)])
    assert in_span(2 * vec(3, e0=1, e1=2), X)
    assert not in_span(e(2, 3), X)


def test_in_span_matches_enumeration_below_4():
    X = BlockSeq([vec(3, e0=1, e1=1), vec(3, e2=1, e3=2)])
    members = set(all_combos(X))
    assert len(members) == 9
    for c in itertools.product(range(3), repeat=4):
        v = Vector(c, 3)
        assert in_span(v, X) == (v in members)


def test_decompose_examples():
    X = BlockSeq([vec(3, e0=1, e1=2), e(3, 3)])
    assert decompose(vec(3, e0=2, e1=1, e3=1), X) == (2, 1)
    assert decompose(Vector.zero(3), X) == (0, 0)
    with pytest.raises(NotInSpan):
        decompose(vec(3, e0=1, e1=1), BlockSeq([vec(3, e0=1, e1=2)]))


@pytest.mark.parametrize(
    "Y, X, want",
    [
        (BlockSeq([vec(3, e0=1, e1=1)]), BlockSeq.basis([0, 1, 2], 3), True),
        (BlockSeq.basis([0, 1, 2], 3), BlockSeq.basis([0, 1, 2], 3), True),
        (BlockSeq.basis([0, 1], 3), BlockSeq([vec(3, e0=1, e1=1)]), False),
    ],
)
def test_precedes(Y, X, want):
    assert precedes(Y, X) is want


def test_enumerate_span_order_and_counts():
    assert list(enumerate_span(BlockSeq.basis([0], 3))) == [e(0, 3), 2 * e(0, 3)]
    assert len(list(enumerate_span(BlockSeq.basis([0, 1], 2)))) == 3
    X = BlockSeq([vec(3, e0=1, e1=2), e(2, 3), vec(3, e4=1, e5=1), e(7, 3)])
    vs = list(enumerate_span(X))
    assert len(vs) == 80 and len(set(vs)) == 80 and all(vs)


def test_enumerate_span_bound():
    with pytest.raises(BoundExceeded):
        list(enumerate_span(BlockSeq.basis(range(5), 3), bound=4))


def test_span_array_matches_enumeration():
    X = BlockSeq([vec(5, e0=1, e1=3), e(3, 5), vec(5, e4=2, e6=1)])
    rows = span_array(X)
    assert [Vector(r.tolist(), 5) for r in rows] == list(enumerate_span(X))
    assert rows.dtype.kind == "i" and np.all(rows < 5)


# properties


@st.composite
def block_seqs(draw, p=None, max_blocks=4, max_width=3):
    p = p or draw(st.sampled_from([2, 3, 5]))
    n = draw(st.integers(0, max_blocks))
    blocks, start = [], 0
    for _ in range(n):
        start += draw(st.integers(0, 2))
        width = draw(st.integers(1, max_width))
        body = draw(st.lists(st.integers(0, p - 1), min_size=width, max_size=width))
        body[0] = body[0] or 1
        blocks.append(Vector([0] * start + body, p))
        start += width
    return BlockSeq(blocks, p)


@settings(max_examples=150, deadline=None)
@given(block_seqs(), st.data())
def test_decompose_inverts_combine(X, data):
    c = data.draw(st.lists(st.integers(0, X.p - 1), min_size=len(X), max_size=len(X)))
    assert decompose(combine(c, X), X) == tuple(c)


@settings(max_examples=100, deadline=None)
@given(block_seqs(max_blocks=3), st.data())
def test_in_span_agrees_with_bruteforce(X, data):
    top = max(X.max_supp + 2, 1)
    v = Vector(data.draw(st.lists(st.integers(0, X.p - 1), max_size=top)), X.p)
    assert in_span(v, X) == (v in all_combos(X))


@settings(max_examples=100, deadline=None)
@given(block_seqs(max_blocks=3))
def test_combinations_are_unique(X):
    assert all(len(cs) == 1 for cs in all_combos(X).values())


@settings(max_examples=100, deadline=None)
@given(block_seqs(), st.integers(-1, 12))
def test_tail_is_a_block_subsequence(X, n):
    T = tail(X, n)
    assert precedes(T, X)
    assert all(x.min_supp > n for x in T)
    assert len(T) == sum(1 for x in X if x.min_supp > n)
