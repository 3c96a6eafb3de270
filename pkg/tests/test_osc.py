import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blockramsey import checks
from blockramsey.osc import (
    asymptotic_class,
    basis_sequences,
    calibrate_shape,
    find_in_class,
    find_in_class_bruteforce,
    in_partition,
    longest_run,
    osc,
    osc_image,
    osc_rows,
    partition_class,
    partition_class_array,
    shape_key,
)
from blockramsey.vecspace import BlockSeq, Vector, enumerate_span

e = Vector.basis


def osc_by_definition(v: Vector) -> int:
    a = dict(enumerate(v.coeffs))
    return sum(1 for i in v.support if a[i] != a.get(i + 1, 0))


def class_by_definition(k: int) -> int:
    return next(n for n in range(64) if k % 2 ** (n + 1) == 2**n - 1)


@pytest.mark.parametrize("v, want", [(e(0, 3), 1), (Vector([1, 1], 3), 1), (Vector([1, 2], 3), 2)])
def test_osc_examples(v, want):
    assert osc(v) == want


def test_osc_of_zero_is_undefined():
    with pytest.raises(ValueError):
        osc(Vector.zero(3))


@pytest.mark.parametrize("k, n", [(0, 0), (7, 3), (5, 1), (15, 4), (23, 3)])
def test_partition_examples(k, n):
    assert partition_class(k) == n
    assert in_partition(k, n)


def test_partition_class_array_matches_scalar():
    ks = np.arange(1 << 12)
    assert partition_class_array(ks).tolist() == [partition_class(int(k)) for k in ks]


def test_asymptotic_class_examples():
    assert asymptotic_class(e(0, 3)) == 1
    assert asymptotic_class(Vector([1, 2], 3)) == 0


def test_find_in_class_examples():
    X = BlockSeq.basis([0], 3)
    assert find_in_class(X, 1) == e(0, 3)
    assert find_in_class(X, 3) is None
    v = find_in_class(BlockSeq.basis(range(6), 3), 2)
    assert osc(v) % 8 == 3


def test_osc_image_examples():
    img = osc_image(BlockSeq.basis([0], 3))
    assert img.values == {1} and img.longest_interval == 1
    two = osc_image(BlockSeq.basis([0, 1], 3))
    brute = {osc_by_definition(v) for v in enumerate_span(BlockSeq.basis([0, 1], 3))}
    assert two.values == brute == {1, 2}


def test_longest_run():
    assert longest_run([1, 2, 3, 7, 8]) == 3
    assert longest_run([]) == 0


def test_interval_monotone_under_extension():
    X = BlockSeq([Vector([1, 2], 3)], 3)
    prev = osc_image(X).longest_interval
    for idx in (3, 4, 6, 9):
        X = X.append(e(idx, 3))
        cur = osc_image(X).longest_interval
        assert cur >= prev
        prev = cur


def test_calibration_small_shapes():
    f2 = calibrate_shape(2, 1, 4)
    assert f2["basis"]["reachable_classes"] == [1]
    assert osc_image(BlockSeq.basis([2], 2)).values == {1}
    f3 = checks.load_thresholds()["shapes"][shape_key(3, 6, 12)]
    assert {0, 1, 2} <= set(f3["basis"]["reachable_classes"])
    assert calibrate_shape(3, 2, 6, 20, seed=4) == calibrate_shape(3, 2, 6, 20, seed=4)


def test_fixture_guaranteed_classes_reproduce():
    # frozen from an exhaustive run over all 924 choices of 6 basis blocks below 12
    assert checks.guaranteed_classes(3, 6, 12) == [0, 1, 2]
    assert sum(1 for _ in basis_sequences(6, 12, 3)) == 924


@st.composite
def vectors(draw, primes=(2, 3, 5, 7)):
    p = draw(st.sampled_from(primes))
    c = draw(st.lists(st.integers(0, p - 1), min_size=1, max_size=24))
    if not any(c):
        c[-1] = 1
    return Vector(c, p)


@settings(max_examples=300, deadline=None)
@given(vectors())
def test_osc_matches_definition(v):
    assert osc(v) == osc_by_definition(v)
    assert osc_rows(np.array([v.coeffs])).tolist() == [osc(v)]


@settings(max_examples=300, deadline=None)
@given(vectors(), st.data())
def test_scalar_invariance(v, data):
    a = data.draw(st.integers(1, v.p - 1))
    assert osc(a * v) == osc(v)
    assert asymptotic_class(a * v) == asymptotic_class(v)


@given(st.integers(0, 1 << 40))
def test_partition_class_matches_congruence(k):
    assert partition_class(k) == class_by_definition(k)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 9), min_size=1, max_size=4, unique=True), st.integers(0, 3))
def test_find_in_class_agrees_with_scan(idx, n):
    X = BlockSeq.basis(sorted(idx), 3)
    assert find_in_class(X, n) == find_in_class_bruteforce(X, n)
