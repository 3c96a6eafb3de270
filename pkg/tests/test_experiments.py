import itertools
import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blockramsey import experiments as ex
from blockramsey.osc import asymptotic_class
from blockramsey.vecspace import BlockSeq, FieldMismatch, Vector, enumerate_span

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures" / "maps"
basis = BlockSeq.basis


def injective_by_images(m, V):
    images = [m(v) for v in enumerate_span(V, None)]
    return all(images)


def test_zero_map_kills_first_blocks():
    v = ex.kernel_dichotomy_search([ex.LinMap.zero(3, 10)], basis(range(10), 3), 2)
    assert v.horn == ex.KERNEL and v.witness == basis([0, 1], 3)
    assert ex.verify_kernel_verdict([ex.LinMap.zero(3, 10)], v)


def test_identity_is_injective_on_first_blocks():
    v = ex.kernel_dichotomy_search([ex.LinMap.identity(3, 10)], basis(range(10), 3), 2)
    assert v.horn == ex.INJECTIVE and v.witness == basis([0, 1], 3)


def test_projection_gets_injective_witness():
    m = ex.LinMap.projection(3, 10, range(4))
    ground = basis(range(10), 3)
    v = ex.kernel_dichotomy_search([m], ground, 2)
    first = next(V for V in ex.candidate_sequences(ground, 2) if injective_by_images(m, V))
    assert v.horn == ex.INJECTIVE and v.witness == first
    assert v.witness == BlockSeq([Vector([0, 0, 0, 1, 1], 3), Vector.basis(5, 3)])
    assert all(m(x) for x in v.witness)


def test_kernel_field_mismatch():
    with pytest.raises(FieldMismatch):
        ex.kernel_dichotomy_search([ex.LinMap.zero(5, 4)], basis(range(4), 3), 1)


def test_neither_is_possible():
    # the only 2-block candidate is (e_0, e_1): e_1 survives, e_0 dies
    m = ex.LinMap.projection(3, 2, [0])
    v = ex.kernel_dichotomy_search([m], basis([0, 1], 3), 2)
    assert v.horn == ex.NEITHER and v.witness is None


def test_map_fixture_files_load():
    maps = {f.stem: ex.load_maps(f) for f in FIXTURES.glob("*.json")}
    assert set(maps) >= {"zero", "identity", "projection"}
    assert ex.kernel_dichotomy_search(maps["zero"], basis(range(10), 3), 2).horn == ex.KERNEL
    data = json.loads((FIXTURES / "zero.json").read_text())
    assert data["p"] == 3 and len(data["rows"]) == 10


def test_asymptotic_examples():
    ground = basis(range(8), 3)
    assert ex.asymptotic_below_search([ex.empty_oracle()], ground, 4).horn == ex.AVOID
    assert ex.asymptotic_below_search([ex.everything_oracle()], ground, 4).horn == ex.ASYMPTOTIC
    oracles = [ex.class_oracle(0), ex.class_oracle(1)]
    v = ex.asymptotic_below_search(oracles, ground, 4)
    assert v.horn == ex.ASYMPTOTIC
    for idx in itertools.combinations(range(8), 4):
        classes = {asymptotic_class(u) for u in enumerate_span(basis(idx, 3), None)}
        assert {0, 1} <= classes


def test_unreachable_class_is_avoided():
    oracles = [ex.class_oracle(3)]
    v = ex.asymptotic_below_search(oracles, basis(range(8), 3), 3)
    assert v.horn == ex.AVOID
    assert ex.verify_asymptotic_verdict(oracles, basis(range(8), 3), 3, v)
    # a witness for a family stays a witness for any subfamily
    assert ex.span_avoids_all(v.witness, [], None)


def test_kernel_witness_monotone():
    maps = [ex.LinMap.zero(3, 8), ex.LinMap.projection(3, 8, range(8))]
    v = ex.kernel_dichotomy_search(maps, basis(range(8), 3), 2)
    assert v.horn == ex.KERNEL
    for sub in ([maps[0]], [maps[1]]):
        assert ex.verify_kernel_verdict(sub, v)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4), st.data())
def test_rank_and_exhaustive_injectivity_agree(n, data):
    p = data.draw(st.sampled_from([2, 3]))
    dim = 6
    rows = data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=dim, max_size=dim), min_size=1, max_size=dim))
    m = ex.LinMap(p, tuple(map(tuple, rows)))
    idx = data.draw(st.lists(st.integers(0, dim - 1), min_size=n, max_size=n, unique=True))
    V = basis(sorted(idx), p)
    assert ex.injective_on_span(m, V) == ex.injective_by_rank(m, V) == injective_by_images(m, V)


@given(st.lists(st.lists(st.integers(0, 4), min_size=5, max_size=5), min_size=1, max_size=5))
def test_rank_mod_p_matches_brute_force(rows):
    M = np.array(rows)
    images = {tuple(np.array(c) @ M % 5) for c in itertools.product(range(5), repeat=len(rows))}
    assert 5 ** ex.rank_mod_p(M, 5) == len(images)
