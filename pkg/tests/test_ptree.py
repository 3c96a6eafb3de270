import random

import pytest
from hypothesis import given, settings, strategies as st

from blockramsey.ptree import (
    BranchingUndefined,
    ChainViolation,
    DepthExhausted,
    InvalidTree,
    PTree,
    RefinerError,
    branching_levels,
    compatible,
    compatible_by_nodes,
    cone_union,
    fuse,
    fusion_build,
    identity_refiner,
    is_valid,
    kill_child,
    kill_left_refiner,
    leq_n,
    random_condition,
    random_refiner,
    random_subcondition,
    restrict,
)


def levels_by_definition(p: PTree, n: int):
    """Minimal nodes with exactly n branching strict predecessors, from the node set alone;
    None when some maximal branch never gets there."""
    def count(s):
        return sum(1 for i in range(len(s)) if s[:i] + "0" in p.nodes and s[:i] + "1" in p.nodes)
    hits = {s for s in p.nodes if count(s) == n and not any(count(s[:i]) == n for i in range(len(s)))}
    leaves = [s for s in p.nodes if len(s) == p.depth]
    if not all(any(leaf.startswith(h) for h in hits) for leaf in leaves):
        return None
    return frozenset(hits)


def hand_tree():
    # stem under "0", single late branch under "1" at "100"
    nodes = ["", "0", "00", "000", "0000", "1", "10", "100", "1000", "1001"]
    return PTree.from_nodes(4, nodes)


def test_invalid_trees_rejected():
    with pytest.raises(InvalidTree):
        PTree.from_nodes(2, ["0", "00"])
    with pytest.raises(InvalidTree):
        PTree.from_nodes(2, ["", "0"])
    with pytest.raises(InvalidTree):
        PTree.from_nodes(2, ["", "00"])


def test_restrict_examples():
    p = PTree.full(3)
    r = restrict(p, "0")
    assert r.nodes == {"", "0", "00", "01", "000", "001", "010", "011"}
    assert len(r) == 8
    assert restrict(p, "") == p
    assert restrict(restrict(p, "0"), "01") == restrict(p, "01")
    with pytest.raises(KeyError):
        restrict(r, "1")


def test_branching_levels_full_tree():
    p = PTree.full(4)
    assert branching_levels(p, 0) == {""}
    assert branching_levels(p, 2) == {"00", "01", "10", "11"}


def test_branching_levels_hand_built():
    p = hand_tree()
    assert len(p) == 10
    assert branching_levels(p, 1) == levels_by_definition(p, 1) == {"0", "1"}
    assert levels_by_definition(p, 2) is None
    with pytest.raises(BranchingUndefined):
        branching_levels(p, 2)


def test_leq_n_examples():
    p = PTree.full(5)
    assert all(leq_n(p, p, n) for n in range(5))
    assert not leq_n(restrict(p, "0"), p, 1)
    # refine above "01" (in l(2,p)) without touching level 2 itself
    q = kill_child(p, "010", "1")
    assert leq_n(q, p, 2)
    assert not leq_n(q, p, 4)


def test_fuse_examples():
    p = PTree.full(5)
    assert fuse([p, p, p]) == p
    p1 = kill_child(p, "01", "0")
    assert leq_n(p1, p, 1)
    assert fuse([p, p1]) == p1
    with pytest.raises(ChainViolation):
        fuse([p, restrict(p, "0")])


def test_compatible_examples():
    p = PTree.full(4)
    assert compatible(p, p)
    assert not compatible(restrict(p, "0"), restrict(p, "1"))
    assert not compatible_by_nodes(restrict(p, "0"), restrict(p, "1"))


def test_fusion_build_examples():
    p = PTree.full(8)
    seq, fused = fusion_build(p, identity_refiner, 3)
    assert all(q == p for q in seq) and fused == p
    seq, fused = fusion_build(p, kill_left_refiner, 3)
    for n in range(3):
        assert leq_n(seq[n + 1], seq[n], n + 1)
    assert all(leq_n(fused, q, n) for n, q in enumerate(seq))
    with pytest.raises(DepthExhausted):
        fusion_build(PTree.full(3), identity_refiner, 5)


def test_fusion_build_rejects_bad_refiner():
    def grab_sibling(cone, stage):
        return PTree.full(cone.depth)

    with pytest.raises(RefinerError):
        fusion_build(PTree.full(5), grab_sibling, 1)


def test_json_round_trip():
    p = hand_tree()
    d = p.to_json()
    assert d["nodes"][0] == "" and PTree.from_json(d) == p


# properties


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 9), st.integers(0, 6), st.randoms(use_true_random=False))
def test_generated_conditions_are_valid(depth, cuts, rng):
    p = random_condition(depth, rng, cuts)
    assert is_valid(p)
    q = random_subcondition(p, rng, cuts)
    assert is_valid(q) and q <= p


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 9), st.integers(0, 3), st.randoms(use_true_random=False))
def test_branching_levels_match_definition(depth, cuts, rng):
    p = random_condition(depth, rng, cuts)
    for n in range(depth + 1):
        want = levels_by_definition(p, n)
        if want is None:
            with pytest.raises(BranchingUndefined):
                branching_levels(p, n)
            break
        assert branching_levels(p, n) == want
        assert len(want) == 2**n
        assert cone_union(p, n) == p


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 8), st.randoms(use_true_random=False))
def test_compatible_agrees_with_node_pruning(depth, rng):
    p = random_condition(depth, rng, rng.randint(0, 3))
    q = random_subcondition(p, rng, rng.randint(0, 6))
    r = random_subcondition(p, rng, rng.randint(0, 6))
    assert compatible(q, r) == compatible_by_nodes(q, r)


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_fusion_is_below_every_stage(rng):
    p = random_condition(10, rng, rng.randint(0, 3))
    seq, fused = fusion_build(p, random_refiner(rng, rng.randint(0, 2)), 3)
    assert is_valid(fused)
    for n, q in enumerate(seq):
        assert leq_n(fused, q, n)


def test_some_level_2_cone_is_compatible():
    rng = random.Random(7)
    for _ in range(50):
        p = random_condition(10, rng, rng.randint(0, 3))
        q = random_subcondition(p, rng, rng.randint(0, 12))
        assert any(compatible(q, restrict(p, s)) for s in branching_levels(p, 2))
