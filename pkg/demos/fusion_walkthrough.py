"""Build a fusion sequence by refining cone by cone, then check the fused
tree against each stage in the <=_n order.
"""
import random

from blockramsey import ptree

p = ptree.PTree.full(10)
seq, fused = ptree.fusion_build(p, ptree.kill_left_refiner, 4)
for n, q in enumerate(seq):
    print(f"p_{n}: {len(q):4d} nodes, level {n} = {sorted(ptree.branching_levels(q, n))[:4]}...")
print("fused:", len(fused), "nodes;", "below every stage:", all(ptree.leq_n(fused, q, n) for n, q in enumerate(seq)))

rng = random.Random(1)
q = ptree.random_subcondition(p, rng, 12)
hits = [s for s in ptree.branching_levels(p, 2) if ptree.compatible(q, ptree.restrict(p, s))]
print("cones of level 2 compatible with a random q <= p:", hits)
