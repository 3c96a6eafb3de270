"""Every span of six basis vectors in dimension 12 over F_3 meets the first
three oscillation classes.  Print one witness per class for a few spans,
then the class census the calibration fixture records for that shape.
"""
from itertools import combinations

from blockramsey.checks import guaranteed_classes
from blockramsey.osc import asymptotic_class, find_in_class, osc, partition_class
from blockramsey.vecspace import BlockSeq

print("k    :", " ".join(f"{k:2d}" for k in range(16)))
print("class:", " ".join(f"{partition_class(k):2d}" for k in range(16)))
print()

for idx in list(combinations(range(12), 6))[::300]:
    X = BlockSeq.basis(idx, 3)
    print(X)
    for n in range(3):
        v = find_in_class(X, n)
        print(f"  class {n}: {v}  osc={osc(v)}  check={asymptotic_class(v)}")

print("\nclasses met by every such span:", guaranteed_classes(3, 6, 12))
