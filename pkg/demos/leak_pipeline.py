"""Encode a bit string as a set of naturals, play its first few codes as
target classes, and read the classes back off arbitrary span vectors.
"""
from itertools import product

from blockramsey import codec
from blockramsey.vecspace import combine

g = "1011"
z = codec.z_of(g).sorted()
print(f"z({g}) = {z}; any nonempty part recovers a prefix, e.g. {z[-2:]} -> {codec.recover_prefix(z[-2:])!r}")
try:
    codec.recover_prefix([1, 2])
except codec.Inconsistent as exc:
    print("[1, 2] is inconsistent:", exc)

targets = [0, 1, 2]
res = codec.pipeline_encode_play(targets, codec.basis_catalog(3, 8, 3))
print("outcome:", res.outcome)
for c in product(range(3), repeat=3):
    if any(c) and c[0] != 2:
        v = combine(c, res.outcome)
        print(f"  {c} -> classes {sorted(codec.pipeline_decode(v, res.outcome))}")
