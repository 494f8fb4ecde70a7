"""Build finite groups, inspect their conjugacy structure, and turn them
into conjugation racks.

Run as: python3 demos/01_groups_and_racks.py
"""

from rackle import (
    conjugacy_classes,
    conjugacy_class_rack,
    group_from_cayley_table,
    group_invariants,
    group_rack,
    p_power_rack,
    verify_rack_axioms,
)
from rackle.catalog import named_group

# Groups come from the built-in catalog, a Cayley table, or permutation
# generators. The catalog covers every group of order <= 12 and a spread
# of larger ones.
s3 = named_group("S3")
print(f"{s3.name}: {group_invariants(s3).summary()}")

klein = group_from_cayley_table(
    [[0, 1, 2, 3],
     [1, 0, 3, 2],
     [2, 3, 0, 1],
     [3, 2, 1, 0]],
    name="klein",
)
print(f"{klein.name}: {group_invariants(klein).summary()}")

# Conjugacy classes drive everything downstream: the lattice coatoms turn
# out to be exactly the complements of single classes.
part = conjugacy_classes(s3)
print(f"\n{s3.name} has {part.count} conjugacy classes, sizes {part.sizes()}")
for i, cls in enumerate(part.classes):
    orders = sorted(s3.element_order(x) for x in cls)
    print(f"  class {i}: elements {sorted(cls)} of order {orders[0]}")

# The conjugation rack on the full group: a |> b = a b a^-1. For abelian
# groups this operation does nothing, which is why their lattices are
# full power sets.
rack = group_rack(s3)
report = verify_rack_axioms(rack.op)
print(f"\ngroup rack on {s3.name}: size {rack.size}, "
      f"rack={report.is_rack}, quandle={report.is_quandle}")

# Smaller conjugation racks: one conjugacy class, or all elements of
# p-power order.
transpositions = next(i for i, c in enumerate(part.classes) if len(c) == 3)
crack = conjugacy_class_rack(s3, transpositions)
print(f"transposition class rack: size {crack.size}, "
      f"labels {crack.ground_labels}")

for p in (2, 3):
    prack = p_power_rack(s3, p)
    print(f"{p}-power rack: size {prack.size} (elements of {p}-power order)")
