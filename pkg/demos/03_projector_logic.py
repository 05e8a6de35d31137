"""Concept statements as projectors: conjunction, algebras, and nonsense.

Statements that commute form a Boolean algebra and behave classically.
Statements that do not commute cannot be combined at all; the conjunction is
rejected instead of silently approximated. Compatibility is not transitive,
so a chain of pairwise-compatible steps can still be globally invalid.
"""

import numpy as np

from folksearch import (
    ConceptStatement,
    Description,
    Framework,
    Projector,
    SpaceBasis,
    check_reasoning_chain,
    commutes,
    conjoin,
    generate_boolean_algebra,
    join,
    negate,
    projector_from_extent,
    valid_conclusion,
)
from folksearch.errors import IncompatibleStatements
from folksearch.projectors import commutator_norm, identity

basis = SpaceBasis(labels=("ctx0", "ctx1", "ctx2"))

p = projector_from_extent(basis, member_axes=[0])
q = projector_from_extent(basis, member_axes=[1])
print("axis statements commute:", commutes(p, q))
print("p AND q:\n", conjoin(p, q).matrix)
print("p OR q:\n", join(p, q).matrix)
print("NOT p:\n", negate(p).matrix)
print()

algebra = generate_boolean_algebra([p, q])
print(f"generated Boolean algebra: {len(algebra.atoms)} atoms, {algebra.element_count} elements")
print()

print("deduction (ZA = A means Z follows from A):")
a = projector_from_extent(basis, member_axes=[0])
z = projector_from_extent(basis, member_axes=[0, 1])
print("  narrow -> broad:", valid_conclusion(a, z))
print("  broad -> narrow:", valid_conclusion(z, a))
print()

# A projector onto a diagonal direction overlaps the first axis without
# containing it; the pair fails to commute and conjunction is nonsense.
two = SpaceBasis(labels=("x", "y"))
axis = projector_from_extent(two, member_axes=[0])
diagonal = projector_from_extent(two, weights=[np.array([1.0, 1.0])])
print("axis vs diagonal commutator norm:", round(commutator_norm(axis, diagonal), 8))
try:
    conjoin(axis, diagonal)
except IncompatibleStatements as exc:
    print("conjoin rejected:", exc)
print()

# Non-transitivity: A ~ Z and Z ~ W, yet A and W are incompatible.
def describe(projector, name):
    fw = Framework.build(two, [ConceptStatement(id=name, projector=projector)])
    return Description(framework=fw, statement=fw.elementary[0])

chain = [describe(axis, "a"), describe(identity(2), "z"), describe(diagonal, "w")]
report = check_reasoning_chain(chain)
print("chain a -> z -> w:")
print("  adjacent compatible:", report.adjacent_compatible)
print("  adjacent deductions:", report.adjacent_valid)
print("  all pairs compatible:", report.all_pairs_compatible)
print("  globally valid:", report.globally_valid)
