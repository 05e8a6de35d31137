"""Projector construction, Boolean algebras, compatibility, deduction."""

import math

import numpy as np
import pytest

from folksearch.errors import (
    AlgebraTooLarge,
    DimensionMismatch,
    IncompatibleFrameworks,
    IncompatibleStatements,
)
from folksearch.projectors import (
    ConceptStatement,
    Description,
    Framework,
    Projector,
    SpaceBasis,
    assumption_product,
    check_reasoning_chain,
    commutator_norm,
    commutes,
    conjoin,
    frameworks_compatible,
    generate_boolean_algebra,
    identity,
    join,
    master_description,
    meet,
    negate,
    projector_from_extent,
    smallest_common_framework,
    valid_conclusion,
    zero,
)

from .oracles import random_commuting_projectors, range_containment_oracle


def diag(*entries) -> Projector:
    return Projector(np.diag([float(e) for e in entries]))


@pytest.fixture
def basis2():
    return SpaceBasis(labels=("axis0", "axis1"))


@pytest.fixture
def axis_pair():
    """The canonical non-commuting pair: axis projector vs span{(1,1)}."""
    p = diag(1, 0)
    q = Projector(np.full((2, 2), 0.5))
    return p, q


# --- construction ---------------------------------------------------------

def test_projector_validation_rejects_non_idempotent():
    with pytest.raises(ValueError):
        Projector(np.array([[0.5, 0.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        Projector(np.array([[1.0, 0.2], [0.0, 0.0]]))


def test_projector_from_single_axis(basis2):
    p = projector_from_extent(basis2, member_axes=[0])
    assert np.allclose(p.matrix, [[1, 0], [0, 0]])


def test_projector_from_weight_vector(basis2):
    p = projector_from_extent(basis2, weights=[np.array([1.0, 1.0])])
    assert np.allclose(p.matrix, [[0.5, 0.5], [0.5, 0.5]], atol=1e-12)


def test_projector_from_all_axes_is_identity(basis2):
    p = projector_from_extent(basis2, member_axes=[0, 1])
    assert np.allclose(p.matrix, np.eye(2))


def test_projector_from_nothing_is_zero(basis2):
    assert np.allclose(projector_from_extent(basis2).matrix, 0.0)


def test_projector_from_extent_dimension_check(basis2):
    with pytest.raises(DimensionMismatch):
        projector_from_extent(basis2, member_axes=[5])
    with pytest.raises(DimensionMismatch):
        projector_from_extent(basis2, weights=[np.ones(3)])


# --- negation ----------------------------------------------------------------

def test_negate_identity_and_zero():
    assert np.allclose(negate(identity(3)).matrix, 0.0)
    assert np.allclose(negate(zero(3)).matrix, np.eye(3))


def test_negate_axis():
    assert np.allclose(negate(diag(1, 0)).matrix, np.diag([0.0, 1.0]))


def test_negate_involutive(axis_pair):
    p, q = axis_pair
    for candidate in (p, q):
        assert np.allclose(negate(negate(candidate)).matrix, candidate.matrix)


# --- commutation ----------------------------------------------------------------

def test_commutes_with_self(axis_pair):
    p, q = axis_pair
    assert commutes(p, p)
    assert commutes(q, q)


def test_diagonal_projectors_commute():
    assert commutes(diag(1, 0, 1), diag(0, 1, 1))


def test_noncommuting_pair(axis_pair):
    p, q = axis_pair
    assert not commutes(p, q)
    assert commutator_norm(p, q) == pytest.approx(math.sqrt(0.5), abs=1e-9)
    assert round(commutator_norm(p, q), 8) == 0.70710678


def test_commutes_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        commutes(diag(1, 0), diag(1, 0, 0))


# --- conjunction / meet / join ---------------------------------------------------

def test_conjoin_with_identity():
    p = diag(1, 0, 1)
    assert np.allclose(conjoin(p, identity(3)).matrix, p.matrix)


def test_conjoin_orthogonal_axes():
    assert np.allclose(conjoin(diag(1, 0, 0), diag(0, 1, 0)).matrix, 0.0)


def test_conjoin_noncommuting_raises(axis_pair):
    with pytest.raises(IncompatibleStatements):
        conjoin(*axis_pair)


def test_join_idempotent():
    p = diag(1, 0, 1)
    assert np.allclose(join(p, p).matrix, p.matrix)


def test_join_orthogonal_axes():
    assert np.allclose(
        join(diag(1, 0, 0), diag(0, 1, 0)).matrix, np.diag([1.0, 1.0, 0.0])
    )


def test_meet_with_complement_is_zero():
    p = diag(1, 0, 1)
    assert np.allclose(meet(p, negate(p)).matrix, 0.0)


def test_de_morgan():
    rng = np.random.default_rng(11)
    for _ in range(25):
        a, z = random_commuting_projectors(rng, 5)
        p, q = Projector(a), Projector(z)
        lhs = negate(join(p, q)).matrix
        rhs = meet(negate(p), negate(q)).matrix
        assert np.linalg.norm(lhs - rhs) <= 1e-9 * 5


# --- Boolean algebra ----------------------------------------------------------

def test_algebra_two_orthogonal_generators():
    algebra = generate_boolean_algebra([diag(1, 0, 0), diag(0, 1, 0)])
    assert len(algebra.atoms) == 3
    assert algebra.element_count == 8
    elements = algebra.elements()
    assert len(elements) == 8


def test_algebra_identity_generator():
    algebra = generate_boolean_algebra([identity(3)])
    assert len(algebra.atoms) == 1
    matrices = [e.matrix for e in algebra.elements()]
    assert any(np.allclose(m, 0.0) for m in matrices)
    assert any(np.allclose(m, np.eye(3)) for m in matrices)
    assert algebra.element_count == 2


def test_algebra_no_generators():
    algebra = generate_boolean_algebra([], dimension=3)
    assert algebra.element_count == 2
    assert np.allclose(algebra.atoms[0].matrix, np.eye(3))


def test_algebra_atoms_orthogonal_and_sum_to_identity():
    rng = np.random.default_rng(5)
    for _ in range(10):
        a, z = random_commuting_projectors(rng, 6)
        algebra = generate_boolean_algebra([Projector(a), Projector(z)])
        total = np.zeros((6, 6))
        for i, atom in enumerate(algebra.atoms):
            total = total + atom.matrix
            for other in algebra.atoms[i + 1 :]:
                assert np.linalg.norm(atom.matrix @ other.matrix) <= 1e-8
        assert np.allclose(total, np.eye(6), atol=1e-8)


def test_algebra_elements_are_projectors():
    algebra = generate_boolean_algebra([diag(1, 0, 0), diag(0, 1, 0)])
    for element in algebra.elements():
        m = element.matrix
        assert np.abs(m - m.T).max() <= 1e-9
        assert np.linalg.norm(m @ m - m) <= 1e-9 * 3


def test_algebra_guardrail():
    generators = [
        Projector(np.diag([1.0 if i == j else 0.0 for j in range(25)]))
        for i in range(25)
    ]
    with pytest.raises(AlgebraTooLarge):
        generate_boolean_algebra(generators)


def test_algebra_noncommuting_generators(axis_pair):
    with pytest.raises(IncompatibleStatements):
        generate_boolean_algebra(list(axis_pair))


def test_algebra_contains():
    algebra = generate_boolean_algebra([diag(1, 0, 0), diag(0, 1, 0)])
    assert algebra.contains(diag(1, 1, 0))
    assert algebra.contains(zero(3))
    assert algebra.contains(identity(3))
    assert not algebra.contains(Projector(np.full((3, 3), 1.0 / 3.0)))


# --- frameworks -----------------------------------------------------------------

def _framework(basis, *matrices, prefix="s"):
    statements = [
        ConceptStatement(id=f"{prefix}{i}", projector=p)
        for i, p in enumerate(matrices)
    ]
    return Framework.build(basis, statements)


def test_framework_build_rejects_noncommuting(basis2, axis_pair):
    p, q = axis_pair
    with pytest.raises(IncompatibleStatements):
        _framework(basis2, p, q)


def test_singleton_collection_compatible(basis2):
    fw = _framework(basis2, diag(1, 0))
    assert frameworks_compatible([fw])


def test_diagonal_frameworks_compatible(basis2):
    fw1 = _framework(basis2, diag(1, 0), prefix="a")
    fw2 = _framework(basis2, diag(0, 1), prefix="b")
    assert frameworks_compatible([fw1, fw2])


def test_noncommuting_frameworks_incompatible(basis2, axis_pair):
    p, q = axis_pair
    fw1 = _framework(basis2, p, prefix="a")
    fw2 = _framework(basis2, q, prefix="b")
    assert not frameworks_compatible([fw1, fw2])


def test_different_bases_incompatible(basis2):
    other = SpaceBasis(labels=("x", "y"))
    fw1 = _framework(basis2, diag(1, 0), prefix="a")
    fw2 = _framework(other, diag(0, 1), prefix="b")
    assert not frameworks_compatible([fw1, fw2])


def test_smallest_common_framework():
    basis = SpaceBasis(labels=("a", "b", "c"))
    fw1 = _framework(basis, diag(1, 0, 0), prefix="a")
    fw2 = _framework(basis, diag(0, 1, 0), prefix="b")
    union = smallest_common_framework([fw1, fw2])
    assert union.algebra.element_count == 8
    for member in (fw1, fw2):
        for statement in member.elementary:
            assert union.algebra.contains(statement.projector)


def test_smallest_common_framework_of_identical_inputs(basis2):
    fw = _framework(basis2, diag(1, 0))
    union = smallest_common_framework([fw, fw])
    assert len(union.elementary) == len(fw.elementary)
    assert union.algebra.element_count == fw.algebra.element_count


def test_smallest_common_framework_incompatible(basis2, axis_pair):
    p, q = axis_pair
    fw1 = _framework(basis2, p, prefix="a")
    fw2 = _framework(basis2, q, prefix="b")
    with pytest.raises(IncompatibleFrameworks):
        smallest_common_framework([fw1, fw2])


# --- deduction ---------------------------------------------------------------

def test_assumption_product_single():
    statement = ConceptStatement(id="a", projector=diag(1, 0, 1))
    assert np.allclose(assumption_product([statement]).matrix, statement.projector.matrix)


def test_assumption_product_diagonals():
    statements = [
        ConceptStatement(id="a", projector=diag(1, 1, 0)),
        ConceptStatement(id="b", projector=diag(0, 1, 1)),
    ]
    assert np.allclose(assumption_product(statements).matrix, np.diag([0.0, 1.0, 0.0]))


def test_assumption_product_absorbs_zero():
    statements = [
        ConceptStatement(id="a", projector=diag(1, 1, 0)),
        ConceptStatement(id="z", projector=zero(3)),
    ]
    assert np.allclose(assumption_product(statements).matrix, 0.0)


def test_assumption_product_order_invariant():
    rng = np.random.default_rng(17)
    for _ in range(10):
        a, z = random_commuting_projectors(rng, 5)
        s1 = ConceptStatement(id="a", projector=Projector(a))
        s2 = ConceptStatement(id="b", projector=Projector(z))
        forward = assumption_product([s1, s2]).matrix
        backward = assumption_product([s2, s1]).matrix
        assert np.linalg.norm(forward - backward) <= 1e-9


def test_assumption_product_rejects_noncommuting(axis_pair):
    p, q = axis_pair
    with pytest.raises(IncompatibleStatements):
        assumption_product(
            [ConceptStatement(id="p", projector=p), ConceptStatement(id="q", projector=q)]
        )


def test_valid_conclusion_identity_always():
    rng = np.random.default_rng(3)
    for _ in range(10):
        a, _ = random_commuting_projectors(rng, 4)
        assert valid_conclusion(Projector(a), identity(4))


def test_valid_conclusion_diagonals():
    assert valid_conclusion(diag(1, 0, 0), diag(1, 1, 0))
    assert not valid_conclusion(diag(1, 0, 0), diag(0, 1, 1))


def test_valid_conclusion_noncommuting_raises(axis_pair):
    with pytest.raises(IncompatibleStatements):
        valid_conclusion(*axis_pair)


def test_valid_conclusion_matches_rank_oracle():
    rng = np.random.default_rng(20260809)
    disagreements = 0
    for i in range(200):
        dim = int(rng.integers(2, 7))
        a, z = random_commuting_projectors(rng, dim, force_containment=i % 2 == 0)
        engine = valid_conclusion(Projector(a), Projector(z))
        oracle = range_containment_oracle(a, z)
        if engine != oracle:
            disagreements += 1
    assert disagreements == 0


# --- master descriptions and chains ---------------------------------------------

def _description(basis, matrix, statement_id="s0"):
    fw = _framework(basis, matrix, prefix=statement_id)
    return Description(framework=fw, statement=fw.elementary[0])


def test_master_description_single(basis2):
    d = _description(basis2, diag(1, 0))
    assert master_description([d]) is d


def test_master_description_product():
    basis = SpaceBasis(labels=("a", "b", "c"))
    d1 = _description(basis, diag(1, 1, 0), "f1")
    d2 = _description(basis, diag(1, 0, 0), "f2")
    master = master_description([d1, d2])
    assert np.allclose(master.statement.projector.matrix, np.diag([1.0, 0.0, 0.0]))
    assert master.framework.algebra.contains(master.statement.projector)


def test_master_description_preserves_deductions():
    basis = SpaceBasis(labels=("a", "b", "c"))
    d1 = _description(basis, diag(1, 1, 0), "f1")
    d2 = _description(basis, diag(0, 1, 1), "f2")
    master = master_description([d1, d2])
    collective = assumption_product([d1.statement, d2.statement])
    for z in (diag(0, 1, 0), diag(1, 1, 0), diag(1, 0, 0), identity(3), zero(3)):
        assert valid_conclusion(collective, z) == valid_conclusion(
            master.statement.projector, z
        )


def test_master_description_incompatible(basis2, axis_pair):
    p, q = axis_pair
    d1 = _description(basis2, p, "f1")
    d2 = _description(basis2, q, "f2")
    with pytest.raises(IncompatibleFrameworks):
        master_description([d1, d2])


def test_chain_of_diagonals_globally_valid():
    basis = SpaceBasis(labels=("a", "b", "c"))
    chain = [
        _description(basis, diag(1, 0, 0), "f1"),
        _description(basis, diag(1, 1, 0), "f2"),
        _description(basis, identity(3), "f3"),
    ]
    report = check_reasoning_chain(chain)
    assert all(report.adjacent_compatible)
    assert all(v is True for v in report.adjacent_valid)
    assert report.all_pairs_compatible
    assert report.globally_valid


def test_chain_nontransitivity_witness(basis2, axis_pair):
    p, w = axis_pair
    a = _description(basis2, p, "a")
    z = _description(basis2, identity(2), "z")
    witness = _description(basis2, w, "w")
    report = check_reasoning_chain([a, z, witness])
    assert report.adjacent_compatible == (True, True)
    assert not report.all_pairs_compatible
    assert not report.globally_valid


def test_chain_repeating_description_valid(basis2):
    d = _description(basis2, diag(1, 0))
    report = check_reasoning_chain([d, d, d])
    assert report.globally_valid


def test_chain_needs_two(basis2):
    with pytest.raises(ValueError):
        check_reasoning_chain([_description(basis2, diag(1, 0))])
