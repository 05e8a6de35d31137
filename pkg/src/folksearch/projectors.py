"""Concept statements as commuting projectors with quantum-logic rules.

Statements live on one shared finite-dimensional real inner-product space
whose axes are the elementary contexts seen in the corpus. A framework is a
Boolean algebra generated by commuting projectors; statements from frameworks
whose projectors fail to commute cannot be combined ("nonsense"), and
deduction is range containment: Z is a valid conclusion of A iff ZA = A.

Everything is real and symmetric; nothing here needs complex phases.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AlgebraTooLarge,
    DimensionMismatch,
    IncompatibleFrameworks,
    IncompatibleStatements,
)

#: Per-dimension tolerance for symmetry / idempotence / commutation checks.
TOLERANCE = 1e-9
#: Singular values below this are treated as zero during orthonormalization.
RANK_TOLERANCE = 1e-9
#: Guardrail: refuse to build algebras with more atoms than this.
MAX_ATOMS = 20


@dataclass(frozen=True)
class SpaceBasis:
    """Labelled axes of the shared space; one axis per elementary context."""

    labels: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("basis labels must be distinct")

    @property
    def dimension(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)


@dataclass(frozen=True)
class Projector:
    """Validated orthogonal projector (symmetric, idempotent)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"projector must be square, got {m.shape}")
        dim = max(m.shape[0], 1)
        if np.abs(m - m.T).max(initial=0.0) > TOLERANCE:
            raise ValueError("matrix is not symmetric")
        if np.linalg.norm(m @ m - m) > TOLERANCE * dim:
            raise ValueError("matrix is not idempotent")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @property
    def rank(self) -> int:
        return int(round(float(np.trace(self.matrix))))

    def close_to(self, other: "Projector", tol: float | None = None) -> bool:
        if self.dimension != other.dimension:
            return False
        tol = TOLERANCE * self.dimension if tol is None else tol
        return float(np.linalg.norm(self.matrix - other.matrix)) <= tol


def identity(dimension: int) -> Projector:
    return Projector(np.eye(dimension))


def zero(dimension: int) -> Projector:
    return Projector(np.zeros((dimension, dimension)))


def _symmetrized(m: np.ndarray) -> Projector:
    return Projector((m + m.T) / 2.0)


def _check_dims(p: Projector, q: Projector) -> int:
    if p.dimension != q.dimension:
        raise DimensionMismatch(
            f"projectors of dimension {p.dimension} and {q.dimension}"
        )
    return p.dimension


def projector_from_extent(
    basis: SpaceBasis,
    member_axes: Iterable[int] = (),
    weights: Iterable[np.ndarray] = (),
) -> Projector:
    """Orthogonal projector onto span(axis indicators + weight vectors).

    Both inputs empty yields the zero operator. Weight vectors must have the
    basis dimension; near-dependent directions are dropped at the rank
    tolerance.
    """
    dim = basis.dimension
    columns = []
    for axis in member_axes:
        if not 0 <= axis < dim:
            raise DimensionMismatch(f"axis {axis} outside basis of dimension {dim}")
        e = np.zeros(dim)
        e[axis] = 1.0
        columns.append(e)
    for w in weights:
        w = np.asarray(w, dtype=float)
        if w.shape != (dim,):
            raise DimensionMismatch(f"weight vector shape {w.shape}, expected ({dim},)")
        columns.append(w)
    if not columns:
        return zero(dim)
    stacked = np.column_stack(columns)
    u, s, _ = np.linalg.svd(stacked, full_matrices=False)
    r = int(np.sum(s > RANK_TOLERANCE))
    if r == 0:
        return zero(dim)
    b = u[:, :r]
    return _symmetrized(b @ b.T)


def negate(p: Projector) -> Projector:
    """Complement I - P."""
    return Projector(np.eye(p.dimension) - p.matrix)


def commutes(p: Projector, q: Projector) -> bool:
    """True iff the commutator norm stays within the scaled tolerance."""
    dim = _check_dims(p, q)
    pq = p.matrix @ q.matrix
    return float(np.linalg.norm(pq - pq.T)) <= TOLERANCE * dim


def commutator_norm(p: Projector, q: Projector) -> float:
    """Frobenius norm of PQ - QP (diagnostic for the nonsense rule)."""
    _check_dims(p, q)
    return float(np.linalg.norm(p.matrix @ q.matrix - q.matrix @ p.matrix))


def conjoin(p: Projector, q: Projector) -> Projector:
    """Conjunction PQ; raises IncompatibleStatements when PQ != QP."""
    if not commutes(p, q):
        raise IncompatibleStatements("projectors do not commute")
    return _symmetrized(p.matrix @ q.matrix)


def meet(p: Projector, q: Projector) -> Projector:
    return conjoin(p, q)


def join(p: Projector, q: Projector) -> Projector:
    """Disjunction P + Q - PQ for commuting projectors."""
    if not commutes(p, q):
        raise IncompatibleStatements("projectors do not commute")
    return _symmetrized(p.matrix + q.matrix - p.matrix @ q.matrix)


@dataclass(frozen=True)
class BooleanAlgebra:
    """Algebra represented by its atoms (minimal joint-eigenspace projectors).

    Every element is a sum of atoms, so the full element set has size
    2 ** len(atoms) and never needs explicit enumeration.
    """

    dimension: int
    atoms: tuple[Projector, ...]

    @property
    def element_count(self) -> int:
        return 2 ** len(self.atoms)

    @property
    def zero(self) -> Projector:
        return zero(self.dimension)

    @property
    def identity(self) -> Projector:
        return identity(self.dimension)

    def contains(self, p: Projector, tol: float | None = None) -> bool:
        """True iff p equals a sum of atoms within tolerance."""
        if p.dimension != self.dimension:
            return False
        tol = TOLERANCE * self.dimension if tol is None else tol
        reconstruction = np.zeros((self.dimension, self.dimension))
        for atom in self.atoms:
            weight = float(np.trace(atom.matrix @ p.matrix)) / atom.rank
            if weight > 0.5:
                reconstruction = reconstruction + atom.matrix
        return float(np.linalg.norm(reconstruction - p.matrix)) <= tol

    def elements(self) -> list[Projector]:
        """Explicit element list; only sensible for small atom counts."""
        out = []
        for mask in range(2 ** len(self.atoms)):
            total = np.zeros((self.dimension, self.dimension))
            for i, atom in enumerate(self.atoms):
                if mask >> i & 1:
                    total = total + atom.matrix
            out.append(Projector(total))
        return out


def generate_boolean_algebra(
    generators: Sequence[Projector],
    dimension: int | None = None,
    max_atoms: int = MAX_ATOMS,
) -> BooleanAlgebra:
    """Smallest Boolean algebra containing the commuting generators.

    Joint eigenspaces are carved out by successive splitting: each generator
    splits every current block into its range and kernel parts. The blocks
    that survive are the atoms; they are mutually orthogonal and sum to I.
    """
    generators = list(generators)
    if dimension is None:
        if not generators:
            raise ValueError("dimension required when no generators are given")
        dimension = generators[0].dimension
    for g in generators:
        if g.dimension != dimension:
            raise DimensionMismatch("generators on different spaces")
    for a, b in combinations(generators, 2):
        if not commutes(a, b):
            raise IncompatibleStatements("generators do not commute")

    blocks = [np.eye(dimension)]
    for g in generators:
        refined = []
        for block in blocks:
            restricted = block.T @ g.matrix @ block
            eigenvalues, vectors = np.linalg.eigh((restricted + restricted.T) / 2.0)
            in_kernel = eigenvalues <= 0.5
            in_range = ~in_kernel
            if in_kernel.any():
                refined.append(block @ vectors[:, in_kernel])
            if in_range.any():
                refined.append(block @ vectors[:, in_range])
        blocks = refined
        if len(blocks) > max_atoms:
            raise AlgebraTooLarge(f"{len(blocks)} atoms exceed the {max_atoms} guardrail")
    atoms = tuple(_symmetrized(b @ b.T) for b in blocks)
    return BooleanAlgebra(dimension=dimension, atoms=atoms)


@dataclass(frozen=True)
class ConceptStatement:
    """A named projector with the triples that justify it."""

    id: str
    projector: Projector
    provenance: tuple[tuple[str, str, str], ...] = ()


@dataclass(frozen=True)
class Framework:
    """Commuting concept statements plus their generated Boolean algebra."""

    basis: SpaceBasis
    elementary: tuple[ConceptStatement, ...]
    algebra: BooleanAlgebra

    @classmethod
    def build(
        cls,
        basis: SpaceBasis,
        statements: Sequence[ConceptStatement],
        max_atoms: int = MAX_ATOMS,
    ) -> "Framework":
        for statement in statements:
            if statement.projector.dimension != basis.dimension:
                raise DimensionMismatch(
                    f"statement {statement.id!r} not on the framework basis"
                )
        algebra = generate_boolean_algebra(
            [s.projector for s in statements],
            dimension=basis.dimension,
            max_atoms=max_atoms,
        )
        return cls(basis=basis, elementary=tuple(statements), algebra=algebra)

    def statement(self, statement_id: str) -> ConceptStatement:
        for s in self.elementary:
            if s.id == statement_id:
                return s
        raise KeyError(statement_id)


@dataclass(frozen=True)
class Description:
    """One framework together with one of its statements."""

    framework: Framework
    statement: ConceptStatement

    def __post_init__(self):
        if not self.framework.algebra.contains(self.statement.projector):
            raise ValueError(
                f"statement {self.statement.id!r} not in the framework algebra"
            )


def frameworks_compatible(collection: Sequence[Framework]) -> bool:
    """Shared basis and pairwise commuting elementary projectors."""
    if not collection:
        raise ValueError("compatibility needs at least one framework")
    first = collection[0].basis
    if any(fw.basis.labels != first.labels for fw in collection[1:]):
        return False
    for fw_a, fw_b in combinations(collection, 2):
        for a in fw_a.elementary:
            for b in fw_b.elementary:
                if not commutes(a.projector, b.projector):
                    return False
    return True


def smallest_common_framework(collection: Sequence[Framework]) -> Framework:
    """Framework generated by the deduplicated union of elementary statements."""
    if not frameworks_compatible(collection):
        raise IncompatibleFrameworks("frameworks do not commute on a shared basis")
    merged: list[ConceptStatement] = []
    for fw in collection:
        for statement in fw.elementary:
            if not any(statement.projector.close_to(kept.projector) for kept in merged):
                merged.append(statement)
    return Framework.build(collection[0].basis, merged)


def assumption_product(assumptions: Sequence[ConceptStatement]) -> Projector:
    """Product A1 A2 ... Al of pairwise commuting assumption projectors."""
    if not assumptions:
        raise ValueError("assumption_product needs at least one statement")
    for a, b in combinations(assumptions, 2):
        if not commutes(a.projector, b.projector):
            raise IncompatibleStatements(
                f"assumptions {a.id!r} and {b.id!r} do not commute"
            )
    product = assumptions[0].projector.matrix
    for statement in assumptions[1:]:
        product = product @ statement.projector.matrix
    return _symmetrized(product)


def valid_conclusion(a: Projector, z: Projector) -> bool:
    """Deduction rule: Z follows from A iff ZA = A (range containment)."""
    dim = _check_dims(a, z)
    if not commutes(a, z):
        raise IncompatibleStatements("assumption and conclusion do not commute")
    return float(np.linalg.norm(z.matrix @ a.matrix - a.matrix)) <= TOLERANCE * dim


def master_description(descriptions: Sequence[Description]) -> Description:
    """Replace a collective description by the product of its statements."""
    if not descriptions:
        raise ValueError("master_description needs at least one description")
    if len(descriptions) == 1:
        return descriptions[0]
    frameworks = [d.framework for d in descriptions]
    if not frameworks_compatible(frameworks):
        raise IncompatibleFrameworks("collective description spans incompatible frameworks")
    combined = smallest_common_framework(frameworks)
    product = assumption_product([d.statement for d in descriptions])
    statement = ConceptStatement(
        id="&".join(d.statement.id for d in descriptions),
        projector=product,
        provenance=tuple(
            entry for d in descriptions for entry in d.statement.provenance
        ),
    )
    return Description(framework=combined, statement=statement)


@dataclass(frozen=True)
class ChainReport:
    """Step-by-step audit of a reasoning chain.

    Adjacent checks alone can hide the quantum fallacy: compatibility is not
    transitive, so the global flag demands that every pair of frameworks in
    the chain is compatible, not just neighbors.
    """

    adjacent_compatible: tuple[bool, ...]
    adjacent_valid: tuple[bool | None, ...]
    all_pairs_compatible: bool
    globally_valid: bool


def check_reasoning_chain(chain: Sequence[Description]) -> ChainReport:
    if len(chain) < 2:
        raise ValueError("a reasoning chain needs at least two descriptions")
    adjacent_compatible = []
    adjacent_valid: list[bool | None] = []
    for current, following in zip(chain, chain[1:]):
        compatible = frameworks_compatible([current.framework, following.framework])
        adjacent_compatible.append(compatible)
        if compatible:
            adjacent_valid.append(
                valid_conclusion(current.statement.projector, following.statement.projector)
            )
        else:
            adjacent_valid.append(None)
    all_pairs = all(
        frameworks_compatible([a.framework, b.framework])
        for a, b in combinations(chain, 2)
    )
    globally_valid = all_pairs and all(v is True for v in adjacent_valid)
    return ChainReport(
        adjacent_compatible=tuple(adjacent_compatible),
        adjacent_valid=tuple(adjacent_valid),
        all_pairs_compatible=all_pairs,
        globally_valid=globally_valid,
    )
