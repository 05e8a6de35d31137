"""Formal contexts over (facet, tag, incidence) triples and their concept lattices.

A speaker's contributions form a formal context: facets are the objects,
folksonomy tags the attributes, and each (facet, tag) pair carries an
incidence label plus a similarity degree used downstream for disambiguation.
Concepts are enumerated with NextClosure in lectic order, so every build of
the same context yields the same concept list, the same indices and the same
lattice.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from typing import Iterable, Mapping

import numpy as np

from .errors import EmptyLabel, NotALattice, UnknownFacet, UnknownTag

#: Degree assigned to a (facet, tag) pair on first insertion.
NEUTRAL_DEGREE = 0.5


def normalize_label(raw: str) -> str:
    """Lowercase, trim, and collapse internal whitespace to single spaces."""
    return " ".join(raw.lower().split())


def require_label(raw: str, kind: str = "label") -> str:
    normalized = normalize_label(raw)
    if not normalized:
        raise EmptyLabel(f"{kind} {raw!r} is empty after normalization")
    return normalized


@dataclass(frozen=True)
class Triple:
    """One (facet, tag, incidence) association with its similarity degree."""

    facet: str
    tag: str
    incidence: str
    similarity_degree: float = NEUTRAL_DEGREE
    timestamp: datetime | None = None


@dataclass(frozen=True)
class FormalContext:
    """Immutable triple store; add_triple returns a new version."""

    facets: frozenset[str]
    tags: frozenset[str]
    incidence: Mapping[tuple[str, str], Triple]

    @classmethod
    def empty(cls) -> "FormalContext":
        return cls(frozenset(), frozenset(), {})

    @classmethod
    def from_triples(cls, triples: Iterable[tuple[str, str, str]]) -> "FormalContext":
        context = cls.empty()
        for facet, tag, incidence in triples:
            context = add_triple(context, facet, tag, incidence)
        return context

    def has(self, facet: str, tag: str) -> bool:
        return (facet, tag) in self.incidence

    def tags_of(self, facet: str) -> frozenset[str]:
        return frozenset(t for (f, t) in self.incidence if f == facet)

    def facets_of(self, tag: str) -> frozenset[str]:
        return frozenset(f for (f, t) in self.incidence if t == tag)

    def __len__(self) -> int:
        return len(self.incidence)


@dataclass(frozen=True)
class FormalConcept:
    """A closed (extent, intent) pair."""

    extent: frozenset[str]
    intent: frozenset[str]


@dataclass(frozen=True)
class ConceptLattice:
    """All concepts of one context, ordered, with reduced labelling.

    ``concepts`` is in lectic order of intents; ``cover_edges`` holds
    (lower, upper) index pairs of the transitive reduction; each facet and
    tag labels exactly one concept.
    """

    concepts: tuple[FormalConcept, ...]
    cover_edges: tuple[tuple[int, int], ...]
    top: int
    bottom: int
    facet_labels: Mapping[str, int]
    tag_labels: Mapping[str, int]

    def upper_neighbors(self, node: int) -> list[int]:
        return [u for (l, u) in self.cover_edges if l == node]

    def lower_neighbors(self, node: int) -> list[int]:
        return [l for (l, u) in self.cover_edges if u == node]

    def __len__(self) -> int:
        return len(self.concepts)


def add_triple(
    context: FormalContext,
    facet: str,
    tag: str,
    incidence: str,
    timestamp: datetime | None = None,
) -> FormalContext:
    """Insert or refresh one association; returns a new context version.

    New (facet, tag) pairs start at the neutral degree 0.5; re-insertion
    keeps the existing degree but picks up the latest incidence label and
    timestamp.
    """
    facet = require_label(facet, "facet")
    tag = require_label(tag, "tag")
    incidence = require_label(incidence, "incidence")
    pairs = dict(context.incidence)
    key = (facet, tag)
    previous = pairs.get(key)
    degree = previous.similarity_degree if previous else NEUTRAL_DEGREE
    pairs[key] = Triple(facet, tag, incidence, degree, timestamp)
    return FormalContext(
        facets=context.facets | {facet},
        tags=context.tags | {tag},
        incidence=pairs,
    )


def set_degree(context: FormalContext, facet: str, tag: str, degree: float) -> FormalContext:
    """Return a context with the (facet, tag) similarity degree replaced."""
    key = (normalize_label(facet), normalize_label(tag))
    if key not in context.incidence:
        raise UnknownTag(f"no incidence for {key}")
    pairs = dict(context.incidence)
    old = pairs[key]
    pairs[key] = Triple(old.facet, old.tag, old.incidence, degree, old.timestamp)
    return FormalContext(context.facets, context.tags, pairs)


def derive_tags(context: FormalContext, facets: Iterable[str]) -> set[str]:
    """Tags shared by every facet in ``facets``; all tags for empty input."""
    facets = set(facets)
    unknown = facets - context.facets
    if unknown:
        raise UnknownFacet(f"unknown facets: {sorted(unknown)}")
    if not facets:
        return set(context.tags)
    result = None
    for facet in facets:
        row = context.tags_of(facet)
        result = row if result is None else result & row
    return set(result)


def derive_facets(context: FormalContext, tags: Iterable[str]) -> set[str]:
    """Facets carrying every tag in ``tags``; all facets for empty input."""
    tags = set(tags)
    unknown = tags - context.tags
    if unknown:
        raise UnknownTag(f"unknown tags: {sorted(unknown)}")
    if not tags:
        return set(context.facets)
    result = None
    for tag in tags:
        column = context.facets_of(tag)
        result = column if result is None else result & column
    return set(result)


def closure(context: FormalContext, tags: Iterable[str]) -> set[str]:
    """Closed intent containing ``tags`` (double derivation)."""
    return derive_tags(context, derive_facets(context, tags))


def leq(c1: FormalConcept, c2: FormalConcept) -> bool:
    """Subconcept order: extent inclusion (equivalently reversed intents)."""
    return c1.extent <= c2.extent


def enumerate_concepts(context: FormalContext) -> list[FormalConcept]:
    """All formal concepts, in lectic order of intents (NextClosure)."""
    attrs = sorted(context.tags)
    position = {t: i for i, t in enumerate(attrs)}
    m = len(attrs)

    current = closure(context, ())
    concepts = [
        FormalConcept(frozenset(derive_facets(context, current)), frozenset(current))
    ]
    while len(current) < m:
        advanced = False
        for i in range(m - 1, -1, -1):
            tag = attrs[i]
            if tag in current:
                continue
            candidate = {t for t in current if position[t] < i}
            candidate.add(tag)
            closed = closure(context, candidate)
            if all(position[t] >= i or t in candidate for t in closed):
                current = closed
                concepts.append(
                    FormalConcept(
                        frozenset(derive_facets(context, current)),
                        frozenset(current),
                    )
                )
                advanced = True
                break
        if not advanced:  # pragma: no cover - NextClosure always advances
            break
    return concepts


def _extent_masks(concepts: list[FormalConcept]) -> tuple[list[int], list[str]]:
    facets = sorted(set().union(*(c.extent for c in concepts)) if concepts else set())
    bit = {f: 1 << i for i, f in enumerate(facets)}
    masks = [sum(bit[f] for f in c.extent) for c in concepts]
    return masks, facets


def build_lattice(concepts: Iterable[FormalConcept]) -> ConceptLattice:
    """Order a complete concept set and attach the reduced labelling.

    Raises NotALattice when the input is not closed under meets and joins,
    which signals that the caller did not pass the full concept set.
    """
    concepts = list(concepts)
    if not concepts:
        raise NotALattice("no concepts given")
    if len({c.extent for c in concepts}) != len(concepts):
        raise NotALattice("duplicate extents")

    masks, _ = _extent_masks(concepts)
    n = len(concepts)

    def below(i: int, j: int) -> bool:
        return masks[i] & ~masks[j] == 0

    maximal = [
        i for i in range(n)
        if not any(j != i and below(i, j) for j in range(n))
    ]
    minimal = [
        i for i in range(n)
        if not any(j != i and below(j, i) for j in range(n))
    ]
    if len(maximal) != 1 or len(minimal) != 1:
        raise NotALattice("order has no unique top/bottom")
    top, bottom = maximal[0], minimal[0]

    for i in range(n):
        for j in range(i + 1, n):
            lower = [k for k in range(n) if below(k, i) and below(k, j)]
            max_lower = [k for k in lower if not any(h != k and below(k, h) for h in lower)]
            if len(max_lower) != 1:
                raise NotALattice("meet missing for a concept pair")
            upper = [k for k in range(n) if below(i, k) and below(j, k)]
            min_upper = [k for k in upper if not any(h != k and below(h, k) for h in upper)]
            if len(min_upper) != 1:
                raise NotALattice("join missing for a concept pair")

    cover_edges = []
    for i in range(n):
        for j in range(n):
            if i == j or not below(i, j):
                continue
            if not any(k not in (i, j) and below(i, k) and below(k, j) for k in range(n)):
                cover_edges.append((i, j))
    cover_edges.sort()

    facet_labels: dict[str, int] = {}
    for facet in sorted(set().union(*(c.extent for c in concepts))):
        holding = [i for i in range(n) if facet in concepts[i].extent]
        smallest = min(holding, key=lambda i: (len(concepts[i].extent), i))
        facet_labels[facet] = smallest
    tag_labels: dict[str, int] = {}
    for tag in sorted(set().union(*(c.intent for c in concepts))):
        holding = [i for i in range(n) if tag in concepts[i].intent]
        largest = max(holding, key=lambda i: (len(concepts[i].extent), -i))
        tag_labels[tag] = largest

    return ConceptLattice(
        concepts=tuple(concepts),
        cover_edges=tuple(cover_edges),
        top=top,
        bottom=bottom,
        facet_labels=facet_labels,
        tag_labels=tag_labels,
    )


def lattice_of(context: FormalContext) -> ConceptLattice:
    """Convenience: enumerate concepts and build the lattice in one step."""
    return build_lattice(enumerate_concepts(context))


def incidence_matrix(context: FormalContext) -> np.ndarray:
    """0/1 matrix with rows/columns in lexicographic label order."""
    facets = sorted(context.facets)
    tags = sorted(context.tags)
    matrix = np.zeros((len(facets), len(tags)), dtype=int)
    for i, facet in enumerate(facets):
        for j, tag in enumerate(tags):
            if context.has(facet, tag):
                matrix[i, j] = 1
    return matrix
