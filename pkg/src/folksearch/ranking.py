"""Tag importance and similarity metrics.

Four similarity views over one speaker's corpus: Wu-Palmer distance on the
concept lattice, cosine over tag vectors, label-sequence random-walk overlap
between tag graphs, and the DirectoryRank score that orders the tags of a
facet. Walk enumeration is exact; the graphs here are small enough that
sampling would only add noise.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Mapping

from .context import ConceptLattice, FormalContext
from .errors import (
    NoSubject,
    OutOfRange,
    UnknownFacet,
    UnknownNode,
    UnknownTag,
    ZeroVector,
)

#: Probability that a walk takes another step instead of stopping.
DEFAULT_CONTINUE_PROB = 0.8
#: Longest walk retained during enumeration.
DEFAULT_MAX_LEN = 4
#: Weight of the newest observation in the degree moving average.
DEGREE_SMOOTHING = 0.3

TagVector = Mapping[str, float]


@dataclass(frozen=True)
class LabeledTagGraph:
    """Directed tag graph walked from ``subject``.

    Every node except the subject carries a label; the subject is the tag
    being weighed, so its own label never enters a path sequence.
    """

    labels: Mapping[str, str | None]
    edges: Mapping[str, tuple[str, ...]]
    subject: str


@dataclass(frozen=True)
class WalkDistribution:
    """Exactly enumerated walk paths as (label sequence, probability)."""

    paths: tuple[tuple[tuple[str, ...], float], ...]

    @property
    def total_mass(self) -> float:
        return sum(p for _, p in self.paths)

    def as_dict(self) -> dict[tuple[str, ...], float]:
        return dict(self.paths)


@dataclass(frozen=True)
class DirectoryRankScore:
    tag: str
    score: float


def depth(lattice: ConceptLattice, node: int) -> int:
    """Nodes on a shortest top-to-node path; depth(top) == 1."""
    if not 0 <= node < len(lattice.concepts):
        raise UnknownNode(f"node {node} not in lattice")
    seen = {lattice.top: 1}
    queue = deque([lattice.top])
    while queue:
        current = queue.popleft()
        if current == node:
            return seen[current]
        for lower in lattice.lower_neighbors(current):
            if lower not in seen:
                seen[lower] = seen[current] + 1
                queue.append(lower)
    raise UnknownNode(f"node {node} unreachable from top")


def _ancestors(lattice: ConceptLattice, node: int) -> set[int]:
    """All nodes above ``node`` in the order, including the node itself."""
    seen = {node}
    queue = deque([node])
    while queue:
        current = queue.popleft()
        for upper in lattice.upper_neighbors(current):
            if upper not in seen:
                seen.add(upper)
                queue.append(upper)
    return seen


def _tag_node(lattice: ConceptLattice, tag: str) -> int:
    try:
        return lattice.tag_labels[tag]
    except KeyError:
        raise UnknownTag(f"tag {tag!r} not labelled in lattice") from None


def lcs(lattice: ConceptLattice, t1: str, t2: str) -> int:
    """Deepest common ancestor of two labelled tags.

    Ties go to the deeper node, then to the smaller concept index (indices
    follow lectic order, so this is stable across builds).
    """
    try:
        n1, n2 = _tag_node(lattice, t1), _tag_node(lattice, t2)
    except UnknownTag as exc:
        raise UnknownNode(str(exc)) from None
    common = _ancestors(lattice, n1) & _ancestors(lattice, n2)
    return min(common, key=lambda n: (-depth(lattice, n), n))


def wu_palmer(lattice: ConceptLattice, t1: str, t2: str) -> float:
    """2*depth(LCS) / (depth(t1) + depth(t2)); 1.0 iff both label one node."""
    n1, n2 = _tag_node(lattice, t1), _tag_node(lattice, t2)
    common = _ancestors(lattice, n1) & _ancestors(lattice, n2)
    subsumer = min(common, key=lambda n: (-depth(lattice, n), n))
    return 2.0 * depth(lattice, subsumer) / (depth(lattice, n1) + depth(lattice, n2))


def cosine(v1: TagVector, v2: TagVector) -> float:
    """Normalized inner product of two tag vectors."""
    n1 = math.sqrt(sum(x * x for x in v1.values()))
    n2 = math.sqrt(sum(x * x for x in v2.values()))
    if n1 == 0.0 or n2 == 0.0:
        raise ZeroVector("cosine undefined for zero-norm vector")
    dot = sum(x * v2.get(k, 0.0) for k, x in v1.items())
    return dot / (n1 * n2)


def enumerate_walks(
    graph: LabeledTagGraph,
    max_len: int = DEFAULT_MAX_LEN,
    continue_prob: float = DEFAULT_CONTINUE_PROB,
) -> WalkDistribution:
    """Enumerate every label-sequence path from the subject up to max_len.

    Each step carries probability continue_prob / outdegree; a walk at a
    non-sink stops with probability 1 - continue_prob, at a sink with
    probability 1. Mass that would continue past max_len is discarded
    without renormalization; the empty path is never reported.
    """
    if graph.subject not in graph.labels:
        raise NoSubject(f"subject {graph.subject!r} not among nodes")
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    if not 0.0 < continue_prob < 1.0:
        raise ValueError("continue_prob must lie in (0, 1)")

    acc: dict[tuple[str, ...], float] = {}
    stack = [(graph.subject, (), 1.0, 0)]
    while stack:
        node, sequence, prob, steps = stack.pop()
        successors = graph.edges.get(node, ())
        if sequence:
            stop = 1.0 if not successors else 1.0 - continue_prob
            acc[sequence] = acc.get(sequence, 0.0) + prob * stop
        if not successors or steps == max_len:
            continue
        step_prob = prob * continue_prob / len(successors)
        for nxt in successors:
            label = graph.labels[nxt]
            if not label:
                raise NoSubject(f"node {nxt!r} on a path has no label")
            stack.append((nxt, sequence + (label,), step_prob, steps + 1))
    return WalkDistribution(paths=tuple(sorted(acc.items())))


def graph_similarity(
    g1: LabeledTagGraph,
    g2: LabeledTagGraph,
    max_len: int = DEFAULT_MAX_LEN,
    continue_prob: float = DEFAULT_CONTINUE_PROB,
) -> float:
    """Sum of P(s|L1) * P(s'|L2) over pairs with identical label sequences."""
    d1 = enumerate_walks(g1, max_len, continue_prob).as_dict()
    d2 = enumerate_walks(g2, max_len, continue_prob).as_dict()
    return sum(p * d2[seq] for seq, p in d1.items() if seq in d2)


def _connected_to_root(
    context: FormalContext,
    lattice: ConceptLattice,
    facet: str,
    other: str,
) -> bool:
    # The join of two facet concepts has intent = shared tags, so a facet is
    # connected to the root concept exactly when the two share some tag.
    del lattice
    return bool(context.tags_of(facet) & context.tags_of(other))


def topic_relevance(
    context: FormalContext,
    facet: str,
    tag: str,
    lattice: ConceptLattice,
) -> float:
    """Cosine between a tag's connectivity-degree vector and the facet profile.

    The connectivity vector counts, per co-occurring tag, the facets carrying
    both tags that stay connected to the facet's root concept; the facet
    profile counts tag occurrences under the facet. A tag with no
    co-occurrences has relevance 0.
    """
    if facet not in context.facets:
        raise UnknownFacet(f"unknown facet {facet!r}")
    if tag not in context.tags:
        raise UnknownTag(f"unknown tag {tag!r}")

    aggregate = {t: 1.0 for t in context.tags_of(facet)}
    connectivity: dict[str, float] = {}
    for other in context.facets:
        if not context.has(other, tag):
            continue
        if not _connected_to_root(context, lattice, facet, other):
            continue
        for co_tag in context.tags_of(other):
            if co_tag != tag:
                connectivity[co_tag] = connectivity.get(co_tag, 0.0) + 1.0
    try:
        return cosine(connectivity, aggregate)
    except ZeroVector:
        return 0.0


def directory_rank(
    context: FormalContext,
    facet: str,
    lattice: ConceptLattice,
) -> list[DirectoryRankScore]:
    """Order a facet's tags by relevance plus mean similarity to the others."""
    if facet not in context.facets:
        raise UnknownFacet(f"unknown facet {facet!r}")
    tags = sorted(context.tags_of(facet))
    scored = []
    for tag in tags:
        others = [t for t in tags if t != tag]
        similarity = (
            sum(wu_palmer(lattice, tag, other) for other in others) / len(others)
            if others
            else 0.0
        )
        scored.append(
            DirectoryRankScore(tag, topic_relevance(context, facet, tag, lattice) + similarity)
        )
    scored.sort(key=lambda s: (-s.score, s.tag))
    return scored


def update_similarity_degree(old: float, observed: float) -> float:
    """Exponential moving average pulling the stored degree toward observed."""
    if not (0.0 <= old <= 1.0 and 0.0 <= observed <= 1.0):
        raise OutOfRange("degrees must lie in [0, 1]")
    return (1.0 - DEGREE_SMOOTHING) * old + DEGREE_SMOOTHING * observed
