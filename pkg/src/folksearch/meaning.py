"""Joint meaning: speaker frameworks, reader ontology matching, and collapse.

Each speaker's context becomes a concept lattice whose labelled facet
concepts are mapped to projector statements on the shared corpus basis (one
axis per distinct facet:tag:incidence elementary context). Queries are scored
against statements and the reader's taxonomy; when the best candidate
frameworks are mutually incompatible and tie in score, the reader must
collapse the choice to a single one before results exist.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import ranking
from .context import (
    ConceptLattice,
    FormalContext,
    add_triple,
    build_lattice,
    enumerate_concepts,
    normalize_label,
)
from .errors import (
    CycleDetected,
    DimensionMismatch,
    DuplicateLabel,
    EmptyCollection,
    IncompatibleFrameworks,
    MultipleRoots,
    ParseError,
    PendingCollapse,
    UnknownOption,
)
from .projectors import (
    ConceptStatement,
    Framework,
    SpaceBasis,
    frameworks_compatible,
    projector_from_extent,
)

#: Joint-match pairs scoring below this are dropped.
MATCH_THRESHOLD = 0.25
#: Incompatible candidate subsets within this margin trigger a collapse choice.
TIE_MARGIN = 0.05
#: Implicit root of every reader taxonomy.
ONTOLOGY_ROOT = "entity"


def axis_label(facet: str, tag: str, incidence: str) -> str:
    """Elementary-context label naming one basis axis."""
    return f"{facet}:{tag}:{incidence}"


# --------------------------------------------------------------------------
# Reader ontology (small taxonomy tree)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Ontology:
    """Rooted taxonomy tree used as the reader's concept system."""

    parent: Mapping[str, str]  # child -> parent; root absent

    @property
    def root(self) -> str:
        return ONTOLOGY_ROOT

    @property
    def nodes(self) -> list[str]:
        return sorted(set(self.parent) | set(self.parent.values()) | {ONTOLOGY_ROOT})

    def __contains__(self, label: str) -> bool:
        return label == ONTOLOGY_ROOT or label in self.parent

    def depth(self, label: str) -> int:
        d = 1
        while label != ONTOLOGY_ROOT:
            label = self.parent[label]
            d += 1
        return d

    def _chain(self, label: str) -> list[str]:
        chain = [label]
        while label != ONTOLOGY_ROOT:
            label = self.parent[label]
            chain.append(label)
        return chain

    def wu_palmer(self, a: str, b: str) -> float | None:
        """Tree Wu-Palmer; None when either label is not a node."""
        if a not in self or b not in self:
            return None
        ancestors_a = self._chain(a)
        ancestors_b = set(self._chain(b))
        subsumer = next(x for x in ancestors_a if x in ancestors_b)
        return 2.0 * self.depth(subsumer) / (self.depth(a) + self.depth(b))


def load_ontology(source) -> Ontology:
    """Parse "child<TAB>parent" lines into a validated tree.

    The root row is omitted from files; "entity" is always present. Blank
    lines and lines starting with "#" are skipped.
    """
    if hasattr(source, "read"):
        lines = source.read().splitlines()
    elif isinstance(source, (list, tuple)):
        lines = list(source)
    else:
        with open(source, encoding="utf-8") as handle:
            lines = handle.read().splitlines()

    parent: dict[str, str] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ParseError(lineno, f"expected child<TAB>parent, got {raw!r}")
        child, par = normalize_label(parts[0]), normalize_label(parts[1])
        if not child or not par:
            raise ParseError(lineno, "empty label after normalization")
        if child == ONTOLOGY_ROOT:
            raise MultipleRoots("the root may not be declared as a child")
        if child in parent:
            raise DuplicateLabel(f"child {child!r} declared twice")
        if child == par:
            raise CycleDetected(f"{child!r} is its own parent")
        parent[child] = par

    for node in parent:
        current = node
        seen = {current}
        while current != ONTOLOGY_ROOT:
            nxt = parent.get(current)
            if nxt is None:
                raise MultipleRoots(f"{current!r} has no path to {ONTOLOGY_ROOT!r}")
            if nxt in seen:
                raise CycleDetected(f"cycle through {nxt!r}")
            seen.add(nxt)
            current = nxt
    return Ontology(parent=parent)


# --------------------------------------------------------------------------
# Speaker frameworks
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SpeakerLattice:
    """One speaker's context, lattice, and projector framework."""

    speaker_id: str
    context: FormalContext
    lattice: ConceptLattice
    framework: Framework
    statement_concept: Mapping[str, int]  # statement id -> concept index

    def statement_tags(self, statement_id: str) -> frozenset[str]:
        return self.lattice.concepts[self.statement_concept[statement_id]].intent

    def statement_for_facet(self, facet: str) -> ConceptStatement:
        concept = self.lattice.facet_labels[facet]
        for statement in self.framework.elementary:
            if self.statement_concept[statement.id] == concept:
                return statement
        raise KeyError(facet)


@dataclass(frozen=True)
class FrameworkCollection:
    """All speakers' frameworks over one shared corpus basis."""

    members: tuple[SpeakerLattice, ...]

    def __post_init__(self):
        ids = [m.speaker_id for m in self.members]
        if len(set(ids)) != len(ids):
            raise ValueError("speaker ids must be distinct")

    def member(self, speaker_id: str) -> SpeakerLattice:
        for m in self.members:
            if m.speaker_id == speaker_id:
                return m
        raise KeyError(speaker_id)


def corpus_basis(contexts: Iterable[FormalContext]) -> SpaceBasis:
    """Shared basis spanning every elementary context of the corpus."""
    labels = set()
    for context in contexts:
        for triple in context.incidence.values():
            labels.add(axis_label(triple.facet, triple.tag, triple.incidence))
    return SpaceBasis(labels=tuple(sorted(labels)))


def _facet_vector(context: FormalContext, facet: str, index: Mapping[str, int], dim: int) -> np.ndarray:
    vector = np.zeros(dim)
    for (f, t), triple in context.incidence.items():
        if f != facet:
            continue
        label = axis_label(f, t, triple.incidence)
        if label not in index:
            raise DimensionMismatch(f"basis does not cover elementary context {label!r}")
        vector[index[label]] = 1.0
    return vector


def build_speaker_frameworks(
    by_speaker: Mapping[str, Sequence[tuple]],
    basis: SpaceBasis | None = None,
) -> FrameworkCollection:
    """Contexts, lattices and frameworks for every speaker's contributions.

    ``by_speaker`` maps speaker id to (facet, tag, incidence[, timestamp])
    tuples. Statements project onto the span of per-facet occurrence vectors
    over the concept's extent; facet axes are disjoint within one speaker, so
    a speaker's own statements always commute.
    """
    contexts: dict[str, FormalContext] = {}
    for speaker in sorted(by_speaker):
        context = FormalContext.empty()
        for entry in by_speaker[speaker]:
            facet, tag, incidence = entry[0], entry[1], entry[2]
            timestamp = entry[3] if len(entry) > 3 else None
            context = add_triple(context, facet, tag, incidence, timestamp)
        contexts[speaker] = context

    if basis is None:
        basis = corpus_basis(contexts.values())
    index = {label: i for i, label in enumerate(basis.labels)}

    members = []
    for speaker, context in contexts.items():
        lattice = build_lattice(enumerate_concepts(context))
        statements: list[ConceptStatement] = []
        statement_concept: dict[str, int] = {}
        for concept_idx in sorted(set(lattice.facet_labels.values())):
            labelling = sorted(
                f for f, i in lattice.facet_labels.items() if i == concept_idx
            )
            extent = sorted(lattice.concepts[concept_idx].extent)
            vectors = [
                _facet_vector(context, f, index, basis.dimension) for f in extent
            ]
            statement_id = f"{speaker}:{'+'.join(labelling)}"
            provenance = tuple(
                sorted(
                    (t.facet, t.tag, t.incidence)
                    for t in context.incidence.values()
                    if t.facet in lattice.concepts[concept_idx].extent
                )
            )
            statements.append(
                ConceptStatement(
                    id=statement_id,
                    projector=projector_from_extent(basis, weights=vectors),
                    provenance=provenance,
                )
            )
            statement_concept[statement_id] = concept_idx
        framework = Framework.build(basis, statements)
        members.append(
            SpeakerLattice(
                speaker_id=speaker,
                context=context,
                lattice=lattice,
                framework=framework,
                statement_concept=statement_concept,
            )
        )
    return FrameworkCollection(members=tuple(members))


# --------------------------------------------------------------------------
# Joint matching (framework statements x reader ontology)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class JointPair:
    speaker_id: str
    statement_id: str
    concept: str
    score: float


@dataclass(frozen=True)
class JointMatch:
    pairs: tuple[JointPair, ...]

    def score(self, speaker_id: str, statement_id: str, concept: str) -> float:
        for pair in self.pairs:
            if (
                pair.speaker_id == speaker_id
                and pair.statement_id == statement_id
                and pair.concept == concept
            ):
                return pair.score
        return 0.0


def _label_match(tag: str, concept: str, ontology: Ontology) -> float:
    if tag == concept:
        return 1.0
    score = ontology.wu_palmer(tag, concept)
    return score if score is not None else 0.0


def match_joint(
    collection: FrameworkCollection,
    ontology: Ontology,
    threshold: float = MATCH_THRESHOLD,
) -> JointMatch:
    """Score every framework statement against every ontology concept.

    Exact normalized-label matches score 1.0; otherwise the Wu-Palmer
    similarity over the taxonomy tree applies when both labels are nodes.
    Pairs under the threshold are dropped.
    """
    pairs = []
    for member in collection.members:
        for statement in member.framework.elementary:
            tags = sorted(member.statement_tags(statement.id))
            for concept in ontology.nodes:
                score = max(
                    (_label_match(tag, concept, ontology) for tag in tags),
                    default=0.0,
                )
                if score >= threshold:
                    pairs.append(
                        JointPair(member.speaker_id, statement.id, concept, score)
                    )
    pairs.sort(key=lambda p: (p.speaker_id, p.statement_id, p.concept))
    return JointMatch(pairs=tuple(pairs))


def tag_query_score(tag: str, query_tags: Sequence[str], ontology: Ontology) -> float:
    """Best match between one tag and the query: exact else taxonomy distance."""
    return max((_label_match(tag, q, ontology) for q in query_tags), default=0.0)


def _framework_query_score(
    member: SpeakerLattice, query_tags: Sequence[str], ontology: Ontology
) -> float:
    best = 0.0
    for statement in member.framework.elementary:
        for tag in member.statement_tags(statement.id):
            best = max(best, tag_query_score(tag, query_tags, ontology))
    return best


# --------------------------------------------------------------------------
# Compatible-subset selection and collapse
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CollapseOption:
    option_id: str
    speakers: tuple[str, ...]
    distinct_speakers: tuple[str, ...]
    representative_facet: str
    score: float


@dataclass(frozen=True)
class CollapseChoice:
    """Mutually incompatible candidate subsets awaiting the reader."""

    options: tuple[CollapseOption, ...]
    chosen: str | None = None


def _greedy_subset(
    seed: SpeakerLattice,
    ordered: Sequence[SpeakerLattice],
) -> list[SpeakerLattice]:
    subset = [seed]
    frameworks = [seed.framework]
    for member in ordered:
        if member.speaker_id == seed.speaker_id:
            continue
        if frameworks_compatible(frameworks + [member.framework]):
            subset.append(member)
            frameworks.append(member.framework)
    return subset


def _best_facet(member: SpeakerLattice, query_tags) -> str:
    """Facet whose concept best matches the query tags, for option display."""
    best = ("", -1.0)
    for facet in sorted(member.context.facets):
        concept = member.lattice.facet_labels[facet]
        tags = member.lattice.concepts[concept].intent
        score = max((1.0 if t in query_tags else 0.0 for t in tags), default=0.0)
        if score > best[1]:
            best = (facet, score)
    return best[0]


def select_compatible_subset(
    collection: FrameworkCollection,
    joint: JointMatch,
    query_tags: Sequence[str],
    margin: float = TIE_MARGIN,
) -> tuple[tuple[SpeakerLattice, ...], CollapseChoice | None]:
    """Greedy best-first subset of mutually compatible frameworks.

    Frameworks are ordered by their best joint score against the query,
    seeded with the leader, and extended with every later framework that
    stays compatible. When an excluded framework ties with the leader within
    the margin, the mutually incompatible maximal subsets are returned as a
    collapse choice instead of picking silently.
    """
    if not collection.members:
        raise EmptyCollection("no speaker frameworks")

    def query_score(member: SpeakerLattice) -> float:
        # Exact tag hits score 1.0 even when the tag is no ontology node;
        # everything else comes from the joint match restricted to the query.
        best = 0.0
        for statement in member.framework.elementary:
            if set(query_tags) & set(member.statement_tags(statement.id)):
                best = 1.0
        for pair in joint.pairs:
            if pair.speaker_id == member.speaker_id and pair.concept in query_tags:
                best = max(best, pair.score)
        return best

    scores = {m.speaker_id: query_score(m) for m in collection.members}
    ordered = sorted(
        collection.members, key=lambda m: (-scores[m.speaker_id], m.speaker_id)
    )
    main = _greedy_subset(ordered[0], ordered)
    main_ids = {m.speaker_id for m in main}
    top_score = scores[ordered[0].speaker_id]

    rivals = [
        m
        for m in ordered
        if m.speaker_id not in main_ids and scores[m.speaker_id] >= top_score - margin
    ]
    if not rivals:
        return tuple(main), None

    def subset_option(subset: list[SpeakerLattice]) -> CollapseOption:
        speakers = tuple(sorted(m.speaker_id for m in subset))
        score = max(scores[s] for s in speakers)
        return CollapseOption(
            option_id="+".join(speakers),
            speakers=speakers,
            distinct_speakers=(),
            representative_facet="",
            score=score,
        )

    candidate_subsets = [main]
    for rival in rivals:
        subset = _greedy_subset(rival, ordered)
        ids = {m.speaker_id for m in subset}
        if any(ids == {m.speaker_id for m in kept} for kept in candidate_subsets):
            continue
        if all(
            not frameworks_compatible(
                [m.framework for m in subset] + [m.framework for m in kept]
            )
            for kept in candidate_subsets
        ):
            candidate_subsets.append(subset)

    if len(candidate_subsets) == 1:
        return tuple(main), None

    raw_options = [subset_option(s) for s in candidate_subsets]
    shared = set.intersection(*(set(o.speakers) for o in raw_options))
    options = []
    for option, subset in zip(raw_options, candidate_subsets):
        distinct = tuple(s for s in option.speakers if s not in shared)
        pool = distinct if distinct else option.speakers
        pool_members = [collection.member(s) for s in pool]
        best_member = max(
            pool_members, key=lambda m: (scores[m.speaker_id], m.speaker_id)
        )
        representative = _best_facet(best_member, query_tags)
        options.append(
            CollapseOption(
                option_id=option.option_id,
                speakers=option.speakers,
                distinct_speakers=distinct,
                representative_facet=representative,
                score=option.score,
            )
        )
    options.sort(key=lambda o: (-o.score, o.option_id))
    return tuple(main), CollapseChoice(options=tuple(options))


def collapse(choice: CollapseChoice, reader_selection: str) -> CollapseOption:
    """Retain exactly one option; "auto" takes the top score."""
    if reader_selection == "auto":
        return choice.options[0]
    for option in choice.options:
        if option.option_id == reader_selection:
            return option
    raise UnknownOption(f"no collapse option {reader_selection!r}")


# --------------------------------------------------------------------------
# Dialogue state and query resolution
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PendingChoice:
    key: str
    choice: CollapseChoice


@dataclass
class Session:
    """A reader's live dialogue state; history is append-only."""

    session_id: str
    reader_id: str = "reader"
    snapshot_id: str | None = None
    history: list = field(default_factory=list)
    pending: PendingChoice | None = None
    decided: dict = field(default_factory=dict)
    excluded: list = field(default_factory=list)
    degrees: dict = field(default_factory=dict)

    def record(self, entry: dict) -> None:
        self.history.append(entry)

    def decide(self, key: str, option: CollapseOption, choice: CollapseChoice) -> None:
        self.decided[key] = option.option_id
        for other in choice.options:
            if other.option_id != option.option_id:
                self.excluded.append((key, other.option_id))
        self.pending = None


@dataclass(frozen=True)
class RankedItem:
    speaker_id: str
    facet: str
    tag: str
    incidence: str
    joint: float
    rank: float
    score: float
    degree: float


def _choice_key(query_tags: Sequence[str], choice: CollapseChoice) -> str:
    payload = "|".join(sorted(query_tags)) + "||" + "|".join(
        o.option_id for o in choice.options
    )
    return hashlib.sha1(payload.encode("utf-8")).hexdigest()[:16]


def dr_tables_for(collection: FrameworkCollection) -> dict:
    """DirectoryRank score per (speaker, facet, tag)."""
    tables: dict[tuple[str, str], dict[str, float]] = {}
    for member in collection.members:
        for facet in sorted(member.context.facets):
            ranked = ranking.directory_rank(member.context, facet, member.lattice)
            tables[(member.speaker_id, facet)] = {s.tag: s.score for s in ranked}
    return tables


def resolve_query(
    query_tags: Sequence[str],
    collection: FrameworkCollection,
    ontology: Ontology,
    session: Session,
    facet_filter: str | None = None,
    auto_collapse: bool = False,
    dr_tables: dict | None = None,
    threshold: float = MATCH_THRESHOLD,
) -> list[RankedItem]:
    """Joint match, subset selection (pausing for collapse), then ranking.

    Contributions in the chosen subset are ranked by the product of their
    tag's query match and its DirectoryRank score; matched incidences have
    their similarity degree pulled toward the observed match.
    """
    query_tags = [normalize_label(t) for t in query_tags if normalize_label(t)]
    joint = match_joint(collection, ontology)
    subset, choice = select_compatible_subset(collection, joint, query_tags)

    if choice is not None:
        key = _choice_key(query_tags, choice)
        decided_id = session.decided.get(key)
        if decided_id is None:
            if auto_collapse:
                option = collapse(choice, "auto")
                session.decide(key, option, choice)
            else:
                session.pending = PendingChoice(key=key, choice=choice)
                raise PendingCollapse(choice)
        else:
            option = collapse(choice, decided_id)
        subset = tuple(
            m for m in collection.members if m.speaker_id in option.speakers
        )

    if subset and not frameworks_compatible([m.framework for m in subset]):
        raise IncompatibleFrameworks("chosen subset is not mutually compatible")

    if dr_tables is None:
        dr_tables = dr_tables_for(FrameworkCollection(members=tuple(subset)))

    items = []
    for member in subset:
        for (facet, tag) in sorted(member.context.incidence):
            if facet_filter is not None and facet != facet_filter:
                continue
            triple = member.context.incidence[(facet, tag)]
            joint_score = tag_query_score(tag, query_tags, ontology)
            if joint_score < threshold:
                continue
            table = dr_tables.get((member.speaker_id, facet), {})
            dr_score = table.get(tag, 0.0)
            degree_key = (member.speaker_id, facet, tag)
            old = session.degrees.get(degree_key, triple.similarity_degree)
            new = ranking.update_similarity_degree(old, min(1.0, joint_score))
            session.degrees[degree_key] = new
            items.append(
                RankedItem(
                    speaker_id=member.speaker_id,
                    facet=facet,
                    tag=tag,
                    incidence=triple.incidence,
                    joint=joint_score,
                    rank=dr_score,
                    score=joint_score * dr_score,
                    degree=new,
                )
            )
    items.sort(key=lambda r: (-r.score, r.speaker_id, r.facet, r.tag))
    return items
