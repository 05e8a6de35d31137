"""Faceted folksonomy search with concept lattices and projector frameworks."""

from .context import (
    ConceptLattice,
    FormalConcept,
    FormalContext,
    Triple,
    add_triple,
    build_lattice,
    derive_facets,
    derive_tags,
    enumerate_concepts,
    incidence_matrix,
    lattice_of,
    leq,
    normalize_label,
)
from .meaning import (
    CollapseChoice,
    CollapseOption,
    FrameworkCollection,
    JointMatch,
    Ontology,
    Session,
    SpeakerLattice,
    build_speaker_frameworks,
    collapse,
    load_ontology,
    match_joint,
    resolve_query,
    select_compatible_subset,
)
from .projectors import (
    BooleanAlgebra,
    ConceptStatement,
    Description,
    Framework,
    Projector,
    SpaceBasis,
    assumption_product,
    check_reasoning_chain,
    commutes,
    conjoin,
    frameworks_compatible,
    generate_boolean_algebra,
    join,
    master_description,
    meet,
    negate,
    projector_from_extent,
    smallest_common_framework,
    valid_conclusion,
)
from .ranking import (
    DirectoryRankScore,
    LabeledTagGraph,
    WalkDistribution,
    cosine,
    depth,
    directory_rank,
    enumerate_walks,
    graph_similarity,
    lcs,
    topic_relevance,
    update_similarity_degree,
    wu_palmer,
)
from .service import (
    Contribution,
    EvalStats,
    QueryLogEntry,
    SearchService,
    Snapshot,
    precision,
    recall,
    stats,
    tokenize,
)

__version__ = "0.1.0"

__all__ = [
    "ConceptLattice",
    "FormalConcept",
    "FormalContext",
    "Triple",
    "add_triple",
    "build_lattice",
    "derive_facets",
    "derive_tags",
    "enumerate_concepts",
    "incidence_matrix",
    "lattice_of",
    "leq",
    "normalize_label",
    "CollapseChoice",
    "CollapseOption",
    "FrameworkCollection",
    "JointMatch",
    "Ontology",
    "Session",
    "SpeakerLattice",
    "build_speaker_frameworks",
    "collapse",
    "load_ontology",
    "match_joint",
    "resolve_query",
    "select_compatible_subset",
    "BooleanAlgebra",
    "ConceptStatement",
    "Description",
    "Framework",
    "Projector",
    "SpaceBasis",
    "assumption_product",
    "check_reasoning_chain",
    "commutes",
    "conjoin",
    "frameworks_compatible",
    "generate_boolean_algebra",
    "join",
    "master_description",
    "meet",
    "negate",
    "projector_from_extent",
    "smallest_common_framework",
    "valid_conclusion",
    "DirectoryRankScore",
    "LabeledTagGraph",
    "WalkDistribution",
    "cosine",
    "depth",
    "directory_rank",
    "enumerate_walks",
    "graph_similarity",
    "lcs",
    "topic_relevance",
    "update_similarity_degree",
    "wu_palmer",
    "Contribution",
    "EvalStats",
    "QueryLogEntry",
    "SearchService",
    "Snapshot",
    "precision",
    "recall",
    "stats",
    "tokenize",
]
