"""Rank a facet's tags: Wu-Palmer distance, cosine, walks, DirectoryRank.

DirectoryRank orders the tags of one facet by topic relevance (a cosine over
co-occurrence counts) plus the mean Wu-Palmer similarity to the facet's other
tags, both computed on the speaker's own concept lattice.
"""

from folksearch import (
    FormalContext,
    LabeledTagGraph,
    cosine,
    depth,
    directory_rank,
    enumerate_walks,
    graph_similarity,
    lattice_of,
    update_similarity_degree,
    wu_palmer,
)

context = FormalContext.from_triples(
    [
        ("style", "clothes", "tux"),
        ("style", "tshirt", "tux"),
        ("style", "trend", "tux"),
        ("tech", "tshirt", "tux"),
    ]
)
lattice = lattice_of(context)

print("lattice depths:")
for node in range(len(lattice.concepts)):
    print(f"  node {node}: depth {depth(lattice, node)}  intent={sorted(lattice.concepts[node].intent)}")
print()

print("Wu-Palmer similarities between the facet's tags:")
for t1, t2 in [("clothes", "tshirt"), ("clothes", "trend"), ("tshirt", "trend")]:
    print(f"  {t1} ~ {t2}: {wu_palmer(lattice, t1, t2):.4f}")
print()

print("cosine over tag vectors:")
print("  (1,0) vs (1,1):", cosine({"a": 1.0}, {"a": 1.0, "b": 1.0}))
print()

# Random-walk similarity over labelled tag graphs: paths are label sequences,
# each step keeps probability continue_prob / outdegree.
g = LabeledTagGraph(
    labels={"s": None, "casual": "casual", "formal": "formal", "office": "office"},
    edges={"s": ("casual", "formal"), "formal": ("office",)},
    subject="s",
)
dist = enumerate_walks(g, max_len=4, continue_prob=0.8)
print("walk distribution from the subject:")
for sequence, prob in dist.paths:
    print(f"  {' -> '.join(sequence):24s} {prob:.4f}")
print(f"  total mass {dist.total_mass:.4f}")
print("self similarity:", graph_similarity(g, g, 4, 0.8))
print()

print("DirectoryRank for facet 'style':")
for entry in directory_rank(context, "style", lattice):
    print(f"  {entry.tag:10s} {entry.score:.4f}")
print()

degree = 0.5
print("similarity degree drifting toward a repeated observation of 1.0:")
for step in range(4):
    degree = update_similarity_degree(degree, 1.0)
    print(f"  after update {step + 1}: {degree:.4f}")
