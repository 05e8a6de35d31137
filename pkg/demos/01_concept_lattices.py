"""Build a formal context from tagged contributions and inspect its lattice.

A speaker's contributions are (facet, tag, incidence) triples; facets act as
objects and tags as attributes. The concept lattice orders every closed
(extent, intent) pair and reduced labelling places each facet and tag on
exactly one node.
"""

from folksearch import (
    FormalContext,
    add_triple,
    derive_facets,
    derive_tags,
    enumerate_concepts,
    incidence_matrix,
    lattice_of,
)

# Three facets describing trips, tagged by one speaker.
context = FormalContext.empty()
for facet, tag, incidence in [
    ("Taiwan", "Hot", "Tropical"),
    ("Taiwan", "Beach", "Kenting"),
    ("Italy", "Beach", "Adriatic"),
    ("Italy", "Art", "Renaissance"),
    ("Norway", "Cold", "Fjord"),
]:
    context = add_triple(context, facet, tag, incidence)

print("facets:", sorted(context.facets))
print("tags:  ", sorted(context.tags))
print()

print("incidence matrix (rows = facets, columns = tags, both sorted):")
print(incidence_matrix(context))
print()

print("derivations:")
print("  tags shared by {taiwan}:        ", sorted(derive_tags(context, {"taiwan"})))
print("  tags shared by {taiwan, italy}: ", sorted(derive_tags(context, {"taiwan", "italy"})))
print("  facets carrying {beach}:        ", sorted(derive_facets(context, {"beach"})))
print()

concepts = enumerate_concepts(context)
print(f"{len(concepts)} formal concepts (lectic order):")
for concept in concepts:
    print(f"  extent={sorted(concept.extent)}  intent={sorted(concept.intent)}")
print()

lattice = lattice_of(context)
print("cover edges (lower -> upper):", list(lattice.cover_edges))
print("top:", sorted(lattice.concepts[lattice.top].extent))
print("bottom:", sorted(lattice.concepts[lattice.bottom].intent))
print()

print("reduced labelling (each facet/tag appears exactly once):")
for facet, node in sorted(lattice.facet_labels.items()):
    print(f"  facet {facet!r} labels node {node}")
for tag, node in sorted(lattice.tag_labels.items()):
    print(f"  tag   {tag!r} labels node {node}")
