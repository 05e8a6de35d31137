"""Formal context construction, concept enumeration, and lattice building."""

import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from folksearch.context import (
    FormalConcept,
    FormalContext,
    add_triple,
    build_lattice,
    closure,
    derive_facets,
    derive_tags,
    enumerate_concepts,
    incidence_matrix,
    lattice_of,
    leq,
)
from folksearch.errors import EmptyLabel, NotALattice, UnknownFacet, UnknownTag

from .oracles import brute_force_concepts, random_context, reduction_oracle


@pytest.fixture
def small_context():
    # f1: {t1, t2}, f2: {t1}
    return FormalContext.from_triples(
        [("f1", "t1", "x"), ("f1", "t2", "x"), ("f2", "t1", "x")]
    )


# --- triples and normalization ---------------------------------------------

def test_add_triple_basic():
    context = add_triple(FormalContext.empty(), "Taiwan", "Hot", "Tropical")
    assert context.facets == {"taiwan"}
    assert context.tags == {"hot"}
    triple = context.incidence[("taiwan", "hot")]
    assert triple.incidence == "tropical"
    assert triple.similarity_degree == 0.5


def test_add_triple_idempotent():
    c1 = add_triple(FormalContext.empty(), "Taiwan", "Hot", "Tropical")
    c2 = add_triple(c1, "Taiwan", "Hot", "Tropical")
    assert c1.incidence == c2.incidence
    assert len(c2) == 1


def test_add_triple_normalizes_whitespace_and_case():
    c1 = add_triple(FormalContext.empty(), "Taiwan", "Hot", "Tropical")
    c2 = add_triple(FormalContext.empty(), "  Taiwan ", "HOT", "Tropical")
    assert c1.facets == c2.facets
    assert c1.tags == c2.tags
    assert c1.incidence.keys() == c2.incidence.keys()


def test_add_triple_updates_incidence_keeps_degree():
    c = add_triple(FormalContext.empty(), "f", "t", "first")
    from folksearch.context import set_degree

    c = set_degree(c, "f", "t", 0.9)
    c = add_triple(c, "f", "t", "second")
    triple = c.incidence[("f", "t")]
    assert triple.incidence == "second"
    assert triple.similarity_degree == 0.9


def test_empty_label_rejected():
    with pytest.raises(EmptyLabel):
        add_triple(FormalContext.empty(), "   ", "t", "i")


# --- derivations ------------------------------------------------------------

def test_derive_tags(small_context):
    assert derive_tags(small_context, {"f1"}) == {"t1", "t2"}
    assert derive_tags(small_context, {"f1", "f2"}) == {"t1"}
    assert derive_tags(small_context, set()) == {"t1", "t2"}


def test_derive_facets(small_context):
    assert derive_facets(small_context, {"t1"}) == {"f1", "f2"}
    assert derive_facets(small_context, {"t1", "t2"}) == {"f1"}
    assert derive_facets(small_context, set()) == {"f1", "f2"}


def test_derive_unknown_raises(small_context):
    with pytest.raises(UnknownFacet):
        derive_tags(small_context, {"nope"})
    with pytest.raises(UnknownTag):
        derive_facets(small_context, {"nope"})


# --- concept enumeration -----------------------------------------------------

def test_enumerate_concepts_example(small_context):
    concepts = set(enumerate_concepts(small_context))
    assert concepts == {
        FormalConcept(frozenset({"f1", "f2"}), frozenset({"t1"})),
        FormalConcept(frozenset({"f1"}), frozenset({"t1", "t2"})),
    }


def test_enumerate_concepts_empty_context():
    assert enumerate_concepts(FormalContext.empty()) == [
        FormalConcept(frozenset(), frozenset())
    ]


def test_enumerate_concepts_full_incidence():
    context = FormalContext.from_triples(
        [(f, t, "x") for f in ("f1", "f2") for t in ("t1", "t2")]
    )
    assert enumerate_concepts(context) == [
        FormalConcept(frozenset({"f1", "f2"}), frozenset({"t1", "t2"}))
    ]


def test_enumerate_matches_oracle_on_random_contexts():
    rng = random.Random(20260301)
    for _ in range(40):
        context = random_context(rng, 6, 6)
        assert set(enumerate_concepts(context)) == brute_force_concepts(context)


def test_enumeration_is_deterministic():
    rng = random.Random(7)
    context = random_context(rng, 6, 6)
    assert enumerate_concepts(context) == enumerate_concepts(context)


# --- order -------------------------------------------------------------------

def test_leq_examples():
    sub = FormalConcept(frozenset({"f1"}), frozenset({"t1", "t2"}))
    sup = FormalConcept(frozenset({"f1", "f2"}), frozenset({"t1"}))
    assert leq(sub, sup)
    assert not leq(sup, sub)
    assert leq(sub, sub)


def test_leq_incomparable():
    a = FormalConcept(frozenset({"f1"}), frozenset({"t1", "t2"}))
    b = FormalConcept(frozenset({"f2"}), frozenset({"t1", "t3"}))
    assert not leq(a, b)
    assert not leq(b, a)


def test_extent_and_intent_inclusion_agree():
    rng = random.Random(99)
    for _ in range(20):
        concepts = enumerate_concepts(random_context(rng, 5, 5))
        for c1 in concepts:
            for c2 in concepts:
                assert (c1.extent <= c2.extent) == (c2.intent <= c1.intent)


# --- lattices ----------------------------------------------------------------

def test_build_lattice_two_chain(small_context):
    lattice = lattice_of(small_context)
    assert len(lattice) == 2
    assert len(lattice.cover_edges) == 1
    top = lattice.concepts[lattice.top]
    bottom = lattice.concepts[lattice.bottom]
    assert top.extent == {"f1", "f2"} and top.intent == {"t1"}
    assert bottom.extent == {"f1"} and bottom.intent == {"t1", "t2"}
    assert lattice.tag_labels["t1"] == lattice.top
    assert lattice.tag_labels["t2"] == lattice.bottom
    assert lattice.facet_labels["f2"] == lattice.top
    assert lattice.facet_labels["f1"] == lattice.bottom


def test_build_lattice_single_concept():
    context = FormalContext.from_triples([("f", "t", "x")])
    lattice = lattice_of(context)
    assert len(lattice) == 1
    assert lattice.top == lattice.bottom
    assert lattice.cover_edges == ()


def test_build_lattice_diamond():
    context = FormalContext.from_triples([("f1", "t1", "x"), ("f2", "t2", "x")])
    lattice = lattice_of(context)
    assert len(lattice) == 4
    assert len(lattice.cover_edges) == 4
    assert lattice.top != lattice.bottom


def test_build_lattice_rejects_incomplete_set():
    context = FormalContext.from_triples([("f1", "t1", "x"), ("f2", "t2", "x")])
    concepts = enumerate_concepts(context)
    broken = [c for c in concepts if c.extent not in (frozenset(),)]
    with pytest.raises(NotALattice):
        build_lattice(broken)


def test_lattice_laws_on_random_contexts():
    rng = random.Random(4242)
    for _ in range(25):
        context = random_context(rng, 5, 5)
        concepts = enumerate_concepts(context)
        lattice = build_lattice(concepts)
        n = len(concepts)
        below = {
            (i, j)
            for i in range(n)
            for j in range(n)
            if i != j and concepts[i].extent < concepts[j].extent
        }
        # partial order sanity on the strict part
        for (i, j) in below:
            assert (j, i) not in below
        for (i, j) in below:
            for k in range(n):
                if (j, k) in below:
                    assert (i, k) in below
        assert set(lattice.cover_edges) == reduction_oracle(below, n)
        assert all((i, lattice.top) in below or i == lattice.top for i in range(n))
        assert all((lattice.bottom, i) in below or i == lattice.bottom for i in range(n))
        label_count = len(lattice.facet_labels) + len(lattice.tag_labels)
        assert label_count == len(context.facets) + len(context.tags)


def test_reduced_labels_are_object_and_attribute_concepts(small_context):
    lattice = lattice_of(small_context)
    for facet, idx in lattice.facet_labels.items():
        extents = [c for c in lattice.concepts if facet in c.extent]
        assert min(len(c.extent) for c in extents) == len(lattice.concepts[idx].extent)
    for tag, idx in lattice.tag_labels.items():
        holders = [c for c in lattice.concepts if tag in c.intent]
        assert max(len(c.extent) for c in holders) == len(lattice.concepts[idx].extent)


# --- closure properties (hypothesis) ----------------------------------------

adjacency = st.lists(
    st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=0, max_size=18
)


def _context_from_pairs(pairs):
    context = FormalContext.empty()
    for f, t in pairs:
        context = add_triple(context, f"f{f}", f"t{t}", "x")
    return context


@given(adjacency, st.sets(st.integers(0, 4), max_size=5))
@settings(max_examples=60, deadline=None)
def test_closure_is_extensive_and_idempotent(pairs, tag_ids):
    context = _context_from_pairs(pairs)
    tags = {f"t{i}" for i in tag_ids} & set(context.tags)
    once = closure(context, tags)
    assert tags <= once
    assert closure(context, once) == once


@given(adjacency, st.sets(st.integers(0, 4), max_size=5), st.sets(st.integers(0, 4), max_size=5))
@settings(max_examples=60, deadline=None)
def test_galois_antitone(pairs, a_ids, b_ids):
    context = _context_from_pairs(pairs)
    smaller = {f"f{i}" for i in a_ids} & set(context.facets)
    larger = smaller | ({f"f{i}" for i in b_ids} & set(context.facets))
    assert derive_tags(context, larger) <= derive_tags(context, smaller)


@given(adjacency, st.sets(st.integers(0, 4), max_size=5))
@settings(max_examples=60, deadline=None)
def test_roundtrip_contains_input(pairs, facet_ids):
    context = _context_from_pairs(pairs)
    facets = {f"f{i}" for i in facet_ids} & set(context.facets)
    assert facets <= derive_facets(context, derive_tags(context, facets))


# --- incidence matrix --------------------------------------------------------

def test_incidence_matrix_example(small_context):
    matrix = incidence_matrix(small_context)
    assert matrix.tolist() == [[1, 1], [1, 0]]


def test_incidence_matrix_empty():
    assert incidence_matrix(FormalContext.empty()).shape == (0, 0)


def test_incidence_matrix_full():
    context = FormalContext.from_triples(
        [(f, t, "x") for f in ("a", "b") for t in ("u", "v", "w")]
    )
    assert np.all(incidence_matrix(context) == 1)
