from __future__ import annotations

import random

import pytest

from birkfaces.canon import canonical_bipartite_graph, canonical_matrix
from birkfaces.graphs import FaceGraph, LayeredNode, UPPER, resolution
from birkfaces.reduction import minimal_nodes, reduce_at
from birkfaces.types import (
    Catalog,
    TypeFingerprint,
    VertexFacetIncidence,
    canonicalize,
    catalog_insert,
    cube_fingerprint,
    cube_graph,
    fingerprint,
    segment_graph,
    triangle_graph,
    type_key,
    vertex_facet_incidence,
)
from conftest import (
    K33,
    SEGMENT,
    SIMPLEX4_A,
    SIMPLEX4_B,
    SQUARE_PYRAMID,
    TRIANGLE,
    TWOREP_A,
    TWOREP_B,
    SMALL_ELEMENTARY,
)
from oracles import lattices_isomorphic


def relabeled(g: FaceGraph, seed: int) -> FaceGraph:
    rnd = random.Random(seed)
    pu = list(range(g.n))
    pv = list(range(g.n))
    rnd.shuffle(pu)
    rnd.shuffle(pv)
    rows = [0] * g.n
    for u, v in g.edges():
        rows[pu[u]] |= 1 << pv[v]
    return FaceGraph(g.n, tuple(rows))


def test_incidence_shapes():
    inc = vertex_facet_incidence(SEGMENT)
    assert (inc.v, inc.f) == (2, 2)
    assert sorted(inc.rows) == [1, 2]  # each vertex on exactly one facet
    inc = vertex_facet_incidence(TRIANGLE)
    assert (inc.v, inc.f) == (3, 3)
    assert all(bin(r).count("1") == 2 for r in inc.rows)
    inc = vertex_facet_incidence(SQUARE_PYRAMID)
    assert (inc.v, inc.f) == (5, 5)
    assert sorted(bin(r).count("1") for r in inc.rows) == [3, 3, 3, 3, 4]


def test_incidence_invariants_reject_bad_input():
    with pytest.raises(ValueError):
        VertexFacetIncidence(2, 1, (1, 1))  # duplicate rows
    with pytest.raises(ValueError):
        VertexFacetIncidence(2, 2, (3, 1))  # vertex on all facets
    with pytest.raises(ValueError):
        VertexFacetIncidence(2, 2, (1, 1))  # empty facet column


def test_canonicalize_invariance_under_shuffles():
    rnd = random.Random(7)
    for g in (TRIANGLE, SQUARE_PYRAMID, K33, SIMPLEX4_A):
        inc = vertex_facet_incidence(g)
        base = canonicalize(inc)
        for _ in range(5):
            perm_v = list(range(inc.v))
            perm_f = list(range(inc.f))
            rnd.shuffle(perm_v)
            rnd.shuffle(perm_f)
            rows = [0] * inc.v
            for i, r in enumerate(inc.rows):
                for j in range(inc.f):
                    if r >> j & 1:
                        rows[perm_v[i]] |= 1 << perm_f[j]
            assert canonical_matrix(rows, inc.v, inc.f) == base


def test_canonicalize_distinguishes():
    assert canonicalize(vertex_facet_incidence(TRIANGLE)) != canonicalize(
        vertex_facet_incidence(SEGMENT)
    )
    assert canonicalize(vertex_facet_incidence(TRIANGLE)) != canonicalize(
        vertex_facet_incidence(cube_graph(2))
    )


def test_same_type_across_representations():
    assert type_key(SIMPLEX4_A) == type_key(SIMPLEX4_B)
    assert type_key(TWOREP_A) == type_key(TWOREP_B)


def test_fingerprint_invariance_under_relabeling_and_transpose():
    for g in SMALL_ELEMENTARY:
        key = type_key(g)
        assert type_key(g.transpose()) == key
        for s in range(4):
            assert type_key(relabeled(g, s)) == key


def test_fingerprint_invariant_under_reduction_round_trip():
    for g in (SQUARE_PYRAMID, TRIANGLE, TWOREP_A):
        key = type_key(g)
        for v in minimal_nodes(g):
            assert type_key(resolution(reduce_at(g, v))) == key


def test_fingerprint_invariant_under_edge_to_path():
    # replacing an edge by a path of length 3 keeps the type
    def subdivide(g: FaceGraph, edge) -> FaceGraph:
        u, v = edge
        rows = [r for r in g.rows] + [0]
        rows[u] &= ~(1 << v)
        rows[u] |= 1 << g.n
        rows[g.n] |= (1 << g.n) | (1 << v)
        return FaceGraph(g.n + 1, tuple(rows))

    for g in (SEGMENT, TRIANGLE, SQUARE_PYRAMID, K33):
        key = type_key(g)
        for e in g.edges():
            assert type_key(subdivide(g, e)) == key


def test_reduction_lemma_edge_swap_preserves_type():
    # for a minimal node v with neighbors w1, w2 and x adjacent to w1 but
    # not w2, moving the edge (x, w1) to (x, w2) preserves the type
    checked = 0
    for g in (SQUARE_PYRAMID, TWOREP_A, SIMPLEX4_A):
        key = type_key(g)
        for v in minimal_nodes(g):
            if v.layer != UPPER:
                continue
            mask = g.rows[v.index]
            w1 = (mask & -mask).bit_length() - 1
            w2 = (mask & (mask - 1)).bit_length() - 1
            for w_from, w_to in ((w1, w2), (w2, w1)):
                for x in range(g.n):
                    if x == v.index:
                        continue
                    if g.has_edge(x, w_from) and not g.has_edge(x, w_to):
                        rows = list(g.rows)
                        rows[x] = rows[x] & ~(1 << w_from) | (1 << w_to)
                        moved = FaceGraph(g.n, tuple(rows))
                        assert type_key(moved) == key
                        checked += 1
    assert checked > 0


def test_point_and_segment_fingerprints():
    point = FaceGraph.from_edges(1, [(0, 0)])
    fp = fingerprint(point)
    assert fp.dim == 0 and fp.canon == b"POINT"
    fp = fingerprint(SEGMENT)
    assert fp.dim == 1 and fp.canon.startswith(b"C:")
    assert fp.fvec == (2,)


def test_product_fingerprint_factors():
    from birkfaces.constructions import product

    square1 = product(SEGMENT, SEGMENT)
    assert type_key(square1) == cube_fingerprint(2)
    # square with a trivial single-edge component is still the square
    pad = FaceGraph.from_edges(
        5,
        square1.edges() + [(4, 4)],
    )
    assert type_key(pad) == cube_fingerprint(2)


def test_exactness_fingerprint_vs_lattice_isomorphism(catalog6):
    # equal fingerprints coincide with explicit lattice isomorphism on the
    # d <= 4 catalog (positive cases plus all same-f-vector pairs)
    cat, _ = catalog6
    entries = [e for e in cat.sorted_entries() if 1 <= e.dim <= 4]
    assert lattices_isomorphic(SIMPLEX4_A, SIMPLEX4_B)
    assert lattices_isomorphic(TWOREP_A, TWOREP_B)
    assert not lattices_isomorphic(TRIANGLE, SEGMENT)
    by_dim: dict[int, list] = {}
    for e in entries:
        by_dim.setdefault(e.dim, []).append(e)
    pairs = 0
    for d, ents in by_dim.items():
        for i, a in enumerate(ents):
            for b in ents[i + 1 :]:
                if a.fvec != b.fvec or a.rep.m + b.rep.m > 30:
                    continue
                pairs += 1
                assert not lattices_isomorphic(a.rep, b.rep), (
                    f"distinct fingerprints but isomorphic lattices at d={d}"
                )
    assert pairs >= 1


def test_graph_canonical_form_layer_swap():
    for g in SMALL_ELEMENTARY:
        a = canonical_bipartite_graph(g.n, g.rows)
        b = canonical_bipartite_graph(g.n, g.transpose().rows)
        assert a == b
        for s in range(3):
            r = relabeled(g, s)
            assert canonical_bipartite_graph(r.n, r.rows) == a


def test_catalog_insert_and_merge():
    cat = Catalog()
    catalog_insert(cat, SIMPLEX4_A, 4)
    catalog_insert(cat, SIMPLEX4_B, 5)
    assert len(cat) == 1
    entry = cat.sorted_entries()[0]
    assert entry.bdim == 4
    assert entry.rep.n == 4

    # merge order does not matter
    c1, c2 = Catalog(), Catalog()
    catalog_insert(c1, TWOREP_A, 4)
    catalog_insert(c2, TWOREP_B, 3)
    catalog_insert(c2, TRIANGLE, 3)
    a = Catalog()
    a.merge(c1)
    a.merge(c2)
    b = Catalog()
    b.merge(c2)
    b.merge(c1)
    assert a.to_jsonl() == b.to_jsonl()
    entry = a.sorted_entries()[0]
    assert {e.bdim for e in a.sorted_entries()} == {3}


def test_catalog_jsonl_round_trip():
    cat = Catalog()
    for g, n in ((TRIANGLE, 3), (K33, 3), (SQUARE_PYRAMID, 4)):
        e = catalog_insert(cat, g, n)
    text = cat.to_jsonl()
    back = Catalog.from_jsonl(text)
    assert back.to_jsonl() == text


def test_fingerprint_digest_stable():
    fp = fingerprint(TRIANGLE, with_fvec=False)
    assert fp.digest() == TypeFingerprint(fp.dim, fp.canon).digest()
