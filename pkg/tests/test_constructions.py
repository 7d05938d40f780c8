from __future__ import annotations

import itertools

import pytest

from birkfaces.constructions import (
    InvalidPyramidalError,
    PyramidalSet,
    abstract_wedge_incidence,
    apply_recipe,
    circular_connection,
    find_pyramidal_sets,
    first_pyramidal_set,
    joined_product,
    product,
    product_all,
    pyramid,
    reduced_joined_product,
    wedge_over_complement,
    wedge_over_facet,
)
from birkfaces.faces import f_vector, facet_defining_sets, facets, is_pyramid
from birkfaces.graphs import (
    FaceGraph,
    dimension,
    enumerate_perfect_matchings,
    is_elementary,
    matching_mask,
)
from birkfaces.types import (
    canonicalize,
    cube_graph,
    segment_graph,
    triangle_graph,
    type_key,
    vertex_facet_incidence,
)
from conftest import (
    CORWEDGE_C,
    CORWEDGE_COMPLEMENT_OUT,
    CORWEDGE_FACET_OUT,
    CORWEDGE_IN,
    D4_PYR_CUBE,
    K33,
    PYR_CUBE3,
    PYR_CUBE_12,
    SEGMENT,
    SQUARE_PYRAMID,
    TRIANGLE,
)


def pm_count(g):
    return len(enumerate_perfect_matchings(g))


def test_product_contracts():
    sq = product(SEGMENT, SEGMENT)
    assert dimension(sq) == 2 and pm_count(sq) == 4
    prism = product(TRIANGLE, SEGMENT)
    assert dimension(prism) == 3
    assert f_vector(prism) == (6, 9, 5)
    for g1, g2 in [(TRIANGLE, SEGMENT), (K33, SEGMENT), (TRIANGLE, TRIANGLE)]:
        p = product(g1, g2)
        assert dimension(p) == dimension(g1) + dimension(g2)
        assert pm_count(p) == pm_count(g1) * pm_count(g2)
        assert is_elementary(p)


def test_circular_connection_shapes():
    parts = [SEGMENT, SEGMENT, SEGMENT]
    choices = [(0, 0), (0, 0), (0, 0)]
    g = circular_connection(parts, choices)
    assert g.n == 6
    assert g.m == 12 + 3
    # k=1 degenerate: adds a single edge
    one = circular_connection([PYR_CUBE3], [(0, 3)])
    assert one.m == PYR_CUBE3.m + 1


def test_circular_connection_of_six_squares_is_the_2dm2_graph():
    # six squares wired circularly give the only connected irreducible
    # face graph on 2d-2 nodes for d=7
    parts = [SEGMENT] * 6
    choices = [(1, 0)] * 6
    g = circular_connection(parts, choices)
    assert is_elementary(g)
    assert dimension(g) == 7
    assert type_key(g) == type_key(PYR_CUBE_12)


def test_find_pyramidal_sets():
    assert len(find_pyramidal_sets(SEGMENT)) == 4
    assert find_pyramidal_sets(K33) == []
    tri_sets = find_pyramidal_sets(TRIANGLE)
    assert tri_sets
    for s in tri_sets:
        assert len(s.pairs) == 1
    sq = product(SEGMENT, SEGMENT)
    assert len(find_pyramidal_sets(sq)) == 16


def test_pyramid_contracts():
    for base in (SEGMENT, product(SEGMENT, SEGMENT), TRIANGLE, cube_graph(3)):
        d = dimension(base)
        v = pm_count(base)
        for s in find_pyramidal_sets(base)[:4]:
            p = pyramid(base, s)
            assert is_elementary(p)
            assert dimension(p) == d + 1
            assert pm_count(p) == v + 1
            assert is_pyramid(p) is not None
            # all pyramidal choices give the same combinatorial type
            assert type_key(p) == type_key(pyramid(base, find_pyramidal_sets(base)[0]))


def test_pyramid_examples():
    assert type_key(pyramid(SEGMENT, first_pyramidal_set(SEGMENT))) == type_key(
        TRIANGLE
    )
    sq = product(SEGMENT, SEGMENT)
    p = pyramid(sq, first_pyramidal_set(sq))
    assert f_vector(p) == (5, 8, 5)
    c3 = cube_graph(3)
    p = pyramid(c3, first_pyramidal_set(c3))
    assert pm_count(p) == 9
    assert type_key(p) == type_key(PYR_CUBE3)


def test_pyramid_rejects_bad_choice():
    sq = product(SEGMENT, SEGMENT)
    with pytest.raises(InvalidPyramidalError):
        pyramid(sq, PyramidalSet(sq, ((0, 0),)))  # one pair for two components
    with pytest.raises(InvalidPyramidalError):
        pyramid(K33, PyramidalSet(K33, ((0, 0),)))


def test_pyramid_from_edge_in_unique_matching():
    # an edge contained in a unique matching gives a pyramidal pair, and the
    # pyramid over the face is again a face
    pms = enumerate_perfect_matchings(PYR_CUBE3)
    counts: dict[tuple[int, int], int] = {}
    for pm in pms:
        for e in enumerate(pm):
            counts[e] = counts.get(e, 0) + 1
    unique_edges = [e for e, c in counts.items() if c == 1]
    assert unique_edges
    u, v = unique_edges[0]
    p = pyramid(PYR_CUBE3, PyramidalSet(PYR_CUBE3, ((u, v),)))
    assert dimension(p) == dimension(PYR_CUBE3) + 1
    assert pm_count(p) == pm_count(PYR_CUBE3) + 1


def test_wedge_over_facet_examples():
    # wedge of the 4-cycle over a vertex gives a triangle
    c = facet_defining_sets(SEGMENT)[0]
    w = wedge_over_facet(SEGMENT, c)
    assert type_key(w) == type_key(TRIANGLE)
    # the paper's pictured wedge outputs
    cs = [c for c in facet_defining_sets(CORWEDGE_IN) if c.removed == CORWEDGE_C]
    assert cs
    w = wedge_over_facet(CORWEDGE_IN, cs[0], edge=(2, 1))
    assert type_key(w) == type_key(CORWEDGE_FACET_OUT)
    w = wedge_over_complement(CORWEDGE_IN, cs[0], edge=(2, 1))
    assert type_key(w) == type_key(CORWEDGE_COMPLEMENT_OUT)


def test_wedge_of_triangle_over_edge():
    c = facet_defining_sets(TRIANGLE)[0]
    w = wedge_over_facet(TRIANGLE, c)
    assert dimension(w) == 3
    assert f_vector(w)[0] == 4  # the 3-simplex


def test_wedge_over_complement_of_vertex():
    c = facet_defining_sets(SEGMENT)[0]
    w = wedge_over_complement(SEGMENT, c)
    assert type_key(w) == type_key(TRIANGLE)


def _vertex_set_of_face(g, fmask):
    masks = [matching_mask(pm, g.n) for pm in enumerate_perfect_matchings(g)]
    out = 0
    for i, m in enumerate(masks):
        if m & ~fmask == 0:
            out |= 1 << i
    return out


def test_wedges_match_abstract_wedge_oracle():
    # both wedge constructions agree with the lattice-level wedge built
    # directly from the vertex-facet incidence
    for g in (SEGMENT, TRIANGLE, SQUARE_PYRAMID, K33):
        inc = vertex_facet_incidence(g)
        fs = facets(g)
        sets = facet_defining_sets(g)
        full = (1 << inc.v) - 1
        for c, f in zip(sets, fs):
            facet_vs = _vertex_set_of_face(g, f.mask)
            for e in sorted(c.removed):
                w = wedge_over_facet(g, c, edge=e)
                assert dimension(w) == dimension(g) + 1
                winc = abstract_wedge_incidence(inc, facet_vs)
                assert canonicalize(winc) == canonicalize(
                    vertex_facet_incidence(w)
                )
                # vertices on the facet are not duplicated
                assert len(enumerate_perfect_matchings(w)) == 2 * inc.v - bin(
                    facet_vs
                ).count("1")

                wc = wedge_over_complement(g, c, edge=e)
                assert dimension(wc) == dimension(g) + 1
                comp_vs = full & ~facet_vs
                winc = abstract_wedge_incidence(inc, comp_vs)
                assert canonicalize(winc) == canonicalize(
                    vertex_facet_incidence(wc)
                )


def test_wedges_exist_for_every_facet_of_small_types():
    for g in (TRIANGLE, SQUARE_PYRAMID, K33, D4_PYR_CUBE):
        for c in facet_defining_sets(g):
            assert is_elementary(wedge_over_facet(g, c))
            assert is_elementary(wedge_over_complement(g, c))


def test_joined_product_vertex_counts():
    seg = SEGMENT
    tri = TRIANGLE
    sq = product(SEGMENT, SEGMENT)
    cases = [
        [seg, seg],
        [seg, tri],
        [tri, tri],
        [seg, seg, seg],
        [sq, seg],
        [sq, tri, seg],
    ]
    for gs in cases:
        parts = [(g, first_pyramidal_set(g)) for g in gs]
        counts = [pm_count(g) for g in gs]
        M = 1
        for c in counts:
            M *= c
        jp = joined_product(parts)
        assert is_elementary(jp)
        assert pm_count(jp) == sum(M // c for c in counts)
        rjp = reduced_joined_product(parts)
        assert is_elementary(rjp)
        assert pm_count(rjp) == M + sum(M // c for c in counts)


def test_joined_product_is_the_join_for_two_parts():
    # the joined product of two polytopes is their join: segment * square
    seg = SEGMENT
    sq = product(SEGMENT, SEGMENT)
    jp = joined_product([(seg, first_pyramidal_set(seg)), (sq, first_pyramidal_set(sq))])
    assert dimension(jp) == 4
    assert pm_count(jp) == 6
    from conftest import D4_JOIN_EDGE_SQUARE

    assert type_key(jp) == type_key(D4_JOIN_EDGE_SQUARE)


def test_joined_product_component_order_invariance():
    sq = product(SEGMENT, SEGMENT)
    sets = find_pyramidal_sets(sq)
    keys = set()
    for s in sets[:6]:
        keys.add(type_key(joined_product([(sq, s), (SEGMENT, first_pyramidal_set(SEGMENT))])))
    assert len(keys) == 1
    # order of the parts does not change the type either
    a = joined_product(
        [(sq, first_pyramidal_set(sq)), (SEGMENT, first_pyramidal_set(SEGMENT))]
    )
    b = joined_product(
        [(SEGMENT, first_pyramidal_set(SEGMENT)), (sq, first_pyramidal_set(sq))]
    )
    assert type_key(a) == type_key(b)


def test_joined_product_needs_two_parts():
    with pytest.raises(ValueError):
        joined_product([(SEGMENT, first_pyramidal_set(SEGMENT))])


def test_rjp_of_two_cubes_matches_wedge_family():
    # the reduced joined product of two segments is the wedge W1 family
    # member of dimension 4
    from conftest import D4_WEDGE_W1

    rjp = reduced_joined_product(
        [(SEGMENT, first_pyramidal_set(SEGMENT)), (SEGMENT, first_pyramidal_set(SEGMENT))]
    )
    assert type_key(rjp) == type_key(D4_WEDGE_W1)


def test_jp_of_three_segments_is_classwedges_type():
    jp = joined_product(
        [(SEGMENT, first_pyramidal_set(SEGMENT)) for _ in range(3)]
    )
    assert dimension(jp) == 5
    assert pm_count(jp) == 12
    assert is_elementary(jp)


def test_apply_recipe_round_trip():
    import json

    from birkfaces.graphs import graph_to_json

    seg_doc = json.loads(graph_to_json(SEGMENT))
    g = apply_recipe({"kind": "Pyramid", "operands": [seg_doc], "params": {}})
    assert type_key(g) == type_key(TRIANGLE)
    g = apply_recipe(
        {"kind": "Product", "operands": [seg_doc, seg_doc], "params": {}}
    )
    assert type_key(g) == type_key(product(SEGMENT, SEGMENT))
    g = apply_recipe(
        {"kind": "JoinedProduct", "operands": [seg_doc, seg_doc, seg_doc], "params": {}}
    )
    assert dimension(g) == 5
    tri_doc = json.loads(graph_to_json(TRIANGLE))
    g = apply_recipe(
        {
            "kind": "WedgeFacet",
            "operands": [tri_doc],
            "params": {"facet_edges": [[1, 1]]},
        }
    )
    assert dimension(g) == 3
    with pytest.raises(ValueError):
        apply_recipe({"kind": "Nonsense", "operands": [], "params": {}})
