"""Building new faces from old: products, pyramids, wedges, joined products.

All constructions return ordinary face graphs and are validated through the
generic machinery (elementarity, matching counts), not trusted.  The wedge
over a facet attaches a path of length 3 to the endpoints of an edge of the
facet defining set; the wedge over the facet's complement first replaces
that edge by a path of length 3 and then attaches another path to the two
new nodes.  Pyramids and joined products wire components circularly through
choices of node pairs whose removal leaves a unique perfect matching
("pyramidal" choices).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .faces import FacetDefiningSet
from .graphs import (
    FaceGraph,
    components,
    enumerate_matchings_rows,
)
from .types import VertexFacetIncidence


class InvalidPyramidalError(ValueError):
    """A chosen node set does not leave a unique perfect matching."""


@dataclass(frozen=True)
class PyramidalSet:
    """One (upper, lower) node pair per connected component of host."""

    host: FaceGraph
    pairs: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class ConstructionRecipe:
    kind: str
    operands: tuple[FaceGraph, ...]
    params: dict


def product(g1: FaceGraph, g2: FaceGraph) -> FaceGraph:
    """Disjoint union; the face is the product of the two faces."""
    n = g1.n + g2.n
    rows = list(g1.rows) + [r << g1.n for r in g2.rows]
    return FaceGraph(n, tuple(rows))


def product_all(gs: list[FaceGraph]) -> FaceGraph:
    out = gs[0]
    for g in gs[1:]:
        out = product(out, g)
    return out


def circular_connection(
    parts: list[FaceGraph], choices: list[tuple[int, int]]
) -> FaceGraph:
    """Disjoint union plus the edges u^{i+1} -> v^i (indices mod k).

    Not validated: the result is in general not a face graph.
    """
    if len(parts) != len(choices):
        raise ValueError("one (upper, lower) choice per part required")
    k = len(parts)
    offs = []
    n = 0
    for p in parts:
        offs.append(n)
        n += p.n
    rows = [0] * n
    for p, off in zip(parts, offs):
        for i, r in enumerate(p.rows):
            rows[off + i] = r << off
    for i in range(k):
        u_next = offs[(i + 1) % k] + choices[(i + 1) % k][0]
        v_here = offs[i] + choices[i][1]
        rows[u_next] |= 1 << v_here
    return FaceGraph.from_rows(n, rows, validate=False)


def _unique_residual_matching(g: FaceGraph, skip_u: int, skip_v: int) -> bool:
    rows = [g.rows[u] & ~(1 << skip_v) for u in range(g.n) if u != skip_u]
    n_rest = g.n - 1
    if n_rest == 0:
        return True
    full = 0
    for i, r in enumerate(rows):
        full |= r
    # matchings live on the remaining columns; relabel them densely
    cols = [v for v in range(g.n) if v != skip_v]
    pos = {v: i for i, v in enumerate(cols)}
    dense = []
    for r in rows:
        mask = 0
        while r:
            v = (r & -r).bit_length() - 1
            r &= r - 1
            mask |= 1 << pos[v]
        dense.append(mask)
    found = enumerate_matchings_rows(dense, n_rest, limit=2)
    return len(found) == 1


def component_pyramidal_pairs(g: FaceGraph) -> list[list[tuple[int, int]]]:
    """Per component, the (u, v) pairs whose removal leaves a unique matching."""
    out = []
    for up, low in components(g):
        from .types import _component_graph

        sub = _component_graph(g, up, low)
        sup = sorted(up)
        slow = sorted(low)
        good = []
        for iu, u in enumerate(sup):
            for iv, v in enumerate(slow):
                if _unique_residual_matching(sub, iu, iv):
                    good.append((u, v))
        out.append(good)
    return out


def find_pyramidal_sets(g: FaceGraph) -> list[PyramidalSet]:
    """All pyramidal choices: uniqueness factors over the components."""
    g.require_elementary()
    per_comp = component_pyramidal_pairs(g)
    if any(not pairs for pairs in per_comp):
        return []
    return [
        PyramidalSet(g, tuple(combo)) for combo in itertools.product(*per_comp)
    ]


def first_pyramidal_set(g: FaceGraph) -> PyramidalSet | None:
    per_comp = component_pyramidal_pairs(g)
    if any(not pairs for pairs in per_comp):
        return None
    return PyramidalSet(g, tuple(pairs[0] for pairs in per_comp))


def _check_pyramidal(g: FaceGraph, s: PyramidalSet) -> list[tuple[list, list]]:
    comps = components(g)
    if len(s.pairs) != len(comps):
        raise InvalidPyramidalError("one node pair per component required")
    from .types import _component_graph

    for (u, v), (up, low) in zip(s.pairs, comps):
        if u not in up or v not in low:
            raise InvalidPyramidalError(f"pair ({u},{v}) not inside its component")
        sub = _component_graph(g, up, low)
        iu = sorted(up).index(u)
        iv = sorted(low).index(v)
        if not _unique_residual_matching(sub, iu, iv):
            raise InvalidPyramidalError(
                f"removing ({u},{v}) leaves more than one perfect matching"
            )
    return comps


def pyramid(g: FaceGraph, s: PyramidalSet) -> FaceGraph:
    """Face graph of the pyramid over face(g).

    Connected g with the chosen pair non-adjacent: add the single edge.
    Several components: connect them circularly through the chosen pairs.
    If the single chosen pair is already an edge, a fresh two-node part
    (one edge) joins the cycle instead, which always works.
    """
    comps = _check_pyramidal(g, s)
    k = len(comps)
    if k == 1:
        u, v = s.pairs[0]
        if not g.has_edge(u, v):
            rows = list(g.rows)
            rows[u] |= 1 << v
            return FaceGraph.from_rows(g.n, rows)
        extra = FaceGraph.from_edges(1, [(0, 0)])
        parts, choices = _component_parts(g, comps, s.pairs)
        parts.append(extra)
        choices.append((0, 0))
        out = circular_connection(parts, choices)
        out.require_elementary()
        return out
    parts, choices = _component_parts(g, comps, s.pairs)
    out = circular_connection(parts, choices)
    out.require_elementary()
    return out


def _component_parts(g: FaceGraph, comps, pairs):
    from .types import _component_graph

    parts = []
    choices = []
    for (u, v), (up, low) in zip(pairs, comps):
        parts.append(_component_graph(g, up, low))
        choices.append((sorted(up).index(u), sorted(low).index(v)))
    return parts, choices


# ---------------------------------------------------------------------------
# wedges
# ---------------------------------------------------------------------------

def _pick_edge(c: FacetDefiningSet, edge: tuple[int, int] | None) -> tuple[int, int]:
    if edge is None:
        return min(c.removed)
    if edge not in c.removed:
        raise ValueError(f"edge {edge} is not in the facet defining set")
    return edge


def wedge_over_facet(
    g: FaceGraph, c: FacetDefiningSet, edge: tuple[int, int] | None = None
) -> FaceGraph:
    """Attach a path of length 3 to the endpoints of an edge of c; dim + 1."""
    u, v = _pick_edge(c, edge)
    n = g.n + 1
    x = g.n  # fresh lower node
    y = g.n  # fresh upper node
    rows = [r for r in g.rows] + [0]
    rows[u] |= 1 << x
    rows[y] |= (1 << x) | (1 << v)
    return FaceGraph.from_rows(n, rows)


def wedge_over_complement(
    g: FaceGraph, c: FacetDefiningSet, edge: tuple[int, int] | None = None
) -> FaceGraph:
    """Replace an edge of c by a path of length 3, then attach another path
    of length 3 to the two new nodes; dim + 1."""
    u, v = _pick_edge(c, edge)
    n = g.n + 2
    x, x2 = g.n, g.n + 1  # fresh lower nodes
    y, y2 = g.n, g.n + 1  # fresh upper nodes
    rows = [r for r in g.rows] + [0, 0]
    rows[u] &= ~(1 << v)
    rows[u] |= 1 << x
    rows[y] |= (1 << x) | (1 << v)
    rows[y] |= 1 << x2
    rows[y2] |= (1 << x2) | (1 << x)
    return FaceGraph.from_rows(n, rows)


# ---------------------------------------------------------------------------
# joined products
# ---------------------------------------------------------------------------

def joined_product(
    parts: list[tuple[FaceGraph, PyramidalSet]], reduced: bool = False
) -> FaceGraph:
    """Two fresh hub nodes u, v; each part's components chain from v to u.

    The face is the Cayley sum of the "all factors but one" product blocks;
    `reduced` adds the edge (u, v), which contributes the full product block.
    """
    if len(parts) < 2:
        raise ValueError("a joined product needs at least two parts")
    for g, s in parts:
        _check_pyramidal(g, s)
    n = 1 + sum(g.n for g, _ in parts)
    rows = [0] * n  # hubs are upper 0 and lower 0
    off = 1
    for g, s in parts:
        for u in range(g.n):
            rows[off + u] |= g.rows[u] << off
        pairs = s.pairs  # aligned with components(g) order
        rows[off + pairs[0][0]] |= 1  # (v hub, u_i^1)
        for prev, nxt in zip(pairs, pairs[1:]):
            rows[off + nxt[0]] |= 1 << (off + prev[1])
        rows[0] |= 1 << (off + pairs[-1][1])  # (u hub, v_i^{c_i})
        off += g.n
    if reduced:
        rows[0] |= 1  # edge between the hubs
    return FaceGraph.from_rows(n, rows)


def reduced_joined_product(parts: list[tuple[FaceGraph, PyramidalSet]]) -> FaceGraph:
    return joined_product(parts, reduced=True)


# ---------------------------------------------------------------------------
# abstract wedge on the level of vertex-facet incidences (oracle)
# ---------------------------------------------------------------------------

def abstract_wedge_incidence(
    inc: VertexFacetIncidence, face_vertices: int
) -> VertexFacetIncidence:
    """Vertex-facet incidence of the wedge over the face with the given
    vertex set (bitmask over inc's vertices).

    Proper nonempty faces only.  Vertices: a bottom copy of all vertices and
    a top copy of those off the face.  Facets: bottom, top, and one from
    every facet of the base whose vertex set differs from the face.
    """
    v, f = inc.v, inc.f
    cols = [0] * f
    for i, r in enumerate(inc.rows):
        m = r
        while m:
            j = (m & -m).bit_length() - 1
            m &= m - 1
            cols[j] |= 1 << i
    if face_vertices == 0 or face_vertices == (1 << v) - 1:
        raise ValueError("wedge face must be proper and nonempty")
    top_ids = [i for i in range(v) if not face_vertices >> i & 1]
    top_pos = {i: v + t for t, i in enumerate(top_ids)}
    nv = v + len(top_ids)
    kept = [j for j in range(f) if cols[j] != face_vertices]
    nf = len(kept) + 2
    rows = [0] * nv
    # facet columns 0..len(kept)-1 follow the kept base facets
    for cidx, j in enumerate(kept):
        m = cols[j]
        while m:
            i = (m & -m).bit_length() - 1
            m &= m - 1
            rows[i] |= 1 << cidx
            if i in top_pos:
                rows[top_pos[i]] |= 1 << cidx
    bot_col = len(kept)
    top_col = len(kept) + 1
    for i in range(v):
        rows[i] |= 1 << bot_col
        if face_vertices >> i & 1:
            rows[i] |= 1 << top_col
    for i in top_ids:
        rows[top_pos[i]] |= 1 << top_col
    return VertexFacetIncidence(nv, nf, tuple(rows))


def apply_recipe(doc: dict) -> FaceGraph:
    """Build a graph from a construction recipe document (CLI surface)."""
    from .faces import facet_defining_sets
    from .graphs import graph_from_json
    import json as _json

    kind = doc["kind"]
    operands = [graph_from_json(_json.dumps(o)) for o in doc.get("operands", [])]
    params = doc.get("params", {})
    if kind == "Product":
        if len(operands) < 2:
            raise ValueError("product needs at least two operands")
        return product_all(operands)
    if kind == "Pyramid":
        (g,) = operands
        pairs = params.get("pairs")
        s = (
            PyramidalSet(g, tuple(tuple(p) for p in pairs))
            if pairs
            else first_pyramidal_set(g)
        )
        if s is None:
            raise InvalidPyramidalError("no pyramidal set exists")
        return pyramid(g, s)
    if kind in ("WedgeFacet", "WedgeComplement"):
        (g,) = operands
        cset = frozenset(tuple(e) for e in params["facet_edges"])
        match = [c for c in facet_defining_sets(g) if c.removed == cset]
        if not match:
            raise ValueError("facet_edges is not a facet defining set of the graph")
        edge = tuple(params["edge"]) if "edge" in params else None
        fn = wedge_over_facet if kind == "WedgeFacet" else wedge_over_complement
        return fn(g, match[0], edge)
    if kind in ("JoinedProduct", "ReducedJoinedProduct"):
        pairs_per_part = params.get("pairs")
        parts = []
        for i, g in enumerate(operands):
            if pairs_per_part:
                s = PyramidalSet(g, tuple(tuple(p) for p in pairs_per_part[i]))
            else:
                s = first_pyramidal_set(g)
                if s is None:
                    raise InvalidPyramidalError(f"operand {i} has no pyramidal set")
            parts.append((g, s))
        return joined_product(parts, reduced=(kind == "ReducedJoinedProduct"))
    if kind == "CircularConnection":
        choices = [tuple(p) for p in params["choices"]]
        return circular_connection(operands, choices)
    raise ValueError(f"unknown construction kind: {kind}")
