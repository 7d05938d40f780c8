"""Degree-2 contractions, irreducibility, partners, and search bounds.

Contracting a degree-2 node merges its two neighbors into one node of the
opposite layer and preserves the combinatorial type of the face.  A node is
reducible when the contraction stays a simple graph; graphs without
reducible nodes ("irreducible") are the minimal representations the
classifier enumerates.  The structural bounds collected in `bound_checks`
(partner counts, node bound 2d-2, degree bound 2d-n+1, minimum edge counts)
double as pruning rules for the exhaustive search.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .graphs import (
    LOWER,
    UPPER,
    BipartiteMultiGraph,
    FaceGraph,
    GraphLike,
    LayeredNode,
    _popcount,
    resolution,
)


@dataclass(frozen=True)
class PartnerReport:
    node: LayeredNode
    partners: frozenset[LayeredNode]


@dataclass(frozen=True)
class ReductionTrace:
    steps: tuple[tuple[LayeredNode, tuple[int, int]], ...]
    result: BipartiteMultiGraph


def _as_mult(g: GraphLike) -> BipartiteMultiGraph:
    if isinstance(g, FaceGraph):
        return BipartiteMultiGraph.from_simple(g)
    return g


def reduce_at(g: GraphLike, v: LayeredNode) -> BipartiteMultiGraph:
    """Contract the degree-2 node v; its neighbors merge into one node.

    The merged node lives in v's opposite layer and inherits all remaining
    edges of both neighbors, parallel edges kept as multiplicities.  n drops
    by one.
    """
    mg = _as_mult(g)
    n = mg.n
    if v.layer == LOWER:
        transposed = BipartiteMultiGraph(
            n, tuple(tuple(mg.mult[u][w] for u in range(n)) for w in range(n))
        )
        red = reduce_at(transposed, LayeredNode(UPPER, v.index))
        nn = red.n
        return BipartiteMultiGraph(
            nn, tuple(tuple(red.mult[u][w] for u in range(nn)) for w in range(nn))
        )
    i = v.index
    if mg.degree(UPPER, i) != 2:
        raise ValueError(f"node {v} does not have degree 2")
    nbrs = [w for w in range(n) if mg.mult[i][w]]
    if len(nbrs) != 2:
        raise ValueError(f"node {v} has a double edge; contraction undefined")
    w1, w2 = nbrs
    # lower layer: w1 slot becomes the merged node, w2 slot disappears
    old_lower = [w for w in range(n) if w != w2]
    new_mult = []
    for u in range(n):
        if u == i:
            continue
        row = []
        for w in old_lower:
            if w == w1:
                row.append(mg.mult[u][w1] + mg.mult[u][w2])
            else:
                row.append(mg.mult[u][w])
        new_mult.append(tuple(row))
    return BipartiteMultiGraph(n - 1, tuple(new_mult))


def is_reducible_node(g: FaceGraph, v: LayeredNode) -> bool:
    """Degree 2 and the common neighborhood of its two neighbors is {v}."""
    rows = g.rows if v.layer == UPPER else g.cols()
    cols = g.cols() if v.layer == UPPER else g.rows
    mask = rows[v.index]
    if _popcount(mask) != 2:
        return False
    w1 = (mask & -mask).bit_length() - 1
    w2 = (mask & (mask - 1)).bit_length() - 1
    return cols[w1] & cols[w2] == 1 << v.index


def reducible_nodes(g: FaceGraph) -> list[LayeredNode]:
    out = []
    for layer in (UPPER, LOWER):
        for i in range(g.n):
            node = LayeredNode(layer, i)
            if is_reducible_node(g, node):
                out.append(node)
    return out


def is_irreducible(g: FaceGraph) -> bool:
    return not reducible_nodes(g)


def minimal_nodes(g: FaceGraph) -> list[LayeredNode]:
    """All degree-2 nodes of an irreducible face graph."""
    out = []
    rows, cols = g.rows, g.cols()
    for i in range(g.n):
        if _popcount(rows[i]) == 2:
            out.append(LayeredNode(UPPER, i))
    for i in range(g.n):
        if _popcount(cols[i]) == 2:
            out.append(LayeredNode(LOWER, i))
    return out


def partners(g: FaceGraph, v: LayeredNode) -> PartnerReport:
    """Same-layer nodes adjacent to both neighbors of the minimal node v."""
    rows = g.rows if v.layer == UPPER else g.cols()
    cols = g.cols() if v.layer == UPPER else g.rows
    mask = rows[v.index]
    if _popcount(mask) != 2:
        raise ValueError(f"{v} is not minimal (degree != 2)")
    w1 = (mask & -mask).bit_length() - 1
    w2 = (mask & (mask - 1)).bit_length() - 1
    common = cols[w1] & cols[w2] & ~(1 << v.index)
    out = set()
    while common:
        b = (common & -common).bit_length() - 1
        common &= common - 1
        out.add(LayeredNode(v.layer, b))
    return PartnerReport(v, frozenset(out))


def fully_reduce(g: GraphLike) -> ReductionTrace:
    """Contract reducible nodes until none remain; type is preserved.

    A contraction at a reducible node never creates parallel edges, so the
    iteration runs on simple graphs; multigraph input is resolved first.
    Lowest-index reducible node first, upper layer before lower, which makes
    traces reproducible.
    """
    cur = resolution(_as_mult(g)) if isinstance(g, BipartiteMultiGraph) else g
    steps: list[tuple[LayeredNode, tuple[int, int]]] = []
    while True:
        red = reducible_nodes(cur)
        if not red:
            break
        v = red[0]
        rows = cur.rows if v.layer == UPPER else cur.cols()
        mask = rows[v.index]
        w1 = (mask & -mask).bit_length() - 1
        w2 = (mask & (mask - 1)).bit_length() - 1
        mg = reduce_at(cur, v)
        assert mg.is_simple(), "contraction at a reducible node stays simple"
        cur = FaceGraph(mg.n, mg.simple_rows())
        steps.append((v, (w1, w2)))
    return ReductionTrace(tuple(steps), BipartiteMultiGraph.from_simple(cur))


# ---------------------------------------------------------------------------
# structural bounds, usable on partially built graphs during enumeration
# ---------------------------------------------------------------------------

def max_degree_bound(n: int, d: int) -> int:
    """Largest degree a connected irreducible d-face graph on n nodes allows."""
    return n if n <= d + 1 else 2 * d - n + 1


def node_bound(d: int) -> int:
    """Largest layer size of a connected irreducible d-face graph.

    2d-2 in general; d+1 is larger (and attained) for d <= 2, e.g. the
    segment on 2 nodes and the triangle on 3.
    """
    return max(d + 1, 2 * d - 2)


def min_edge_count(n: int) -> int:
    """Fewest edges of a connected irreducible face graph on n nodes."""
    if n <= 1:
        return 1
    if n == 2:
        return 4
    if n == 3:
        return 7
    return 2 * n + (n + 1) // 2


def minimal_node_cap(n: int, d: int) -> int:
    """Max number of degree-2 nodes per layer (d at n=d+1, else d-1)."""
    return d if n == d + 1 else d - 1


def bound_checks(rows: Sequence[int], n: int, d: int) -> list[str]:
    """Violated bounds for a (possibly partial) candidate graph.

    `rows` holds the neighborhoods of the already fixed upper nodes; lower
    degrees may still grow unless the graph is complete (len(rows) == n).
    An empty list is necessary, not sufficient, for extending to a connected
    irreducible face graph of dimension d.
    """
    out: list[str] = []
    r = len(rows)
    if not (1 <= r <= n):
        raise ValueError("need between 1 and n assigned rows")
    if n > node_bound(d):
        out.append(f"node-bound: n={n} exceeds {node_bound(d)} (irreducible cap)")
    target_m = d + 2 * n - 1
    if target_m < min_edge_count(n) or (n == 2 and target_m != 4):
        out.append(
            f"min-edges: target m={target_m} below minimum {min_edge_count(n)} for n={n}"
        )
    maxdeg = max_degree_bound(n, d)
    if maxdeg < 2:
        out.append(f"max-degree: bound {maxdeg} < 2 admits no face graph")
    if target_m > n * maxdeg:
        out.append(f"min-edges: target m={target_m} exceeds n*maxdeg={n * maxdeg}")

    colsum = [0] * n
    mindeg_rows = 0
    m_assigned = 0
    for mask in rows:
        deg = _popcount(mask)
        m_assigned += deg
        if deg > maxdeg:
            out.append(f"max-degree: row degree {deg} exceeds {maxdeg}")
        if deg == 2:
            mindeg_rows += 1
        mm = mask
        while mm:
            v = (mm & -mm).bit_length() - 1
            mm &= mm - 1
            colsum[v] += 1
    if mindeg_rows > minimal_node_cap(n, d):
        out.append(
            f"minimal-count: {mindeg_rows} degree-2 upper nodes exceed cap {minimal_node_cap(n, d)}"
        )
    for v, s in enumerate(colsum):
        if s > maxdeg:
            out.append(f"max-degree: column {v} degree {s} exceeds {maxdeg}")
        if s + (n - r) < 2:
            out.append(f"min-degree: column {v} cannot reach degree 2")
    if m_assigned + 2 * (n - r) > target_m:
        out.append("edge-count: assigned edges leave no room for remaining rows")
    if m_assigned + maxdeg * (n - r) < target_m:
        out.append("edge-count: remaining rows cannot reach the edge target")

    if r == n:
        if m_assigned != target_m:
            out.append(f"edge-count: m={m_assigned} differs from target {target_m}")
        k2_low = sum(1 for s in colsum if s == 2)
        if k2_low > minimal_node_cap(n, d):
            out.append(
                f"minimal-count: {k2_low} degree-2 lower nodes exceed cap {minimal_node_cap(n, d)}"
            )
        g = FaceGraph(n, tuple(rows))
        if n >= 2 and reducible_nodes(g):
            out.append("partner-deficit: graph has a reducible node")
    return sorted(set(out))
