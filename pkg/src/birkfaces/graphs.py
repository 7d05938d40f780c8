"""Bipartite graph kernel for faces of Birkhoff polytopes.

A face of the Birkhoff polytope B_n is encoded by an elementary bipartite
graph with n nodes in each layer: every edge lies in some perfect matching,
perfect matchings are the vertices of the face.  Graphs are stored as one
neighborhood bitmask per upper node, so all hot operations (matching
feasibility, closures, component splits) are machine-word work.

Layers are called "upper" (rows) and "lower" (columns).  An edge is a pair
(u, v) of 0-based indices.  A perfect matching is a permutation given as a
tuple `map` with `map[u] = v`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

PerfectMatching = tuple[int, ...]

UPPER = "upper"
LOWER = "lower"


class NotElementaryError(ValueError):
    """Raised when a graph is used as a face graph but fails elementarity."""

    def __init__(self, message: str, edge: tuple[int, int] | None = None):
        super().__init__(message)
        self.edge = edge


def _popcount(x: int) -> int:
    return bin(x).count("1")


# ---------------------------------------------------------------------------
# maximum matching (Kuhn's augmenting paths on bitmask rows)
# ---------------------------------------------------------------------------

def max_matching_size(rows: Sequence[int], n_cols: int) -> int:
    """Size of a maximum matching of the bipartite graph given by rows."""
    match_col = [-1] * n_cols
    size = 0
    for u in range(len(rows)):
        if _augment(rows, u, match_col):
            size += 1
    return size


def _augment(rows: Sequence[int], u: int, match_col: list[int]) -> bool:
    # iterative DFS over alternating paths; visited is a column bitmask
    visited = 0
    stack = [(u, rows[u])]
    parent: dict[int, tuple[int, int]] = {}
    while stack:
        node, avail = stack[-1]
        avail &= ~visited
        if not avail:
            stack.pop()
            continue
        v = (avail & -avail).bit_length() - 1
        stack[-1] = (node, avail & ~(1 << v))
        visited |= 1 << v
        parent[v] = (node, v)
        w = match_col[v]
        if w == -1:
            # augment along the recorded path
            while True:
                node2, col = parent[v]
                match_col[col] = node2
                if node2 == u:
                    return True
                # find the column previously matched to node2
                v = _matched_col(match_col, node2, col)
        else:
            stack.append((w, rows[w]))
    return False


def _matched_col(match_col: list[int], row: int, skip: int) -> int:
    for c, r in enumerate(match_col):
        if r == row and c != skip:
            return c
    raise AssertionError("broken alternating path")


def has_perfect_matching(rows: Sequence[int], n_cols: int) -> bool:
    return max_matching_size(rows, n_cols) == len(rows) == n_cols


# ---------------------------------------------------------------------------
# graph types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FaceGraph:
    """Elementary bipartite graph with n nodes per layer (a face graph).

    `rows[u]` is the neighborhood bitmask of upper node u. Instances are
    immutable; construct through `from_rows`, `from_edges` or
    `graph_from_permutations`, which validate elementarity unless told not
    to.
    """

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError("n must be positive")
        if len(self.rows) != self.n:
            raise ValueError("rows length must equal n")
        full = (1 << self.n) - 1
        for r in self.rows:
            if r & ~full:
                raise ValueError("row mask out of range")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_rows(n: int, rows: Iterable[int], validate: bool = True) -> "FaceGraph":
        g = FaceGraph(n, tuple(rows))
        if validate:
            g.require_elementary()
        return g

    @staticmethod
    def from_edges(n: int, edges: Iterable[tuple[int, int]], validate: bool = True) -> "FaceGraph":
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            rows[u] |= 1 << v
        return FaceGraph.from_rows(n, rows, validate=validate)

    # -- basic accessors ----------------------------------------------------

    @property
    def m(self) -> int:
        return sum(_popcount(r) for r in self.rows)

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u, r in enumerate(self.rows):
            while r:
                v = (r & -r).bit_length() - 1
                r &= r - 1
                out.append((u, v))
        return out

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def cols(self) -> tuple[int, ...]:
        """Neighborhood bitmasks of the lower layer (transposed rows)."""
        cols = [0] * self.n
        for u, r in enumerate(self.rows):
            while r:
                v = (r & -r).bit_length() - 1
                r &= r - 1
                cols[v] |= 1 << u
        return tuple(cols)

    def transpose(self) -> "FaceGraph":
        return FaceGraph(self.n, self.cols())

    def degree(self, layer: str, index: int) -> int:
        if layer == UPPER:
            return _popcount(self.rows[index])
        return _popcount(self.cols()[index])

    def degrees(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return (
            tuple(_popcount(r) for r in self.rows),
            tuple(_popcount(c) for c in self.cols()),
        )

    # -- elementarity -------------------------------------------------------

    def require_elementary(self) -> None:
        err = _elementarity_defect(self.n, self.rows)
        if err is not None:
            kind, edge = err
            raise NotElementaryError(kind, edge)

    def __repr__(self) -> str:  # compact, edge-list based
        return f"FaceGraph(n={self.n}, edges={self.edges()})"


@dataclass(frozen=True)
class BipartiteMultiGraph:
    """Bipartite multigraph; mult[u][v] counts parallel edges."""

    n: int
    mult: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.mult) != self.n or any(len(r) != self.n for r in self.mult):
            raise ValueError("mult must be an n x n matrix")
        if any(c < 0 for r in self.mult for c in r):
            raise ValueError("multiplicities must be non-negative")

    @staticmethod
    def from_simple(g: FaceGraph) -> "BipartiteMultiGraph":
        return BipartiteMultiGraph(
            g.n, tuple(tuple(r >> v & 1 for v in range(g.n)) for r in g.rows)
        )

    @property
    def m(self) -> int:
        return sum(sum(r) for r in self.mult)

    def is_simple(self) -> bool:
        return all(c <= 1 for r in self.mult for c in r)

    def simple_rows(self) -> tuple[int, ...]:
        """Support of the multigraph as bitmask rows (multiplicities dropped)."""
        return tuple(
            sum(1 << v for v in range(self.n) if r[v]) for r in self.mult
        )

    def degree(self, layer: str, index: int) -> int:
        if layer == UPPER:
            return sum(self.mult[index])
        return sum(self.mult[u][index] for u in range(self.n))


GraphLike = FaceGraph | BipartiteMultiGraph


@dataclass(frozen=True)
class LayeredNode:
    layer: str
    index: int

    def __post_init__(self):
        if self.layer not in (UPPER, LOWER):
            raise ValueError("layer must be 'upper' or 'lower'")
        if self.index < 0:
            raise ValueError("index must be non-negative")


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def graph_from_permutations(perms: Iterable[Sequence[int]]) -> FaceGraph:
    """Union graph of a set of permutations: edge (i, sigma(i)) for each sigma.

    Every edge comes from a generating matching, so the result is elementary
    by construction.
    """
    perms = [tuple(p) for p in perms]
    if not perms:
        raise ValueError("permutation set must be non-empty")
    n = len(perms[0])
    rows = [0] * n
    for p in perms:
        if len(p) != n or sorted(p) != list(range(n)):
            raise ValueError(f"not a permutation of range({n}): {p}")
        for i, j in enumerate(p):
            rows[i] |= 1 << j
    return FaceGraph(n, tuple(rows))


def components(g: GraphLike) -> list[tuple[list[int], list[int]]]:
    """Connected components as (upper indices, lower indices) pairs.

    Isolated nodes form their own singleton components.
    """
    if isinstance(g, BipartiteMultiGraph):
        rows = g.simple_rows()
        n = g.n
    else:
        rows, n = g.rows, g.n
    cols = [0] * n
    for u, r in enumerate(rows):
        rr = r
        while rr:
            v = (rr & -rr).bit_length() - 1
            rr &= rr - 1
            cols[v] |= 1 << u
    seen_u = 0
    seen_v = 0
    out: list[tuple[list[int], list[int]]] = []
    for start in range(n):
        if seen_u >> start & 1:
            continue
        comp_u = 1 << start
        comp_v = 0
        frontier_u = comp_u
        while frontier_u:
            new_v = 0
            fu = frontier_u
            while fu:
                u = (fu & -fu).bit_length() - 1
                fu &= fu - 1
                new_v |= rows[u]
            new_v &= ~comp_v
            comp_v |= new_v
            frontier_v = new_v
            new_u = 0
            while frontier_v:
                v = (frontier_v & -frontier_v).bit_length() - 1
                frontier_v &= frontier_v - 1
                new_u |= cols[v]
            frontier_u = new_u & ~comp_u
            comp_u |= frontier_u
        seen_u |= comp_u
        seen_v |= comp_v
        out.append((_bits(comp_u), _bits(comp_v)))
    # lower nodes not reachable from any upper node (isolated)
    for v in range(n):
        if not (seen_v >> v & 1):
            out.append(([], [v]))
    return out


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        b = (mask & -mask).bit_length() - 1
        mask &= mask - 1
        out.append(b)
    return out


def component_count(g: GraphLike) -> int:
    return len(components(g))


def is_connected(g: GraphLike) -> bool:
    return component_count(g) == 1


def enumerate_perfect_matchings(g: FaceGraph) -> list[PerfectMatching]:
    """All perfect matchings in lexicographic order of the map array.

    Backtracks over upper nodes in index order, lower candidates in index
    order, with a maximum-matching feasibility test on the residual graph at
    every level.
    """
    return enumerate_matchings_rows(g.rows, g.n)


def enumerate_matchings_rows(
    rows: Sequence[int], n: int, limit: int | None = None
) -> list[PerfectMatching]:
    out: list[PerfectMatching] = []
    cur = [0] * n
    full = (1 << n) - 1

    def feasible(u: int, used: int) -> bool:
        residual = [rows[w] & ~used for w in range(u, n)]
        if any(r == 0 for r in residual):
            return False
        return max_matching_size(residual, n) == n - u

    def rec(u: int, used: int) -> bool:
        if u == n:
            out.append(tuple(cur))
            return limit is not None and len(out) >= limit
        if not feasible(u, used):
            return False
        avail = rows[u] & ~used & full
        while avail:
            v = (avail & -avail).bit_length() - 1
            avail &= avail - 1
            cur[u] = v
            if rec(u + 1, used | (1 << v)):
                return True
        return False

    rec(0, 0)
    return out


def matching_mask(pm: PerfectMatching, n: int) -> int:
    """Perfect matching as an n*n edge bitmask (bit u*n+v)."""
    mask = 0
    for u, v in enumerate(pm):
        mask |= 1 << (u * n + v)
    return mask


def rows_to_mask(rows: Sequence[int], n: int) -> int:
    mask = 0
    for u, r in enumerate(rows):
        mask |= r << (u * n)
    return mask


def mask_to_rows(mask: int, n: int) -> tuple[int, ...]:
    full = (1 << n) - 1
    return tuple((mask >> (u * n)) & full for u in range(n))


def has_pm_containing(g: FaceGraph, edge: tuple[int, int]) -> bool:
    """True iff some perfect matching of g uses the given edge.

    Tested as: g minus both endpoints still has a perfect matching.  No
    enumeration.
    """
    u, v = edge
    if not g.has_edge(u, v):
        raise ValueError(f"({u},{v}) is not an edge of the graph")
    return _edge_feasible(g.rows, g.n, u, v)


def _edge_feasible(rows: Sequence[int], n: int, u: int, v: int) -> bool:
    keep = ~(1 << v)
    residual = [rows[w] & keep for w in range(n) if w != u]
    if any(r == 0 for r in residual):
        return n == 1
    return max_matching_size(residual, n) == n - 1


def _elementarity_defect(
    n: int, rows: Sequence[int]
) -> tuple[str, tuple[int, int] | None] | None:
    """None if elementary, else (reason, offending edge or None)."""
    cols = [0] * n
    for u, r in enumerate(rows):
        rr = r
        while rr:
            v = (rr & -rr).bit_length() - 1
            rr &= rr - 1
            cols[v] |= 1 << u
    for u in range(n):
        if rows[u] == 0:
            return ("isolated upper node %d" % u, None)
        if cols[u] == 0:
            return ("isolated lower node %d" % u, None)
    if max_matching_size(rows, n) != n:
        return ("graph has no perfect matching", None)
    for u in range(n):
        r = rows[u]
        while r:
            v = (r & -r).bit_length() - 1
            r &= r - 1
            if not _edge_feasible(rows, n, u, v):
                return ("edge (%d,%d) lies in no perfect matching" % (u, v), (u, v))
    return None


def is_elementary(g: FaceGraph | tuple[int, Sequence[int]]) -> bool:
    """Every node covered and every edge in some perfect matching."""
    if isinstance(g, FaceGraph):
        n, rows = g.n, g.rows
    else:
        n, rows = g
    return _elementarity_defect(n, rows) is None


def dimension(g: FaceGraph) -> int:
    """dim = m - 2n + k for a face graph with k connected components."""
    g.require_elementary()
    return g.m - 2 * g.n + component_count(g)


def dimension_unchecked(g: FaceGraph) -> int:
    return g.m - 2 * g.n + component_count(g)


def ear_count(g: FaceGraph) -> int:
    """Number of ears in any ear decomposition that starts each component
    with a cycle: m - 2n + k.  (Counting a starting cycle as two ears, as
    some texts do, adds one per component.)"""
    g.require_elementary()
    return g.m - 2 * g.n + component_count(g)


def resolution(mg: BipartiteMultiGraph | FaceGraph) -> FaceGraph:
    """Replace all but one edge of each parallel bundle by a path of length 3.

    Keeps the combinatorial type and the number of perfect matchings; each
    resolved edge adds one node to each layer.
    """
    if isinstance(mg, FaceGraph):
        return mg
    extra = sum(max(0, c - 1) for r in mg.mult for c in r)
    n = mg.n + extra
    rows = [0] * n
    for u in range(mg.n):
        for v in range(mg.n):
            c = mg.mult[u][v]
            if c >= 1:
                rows[u] |= 1 << v
    nxt = mg.n
    for u in range(mg.n):
        for v in range(mg.n):
            for _ in range(mg.mult[u][v] - 1):
                x, y = nxt, nxt  # one fresh lower node x, one fresh upper y
                rows[u] |= 1 << x
                rows[y] |= (1 << x) | (1 << v)
                nxt += 1
    return FaceGraph(n, tuple(rows))


# ---------------------------------------------------------------------------
# JSON graph format: {"n": int, "edges": [[u, v], ...]} with optional
# "mult": [[u, v, count], ...] entries for parallel edges.  The writer sorts
# edge lists; the reader is tolerant.
# ---------------------------------------------------------------------------

def graph_to_json(g: GraphLike) -> str:
    if isinstance(g, BipartiteMultiGraph):
        edges = []
        mult = []
        for u in range(g.n):
            for v in range(g.n):
                c = g.mult[u][v]
                if c >= 1:
                    edges.append([u, v])
                if c >= 2:
                    mult.append([u, v, c])
        doc: dict = {"n": g.n, "edges": sorted(edges)}
        if mult:
            doc["mult"] = sorted(mult)
        return json.dumps(doc, separators=(", ", ": ")) + "\n"
    doc = {"n": g.n, "edges": sorted(g.edges())}
    return json.dumps(doc, separators=(", ", ": ")) + "\n"


def graph_from_json(text: str, validate: bool = True) -> GraphLike:
    doc = json.loads(text)
    n = doc["n"]
    if not isinstance(n, int) or n <= 0:
        raise ValueError("'n' must be a positive integer")
    mult_entries = doc.get("mult", [])
    if mult_entries:
        mult = [[0] * n for _ in range(n)]
        for u, v in doc["edges"]:
            mult[u][v] = 1
        for u, v, c in mult_entries:
            if mult[u][v] == 0:
                raise ValueError(f"mult entry on missing edge ({u},{v})")
            mult[u][v] = c
        return BipartiteMultiGraph(n, tuple(tuple(r) for r in mult))
    return FaceGraph.from_edges(n, [tuple(e) for e in doc["edges"]], validate=validate)
