"""Combinatorial-type identity and the classification catalog.

Two faces have the same combinatorial type iff their face lattices are
isomorphic, and a polytope's lattice is determined by its vertex-facet
incidence, so the identity key is an exact canonical form of that incidence
matrix.  Faces with disconnected graphs are products of their components
(and two faces are isomorphic iff the components pair up isomorphically),
so their key is the sorted multiset of component keys; this keeps the
canonical-form search on connected incidences, which are small.
"""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass, field, replace

from .canon import canonical_matrix
from .faces import _pm_masks, _pms, facets, f_vector
from .graphs import FaceGraph, _popcount, components, dimension, graph_to_json

POINT_CANON = b"POINT"


@dataclass(frozen=True)
class VertexFacetIncidence:
    v: int
    f: int
    rows: tuple[int, ...]  # per-vertex bitmask over facets

    def __post_init__(self):
        if len(self.rows) != self.v:
            raise ValueError("one row per vertex required")
        full = (1 << self.f) - 1
        if self.v > 1:
            if len(set(self.rows)) != self.v:
                raise ValueError("two vertices lie on the same facet set")
            if any(r == full for r in self.rows):
                raise ValueError("a vertex lies on all facets")
        cols = 0
        for r in self.rows:
            cols |= r
        if cols != full:
            raise ValueError("some facet contains no vertex")


@dataclass(frozen=True)
class TypeFingerprint:
    dim: int
    canon: bytes
    fvec: tuple[int, ...] | None = None

    def digest(self) -> str:
        import hashlib

        return hashlib.sha256(self.canon).hexdigest()[:16]


def vertex_facet_incidence(g: FaceGraph) -> VertexFacetIncidence:
    """Rows indexed by matching order, columns by facet order."""
    if dimension(g) < 1:
        raise ValueError("incidence needs dimension >= 1")
    fs = facets(g)
    masks = _pm_masks(g)
    rows = []
    for m in masks:
        bits = 0
        for j, f in enumerate(fs):
            if m & ~f.mask == 0:
                bits |= 1 << j
        rows.append(bits)
    return VertexFacetIncidence(len(masks), len(fs), tuple(rows))


def canonicalize(inc: VertexFacetIncidence) -> bytes:
    """Canonical bytes, invariant under vertex and facet permutations."""
    return canonical_matrix(inc.rows, inc.v, inc.f)


def _component_graph(g: FaceGraph, up: list[int], low: list[int]) -> FaceGraph:
    pos = {v: i for i, v in enumerate(sorted(low))}
    rows = []
    for u in sorted(up):
        r = g.rows[u]
        mask = 0
        while r:
            v = (r & -r).bit_length() - 1
            r &= r - 1
            mask |= 1 << pos[v]
        rows.append(mask)
    return FaceGraph(len(up), tuple(rows))


def _connected_canon(g: FaceGraph) -> bytes:
    return b"C:" + canonicalize(vertex_facet_incidence(g))


def combine_factor_canons(canons: list[bytes]) -> bytes:
    """Type key of a product from the keys of its positive-dimension factors."""
    if not canons:
        return POINT_CANON
    if len(canons) == 1:
        return canons[0]
    return b"P:" + b"|".join(sorted(canons))


def type_key(g: FaceGraph) -> tuple[int, bytes]:
    """(dimension, canonical bytes); cheap form of the fingerprint."""
    dim = dimension(g)
    factor_canons = []
    for up, low in components(g):
        sub = _component_graph(g, up, low)
        if sub.m - 2 * sub.n + 1 > 0:
            factor_canons.append(_connected_canon(sub))
    return dim, combine_factor_canons(factor_canons)


def fingerprint(g: FaceGraph, with_fvec: bool = True) -> TypeFingerprint:
    dim, canon = type_key(g)
    fvec = None
    if with_fvec and dim >= 1:
        fvec = f_vector(g)
    return TypeFingerprint(dim, canon, fvec)


# -- reference types used as oracles all over the test and verify suites ----

def segment_graph() -> FaceGraph:
    return FaceGraph.from_edges(2, [(0, 0), (0, 1), (1, 0), (1, 1)])


def triangle_graph() -> FaceGraph:
    return FaceGraph.from_edges(
        3, [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2), (2, 1), (2, 2)]
    )


def cube_graph(d: int) -> FaceGraph:
    """d disjoint 4-cycles; the point (d = 0) is a single edge."""
    if d == 0:
        return FaceGraph.from_edges(1, [(0, 0)])
    edges = []
    for i in range(d):
        a, b = 2 * i, 2 * i + 1
        edges += [(a, a), (a, b), (b, a), (b, b)]
    return FaceGraph.from_edges(2 * d, edges)


_cube_keys: dict[int, tuple[int, bytes]] = {}


def cube_fingerprint(d: int) -> tuple[int, bytes]:
    if d not in _cube_keys:
        _cube_keys[d] = type_key(cube_graph(d)) if d > 0 else (0, POINT_CANON)
    return _cube_keys[d]


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

def _rep_sort_key(g: FaceGraph) -> tuple:
    return (g.n, g.m, tuple(sorted(g.edges())))


@dataclass
class CatalogEntry:
    dim: int
    canon: bytes
    bdim: int
    rep: FaceGraph
    fvec: tuple[int, ...] | None = None
    flags: dict = field(default_factory=dict)
    recipe: str | None = None

    def merged_with(self, other: "CatalogEntry") -> "CatalogEntry":
        assert (self.dim, self.canon) == (other.dim, other.canon)
        rep = min(self.rep, other.rep, key=_rep_sort_key)
        flags = dict(other.flags)
        flags.update({k: v for k, v in self.flags.items() if v is not None})
        return CatalogEntry(
            dim=self.dim,
            canon=self.canon,
            bdim=min(self.bdim, other.bdim),
            rep=rep,
            fvec=self.fvec or other.fvec,
            flags=flags,
            recipe=self.recipe or other.recipe,
        )


class Catalog:
    """Combinatorial types seen so far, keyed by (dimension, canonical form).

    Merging keeps the smallest Birkhoff dimension and the smallest
    representative, so per-shard catalogs combine associatively and
    commutatively.
    """

    def __init__(self):
        self.entries: dict[tuple[int, bytes], CatalogEntry] = {}

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.sorted_entries())

    def sorted_entries(self) -> list[CatalogEntry]:
        return [self.entries[k] for k in sorted(self.entries)]

    def insert(
        self,
        g: FaceGraph,
        n_context: int,
        key: tuple[int, bytes] | None = None,
        flags: dict | None = None,
        recipe: str | None = None,
    ) -> CatalogEntry:
        dim, canon = key if key is not None else type_key(g)
        entry = CatalogEntry(
            dim=dim,
            canon=canon,
            bdim=n_context,
            rep=g,
            flags=flags or {},
            recipe=recipe,
        )
        k = (dim, canon)
        if k in self.entries:
            entry = entry.merged_with(self.entries[k])
        self.entries[k] = entry
        return entry

    def merge(self, other: "Catalog") -> None:
        for k, e in other.entries.items():
            if k in self.entries:
                self.entries[k] = e.merged_with(self.entries[k])
            else:
                self.entries[k] = e

    def by_dim(self, dim: int) -> list[CatalogEntry]:
        return [e for e in self.sorted_entries() if e.dim == dim]

    # -- persistence ---------------------------------------------------------

    def to_jsonl(self) -> str:
        lines = []
        for e in self.sorted_entries():
            doc = {
                "dim": e.dim,
                "bdim": e.bdim,
                "canon": base64.b64encode(e.canon).decode("ascii"),
                "fvec": list(e.fvec) if e.fvec is not None else None,
                "flags": {k: e.flags[k] for k in sorted(e.flags)},
                "rep": json.loads(graph_to_json(e.rep)),
            }
            if e.recipe:
                doc["recipe"] = e.recipe
            lines.append(json.dumps(doc, separators=(", ", ": ")))
        return "\n".join(lines) + ("\n" if lines else "")

    @staticmethod
    def from_jsonl(text: str) -> "Catalog":
        cat = Catalog()
        for line in text.splitlines():
            if not line.strip():
                continue
            doc = json.loads(line)
            rep = FaceGraph.from_edges(
                doc["rep"]["n"], [tuple(e) for e in doc["rep"]["edges"]]
            )
            canon = base64.b64decode(doc["canon"])
            entry = CatalogEntry(
                dim=doc["dim"],
                canon=canon,
                bdim=doc["bdim"],
                rep=rep,
                fvec=tuple(doc["fvec"]) if doc.get("fvec") else None,
                flags=doc.get("flags", {}),
                recipe=doc.get("recipe"),
            )
            cat.entries[(entry.dim, entry.canon)] = entry
        return cat


def catalog_insert(cat: Catalog, g: FaceGraph, n_context: int) -> Catalog:
    """Insert g as found in B_{n_context}; keeps minimal bdim and rep."""
    cat.insert(g, n_context)
    return cat
