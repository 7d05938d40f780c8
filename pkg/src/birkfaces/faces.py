"""Face structure of the polytope a face graph encodes.

Faces of face(G) are exactly the subgraphs of G that equal the union of
their own perfect matchings ("face subgraphs").  Everything here works on
edge bitmasks over the n*n grid: a perfect matching is a mask, a face
subgraph is a mask, and the closure of an arbitrary edge set is the union
of the matching masks it contains.  Facets are the inclusion-maximal proper
closures obtained by forbidding one edge (one x_ij = 0 each); the
Brualdi-Gibson characterization of facet defining sets is kept as a
validation oracle on top.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

from .graphs import (
    FaceGraph,
    PerfectMatching,
    _popcount,
    components,
    dimension,
    enumerate_matchings_rows,
    mask_to_rows,
    matching_mask,
    rows_to_mask,
)

DEFAULT_FACE_CAP = 10**7


class CapExceededError(RuntimeError):
    """Face lattice would exceed the configured element cap."""


class CharacterizationMismatchError(AssertionError):
    """A computed facet fits neither case of the facet theorem."""


@dataclass(frozen=True)
class FaceSubgraph:
    """A face of face(host): an edge mask equal to the union of its matchings."""

    host: FaceGraph
    mask: int

    def rows(self) -> tuple[int, ...]:
        return mask_to_rows(self.mask, self.host.n)

    def edges(self) -> list[tuple[int, int]]:
        n = self.host.n
        out = []
        m = self.mask
        while m:
            b = (m & -m).bit_length() - 1
            m &= m - 1
            out.append((b // n, b % n))
        return out

    def dim(self) -> int:
        return _mask_dimension(self.host.n, self.mask)

    def matchings(self) -> list[PerfectMatching]:
        masks = _pm_masks(self.host)
        pms = _pms(self.host)
        return [pms[i] for i, m in enumerate(masks) if m & ~self.mask == 0]


@dataclass(frozen=True)
class FacetDefiningSet:
    host: FaceGraph
    removed: frozenset[tuple[int, int]]


@lru_cache(maxsize=4096)
def _pms(g: FaceGraph) -> tuple[PerfectMatching, ...]:
    return tuple(enumerate_matchings_rows(g.rows, g.n))


@lru_cache(maxsize=4096)
def _pm_masks(g: FaceGraph) -> tuple[int, ...]:
    return tuple(matching_mask(pm, g.n) for pm in _pms(g))


def _mask_dimension(n: int, mask: int) -> int:
    """Dimension of a face subgraph mask: m' - 2n' + k' (empty face: -1)."""
    if mask == 0:
        return -1
    rows = mask_to_rows(mask, n)
    m = _popcount(mask)
    sub = FaceGraph(n, rows)
    k = 0
    covered = 0
    for up, low in components(sub):
        if up and low:  # skip nodes the subgraph does not touch
            k += 1
            covered += len(up) + len(low)
    return m - covered + k


def closure(host: FaceGraph, keep) -> FaceSubgraph:
    """Largest face subgraph inside `keep` (mask, edge list, or subgraph)."""
    if isinstance(keep, FaceSubgraph):
        keep_mask = keep.mask
    elif isinstance(keep, int):
        keep_mask = keep
    else:
        keep_mask = 0
        for u, v in keep:
            keep_mask |= 1 << (u * host.n + v)
    out = 0
    for m in _pm_masks(host):
        if m & ~keep_mask == 0:
            out |= m
    return FaceSubgraph(host, out)


def closure_of_matchings(host: FaceGraph, idxs) -> FaceSubgraph:
    """Smallest face containing the given matchings (by index)."""
    masks = _pm_masks(host)
    union = 0
    for i in idxs:
        union |= masks[i]
    return closure(host, union)


def _maximal_proper_closures(host: FaceGraph, face_mask: int) -> list[int]:
    """Facet masks of the face given by face_mask (its own facets)."""
    n = host.n
    masks = [m for m in _pm_masks(host) if m & ~face_mask == 0]
    cands = set()
    mm = face_mask
    while mm:
        bit = mm & -mm
        mm &= mm - 1
        cl = 0
        for m in masks:
            if not m & bit:
                cl |= m
        if cl != face_mask:
            cands.add(cl)
    cands.discard(0)
    out = []
    for c in cands:
        if not any(c != o and c & ~o == 0 for o in cands):
            out.append(c)
    return sorted(out)


def facets(g: FaceGraph) -> list[FaceSubgraph]:
    """Facets of face(g): maximal proper single-edge-avoidance closures."""
    if dimension(g) < 1:
        raise ValueError("facets need dimension >= 1")
    full = rows_to_mask(g.rows, g.n)
    return [FaceSubgraph(g, m) for m in _maximal_proper_closures(g, full)]


def facet_defining_sets(g: FaceGraph) -> list[FacetDefiningSet]:
    """Complement edge sets of the facets, validated against the two-case
    facet characterization (single missing edge, or circular split)."""
    if len(components(g)) != 1:
        raise ValueError("facet defining sets need a connected graph")
    n = g.n
    full = rows_to_mask(g.rows, g.n)
    out = []
    seen: list[frozenset[tuple[int, int]]] = []
    for f in facets(g):
        missing = full & ~f.mask
        removed = frozenset((b // n, b % n) for b in _bits_of(missing))
        _validate_facet(g, f, removed)
        for other in seen:
            if other & removed:
                raise CharacterizationMismatchError(
                    "facet defining sets are not pairwise disjoint"
                )
        seen.append(removed)
        out.append(FacetDefiningSet(g, removed))
    return out


def _bits_of(mask: int) -> list[int]:
    out = []
    while mask:
        b = (mask & -mask).bit_length() - 1
        mask &= mask - 1
        out.append(b)
    return out


def _validate_facet(g: FaceGraph, f: FaceSubgraph, removed) -> None:
    uppers = [u for u, _ in removed]
    lowers = [v for _, v in removed]
    if len(set(uppers)) != len(removed) or len(set(lowers)) != len(removed):
        raise CharacterizationMismatchError("facet defining set is not a matching")
    sub = FaceGraph(g.n, f.rows())
    comps = [c for c in components(sub) if c[0]]
    if len(removed) == 1:
        if len(comps) != 1:
            raise CharacterizationMismatchError(
                "single-edge facet must stay connected"
            )
        return
    if len(comps) != len(removed):
        raise CharacterizationMismatchError(
            "circular facet must split into one part per removed edge"
        )
    comp_of_upper = {}
    comp_of_lower = {}
    for i, (up, low) in enumerate(comps):
        for u in up:
            comp_of_upper[u] = i
        for v in low:
            comp_of_lower[v] = i
    succ = {}
    for u, v in removed:
        a, b = comp_of_upper[u], comp_of_lower[v]
        if a == b or a in succ:
            raise CharacterizationMismatchError("removed edges do not form a cycle")
        succ[a] = b
    seen = {0}
    cur = 0
    for _ in range(len(comps) - 1):
        cur = succ[cur]
        if cur in seen:
            raise CharacterizationMismatchError("removed edges do not form one cycle")
        seen.add(cur)
    if succ[cur] != 0:
        raise CharacterizationMismatchError("removed edges do not close the cycle")


@dataclass(frozen=True)
class FaceLattice:
    host: FaceGraph
    levels: tuple[tuple[int, ...], ...]  # levels[i] = masks of dimension i-1

    def level(self, dim: int) -> tuple[int, ...]:
        return self.levels[dim + 1]

    @property
    def top_dim(self) -> int:
        return len(self.levels) - 2

    def size(self) -> int:
        return sum(len(lv) for lv in self.levels)

    def to_json(self) -> str:
        doc = {
            "n": self.host.n,
            "edges": sorted(self.host.edges()),
            "levels": {
                str(i - 1): [hex(m) for m in lv] for i, lv in enumerate(self.levels)
            },
        }
        return json.dumps(doc, separators=(", ", ": ")) + "\n"


def all_faces(g: FaceGraph, cap: int = DEFAULT_FACE_CAP) -> FaceLattice:
    """Every face subgraph, grouped by dimension, by downward recursion.

    Includes the empty face (dimension -1) and g itself.
    """
    d = dimension(g)
    full = rows_to_mask(g.rows, g.n)
    by_dim: dict[int, set[int]] = {d: {full}, -1: {0}}
    stack = [(full, d)]
    seen = {full, 0}
    while stack:
        mask, dim = stack.pop()
        if dim <= 0:
            continue
        for sub in _maximal_proper_closures(g, mask):
            if sub in seen:
                continue
            seen.add(sub)
            if len(seen) > cap:
                raise CapExceededError(f"face lattice exceeds cap {cap}")
            sd = _mask_dimension(g.n, sub)
            by_dim.setdefault(sd, set()).add(sub)
            stack.append((sub, sd))
    levels = tuple(
        tuple(sorted(by_dim.get(i, ()))) for i in range(-1, d + 1)
    )
    return FaceLattice(g, levels)


def f_vector(g: FaceGraph, cap: int = DEFAULT_FACE_CAP) -> tuple[int, ...]:
    """Face counts (f_0, ..., f_{d-1}); empty face and g itself excluded."""
    lat = all_faces(g, cap=cap)
    d = lat.top_dim
    return tuple(len(lat.level(i)) for i in range(0, d))


def is_pyramid(g: FaceGraph) -> PerfectMatching | None:
    """Apex matching if face(g) is a pyramid, else None.

    A polytope is a pyramid iff some vertex lies on every facet except one;
    the test runs on the vertex-facet incidence.
    """
    if dimension(g) < 1:
        return None
    fs = facets(g)
    pms = _pms(g)
    masks = _pm_masks(g)
    for i, m in enumerate(masks):
        on = sum(1 for f in fs if m & ~f.mask == 0)
        if on == len(fs) - 1:
            return pms[i]
    return None


def is_product(g: FaceGraph) -> bool:
    """True iff g has at least two components of positive dimension."""
    g.require_elementary()
    positive = 0
    for up, low in components(g):
        m = sum(_popcount(g.rows[u]) for u in up)
        if m - 2 * len(up) + 1 > 0:
            positive += 1
    return positive >= 2


def has_triangle(g: FaceGraph) -> bool:
    """Three vertices pairwise joined by edges spanning a triangle face.

    Searches triples of matchings whose pairwise closures are polytope edges
    and whose joint closure has exactly three vertices.  Graphs with maximum
    degree 2 are products of segments and skipped outright.
    """
    degs_u, degs_l = g.degrees()
    if max(max(degs_u), max(degs_l)) <= 2:
        return False
    masks = _pm_masks(g)
    v = len(masks)

    def count_inside(mask: int) -> int:
        return sum(1 for m in masks if m & ~mask == 0)

    edge_pairs = set()
    for i in range(v):
        for j in range(i + 1, v):
            if count_inside(masks[i] | masks[j]) == 2:
                edge_pairs.add((i, j))
    for i, j in sorted(edge_pairs):
        for k in range(v):
            if k == i or k == j:
                continue
            if (min(i, k), max(i, k)) not in edge_pairs:
                continue
            if (min(j, k), max(j, k)) not in edge_pairs:
                continue
            if count_inside(masks[i] | masks[j] | masks[k]) == 3:
                return True
    return False


def is_cube(g: FaceGraph) -> bool:
    """True iff the combinatorial type is the dim(g)-cube."""
    from .types import cube_fingerprint, fingerprint

    fp = fingerprint(g)
    return (fp.dim, fp.canon) == cube_fingerprint(fp.dim)


def facet_count_bound_check(g: FaceGraph) -> bool:
    """Assert the 3(d-1) facet bound; return whether it is attained."""
    d = dimension(g)
    if d < 2:
        raise ValueError("facet bound needs dimension >= 2")
    count = len(facets(g))
    if count > 3 * (d - 1):
        raise AssertionError(
            f"facet count {count} exceeds 3(d-1)={3 * (d - 1)}"
        )
    return count == 3 * (d - 1)
