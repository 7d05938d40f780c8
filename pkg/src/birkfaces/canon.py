"""Exact canonical forms of 0/1 matrices under row and column permutations.

The canonical form drives combinatorial-type identity (vertex-facet
incidences) and cheap duplicate rejection of bipartite graphs during search,
so it must be exact: equal bytes if and only if the matrices differ by a row
permutation and a column permutation.

Method: the matrix value of a column order is the descending-sorted tuple of
row bitmasks it induces.  We search over column orders, restricted at every
step to the first cell of an iterated bipartite refinement (so the search
only branches over genuinely ambiguous columns), and keep the maximum.
Because rows are sorted, the value of a partial column order is the sequence
of "split signatures" (per row-group counts of ones), which we compare
lexicographically for pruning.  Column permutations discovered to fix the
best value are automorphisms and prune sibling branches (orbit pruning), so
the highly symmetric inputs (cubes, pyramids over cubes) stay cheap.
"""

from __future__ import annotations

from typing import Sequence

_popcount = getattr(int, "bit_count", None) or (lambda x: bin(x).count("1"))


def canonical_matrix(rows: Sequence[int], n_rows: int, n_cols: int) -> bytes:
    """Canonical byte string; equal iff matrices are row/column-iso."""
    sigs = _canonical_sigs(list(rows), n_rows, n_cols)
    return repr((n_rows, n_cols, sigs)).encode("ascii")


def _canonical_sigs(rows: list[int], n_rows: int, n_cols: int):
    if n_rows == 0 or n_cols == 0:
        return ()
    col_bits = [0] * n_cols
    for r, mask in enumerate(rows):
        m = mask
        while m:
            j = (m & -m).bit_length() - 1
            m &= m - 1
            col_bits[j] |= 1 << r

    best: list[tuple[int, ...]] | None = None
    best_assign: list[int] | None = None
    gens: list[dict[int, int]] = []

    def refine_cols(row_groups: list[list[int]], col_classes: list[list[int]]):
        # iterated refinement; row side starts from the prefix groups
        rcls = [list(g) for g in row_groups]
        ccls = [list(c) for c in col_classes]
        while True:
            changed = False
            cmasks = [_mask(c) for c in ccls]
            nxt = []
            for cls in rcls:
                if len(cls) == 1:
                    nxt.append(cls)
                    continue
                buckets: dict[tuple, list[int]] = {}
                for r in cls:
                    key = tuple(_popcount(rows[r] & cm) for cm in cmasks)
                    buckets.setdefault(key, []).append(r)
                if len(buckets) > 1:
                    changed = True
                for key in sorted(buckets):
                    nxt.append(buckets[key])
            rcls = nxt
            rmasks = [_mask(c) for c in rcls]
            nxt = []
            for cls in ccls:
                if len(cls) == 1:
                    nxt.append(cls)
                    continue
                buckets = {}
                for j in cls:
                    key = tuple(_popcount(col_bits[j] & rm) for rm in rmasks)
                    buckets.setdefault(key, []).append(j)
                if len(buckets) > 1:
                    changed = True
                for key in sorted(buckets):
                    nxt.append(buckets[key])
            ccls = nxt
            if not changed:
                return ccls

    def step(row_groups: list[list[int]], j: int):
        """Assign column j: split signature and the refined row grouping."""
        sig = []
        groups = []
        for grp in row_groups:
            ones = [r for r in grp if rows[r] >> j & 1]
            sig.append(len(ones))
            if ones:
                groups.append(ones)
            zeros = [r for r in grp if not rows[r] >> j & 1]
            if zeros:
                groups.append(zeros)
        return tuple(sig), groups

    def in_done_orbit(j: int, done: list[int], assigned: list[int]) -> bool:
        if not done or not gens:
            return False
        fixing = [g for g in gens if all(g[a] == a for a in assigned)]
        if not fixing:
            return False
        seen = {j}
        frontier = [j]
        while frontier:
            x = frontier.pop()
            for g in fixing:
                y = g[x]
                if y in seen:
                    continue
                if y in done:
                    return True
                seen.add(y)
                frontier.append(y)
        return False

    def dfs(row_groups, col_classes, assigned, cur):
        nonlocal best, best_assign
        base = len(cur)  # restore shared state on every exit path
        while True:
            ccls = refine_cols(row_groups, col_classes)
            if not ccls:
                if best is None or cur > best:
                    best = list(cur)
                    best_assign = list(assigned)
                elif cur == best and best_assign is not None:
                    perm = {b: a for a, b in zip(assigned, best_assign)}
                    if any(perm[k] != k for k in perm):
                        gens.append(perm)
                break
            cell = ccls[0]
            if len(cell) == 1:
                j = cell[0]
                sig, row_groups = step(row_groups, j)
                cur.append(sig)
                assigned.append(j)
                if best is not None and cur < best[: len(cur)]:
                    break
                col_classes = ccls[1:]
                continue
            scored = sorted(
                ((step(row_groups, j), j) for j in cell),
                key=lambda t: t[0][0],
                reverse=True,
            )
            done: list[int] = []
            for (sig, groups), j in scored:
                if best is not None and cur + [sig] < best[: len(cur) + 1]:
                    break  # scored is sorted; everything after is worse
                if in_done_orbit(j, done, assigned):
                    done.append(j)
                    continue
                rest = [c for c in cell if c != j]
                child = ([rest] if rest else []) + ccls[1:]
                cur.append(sig)
                assigned.append(j)
                dfs(groups, child, assigned, cur)
                cur.pop()
                assigned.pop()
                done.append(j)
            break
        del cur[base:]
        del assigned[base:]

    dfs([list(range(n_rows))], [list(range(n_cols))], [], [])
    assert best is not None
    return tuple(best)


def _mask(idxs: list[int]) -> int:
    m = 0
    for i in idxs:
        m |= 1 << i
    return m


def canonical_bipartite_graph(n: int, rows: Sequence[int]) -> bytes:
    """Canonical form of a bipartite graph, layer swap included."""
    cols = [0] * n
    for u, r in enumerate(rows):
        m = r
        while m:
            v = (m & -m).bit_length() - 1
            m &= m - 1
            cols[v] |= 1 << u
    a = canonical_matrix(rows, n, n)
    b = canonical_matrix(cols, n, n)
    return a if a >= b else b
