"""Shared fixture graphs (figures from the source material) and oracles."""

from __future__ import annotations

import pytest

from birkfaces.graphs import FaceGraph


def fg(n, edges):
    return FaceGraph.from_edges(n, edges)


# 10-edge graph on 4 nodes per layer: the running example (a 3-face of B_4
# with 5 vertices, also drawn as the square pyramid and as the ear
# decomposition example)
SQUARE_PYRAMID = fg(
    4,
    [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2), (3, 3)],
)

SEGMENT = fg(2, [(0, 0), (0, 1), (1, 0), (1, 1)])

TRIANGLE = fg(3, [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2), (2, 1), (2, 2)])

K33 = fg(3, [(u, v) for u in range(3) for v in range(3)])

# reducible example: node u2 (degree 2) whose neighbors share only u2
REDUCIBLE = fg(
    4,
    [
        (0, 0), (0, 1), (0, 3),
        (1, 0), (1, 1), (1, 3),
        (2, 1), (2, 2),
        (3, 0), (3, 2), (3, 3),
    ],
)

# two irreducible graphs defining the 4-simplex on different layer sizes
SIMPLEX4_A = fg(
    4,
    [
        (0, 0), (0, 1), (0, 2),
        (1, 1), (1, 2),
        (2, 0), (2, 1), (2, 2), (2, 3),
        (3, 2), (3, 3),
    ],
)
SIMPLEX4_B = fg(
    5,
    [
        (0, 0), (0, 2),
        (1, 1), (1, 2),
        (2, 0), (2, 1), (2, 2), (2, 3), (2, 4),
        (3, 2), (3, 3),
        (4, 2), (4, 4),
    ],
)

# common-neighbor example: N({v0,v1,v2}) = {u0, u1}
COMMON_NEIGHBORS = fg(
    6,
    [
        (0, 0), (0, 1), (0, 2),
        (1, 0), (1, 1), (1, 2),
        (2, 2), (2, 4),
        (3, 2), (3, 3),
        (4, 0), (4, 1), (4, 3), (4, 5),
        (5, 3), (5, 4), (5, 5),
    ],
)

# graph with a triangle through the three edges at node u3
TRIANGLE_IN_G = fg(
    5,
    [
        (0, 0), (0, 2),
        (1, 1), (1, 3),
        (2, 1), (2, 2), (2, 3),
        (3, 0), (3, 2), (3, 3), (3, 4),
        (4, 3), (4, 4),
    ],
)

# 3-regular graph of a 7-face with 17 < 3(7-1) facets
REGULAR17 = fg(
    6,
    [
        (0, 0), (0, 1), (0, 2),
        (1, 0), (1, 1), (1, 2),
        (2, 0), (2, 1), (2, 3),
        (3, 2), (3, 4), (3, 5),
        (4, 3), (4, 4), (4, 5),
        (5, 3), (5, 4), (5, 5),
    ],
)

# pyramid over a 3-cube: the long edge (5,0) lies in a unique matching
PYR_CUBE3 = fg(
    6,
    [
        (0, 0), (0, 1), (1, 0), (1, 1), (1, 2),
        (2, 2), (2, 3), (3, 2), (3, 3), (3, 4),
        (4, 4), (4, 5), (5, 4), (5, 5), (5, 0),
    ],
)

# the circularly connected squares on 2d-2 = 12 nodes (d = 7)
def _pyr_cube_circular(d):
    edges = []
    k = d - 1
    for i in range(k):
        a, b = 2 * i, 2 * i + 1
        edges += [(a, a), (a, b), (b, a), (b, b)]
    for i in range(k):
        edges.append((2 * i + 1, (2 * i + 2) % (2 * k)))
    return fg(2 * k, edges)


PYR_CUBE_12 = _pyr_cube_circular(7)

# two representations of the 3-simplex
TWOREP_A = fg(
    4,
    [
        (0, 0), (0, 1),
        (1, 0), (1, 1), (1, 2), (1, 3),
        (2, 1), (2, 2),
        (3, 1), (3, 3),
    ],
)
TWOREP_B = fg(
    3,
    [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)],
)

# the six non-product 4-face graphs
D4_SIMPLEX = fg(
    4,
    [
        (0, 0), (0, 1), (0, 2),
        (1, 1), (1, 2),
        (2, 0), (2, 1), (2, 2), (2, 3),
        (3, 2), (3, 3),
    ],
)
D4_JOIN_EDGE_SQUARE = fg(
    4,
    [
        (0, 0), (0, 1),
        (1, 0), (1, 1), (1, 2),
        (2, 1), (2, 2), (2, 3),
        (3, 0), (3, 2), (3, 3),
    ],
)
D4_PYR_TRIPRISM = fg(
    5,
    [
        (0, 0), (0, 1),
        (1, 0), (1, 1), (1, 2),
        (2, 1), (2, 2), (2, 3),
        (3, 3), (3, 4),
        (4, 0), (4, 3), (4, 4),
    ],
)
D4_WEDGE_W1 = fg(
    5,
    [
        (0, 0), (0, 1),
        (1, 0), (1, 1), (1, 2),
        (2, 1), (2, 2), (2, 3),
        (3, 2), (3, 3), (3, 4),
        (4, 3), (4, 4),
    ],
)
D4_PYR_CUBE = fg(
    6,
    [
        (0, 0), (0, 1),
        (1, 0), (1, 1), (1, 2),
        (2, 2), (2, 3),
        (3, 2), (3, 3), (3, 4),
        (4, 4), (4, 5),
        (5, 0), (5, 4), (5, 5),
    ],
)
D4_B3 = K33
D4_NON_PRODUCTS = [
    D4_SIMPLEX,
    D4_JOIN_EDGE_SQUARE,
    D4_PYR_TRIPRISM,
    D4_WEDGE_W1,
    D4_PYR_CUBE,
    D4_B3,
]

# degree-bound example on 6 nodes (dimension 4, maximum degree 3 = 2d-n+1)
MAXDEG_N6 = fg(
    6,
    [
        (0, 0), (0, 1), (0, 3),
        (1, 1), (1, 2), (1, 4),
        (2, 0), (2, 2), (2, 5),
        (3, 0), (3, 3),
        (4, 1), (4, 4),
        (5, 2), (5, 5),
    ],
)

# wedge construction example: facet defining set C = {(1,2),(2,1)} on the
# square pyramid graph, with the pictured outputs
CORWEDGE_IN = SQUARE_PYRAMID
CORWEDGE_C = frozenset({(1, 2), (2, 1)})
CORWEDGE_FACET_OUT = fg(
    5,
    [
        (0, 0), (0, 1),
        (1, 0), (1, 1), (1, 2),
        (2, 1), (2, 2), (2, 3), (2, 4),
        (3, 2), (3, 3),
        (4, 1), (4, 4),
    ],
)
CORWEDGE_COMPLEMENT_OUT = fg(
    6,
    [
        (0, 0), (0, 1),
        (1, 0), (1, 1), (1, 2),
        (2, 2), (2, 3), (2, 4),
        (3, 2), (3, 3),
        (4, 1), (4, 4), (4, 5),
        (5, 4), (5, 5),
    ],
)

SMALL_ELEMENTARY = [SEGMENT, TRIANGLE, K33, SQUARE_PYRAMID, TWOREP_B, TWOREP_A]


@pytest.fixture(scope="session")
def catalog6():
    """The full d <= 6 classification, shared by the acceptance tests."""
    from birkfaces.enumeration import classify

    return classify(6)
