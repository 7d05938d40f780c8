"""Faces of Birkhoff polytopes as elementary bipartite graphs."""

__version__ = "0.1.0"

from .graphs import (
    BipartiteMultiGraph,
    FaceGraph,
    LayeredNode,
    NotElementaryError,
    PerfectMatching,
    components,
    dimension,
    ear_count,
    enumerate_perfect_matchings,
    graph_from_json,
    graph_from_permutations,
    graph_to_json,
    has_pm_containing,
    is_elementary,
    resolution,
)
from .reduction import (
    PartnerReport,
    ReductionTrace,
    bound_checks,
    fully_reduce,
    is_irreducible,
    is_reducible_node,
    minimal_nodes,
    partners,
    reduce_at,
)
from .faces import (
    FaceLattice,
    FaceSubgraph,
    FacetDefiningSet,
    all_faces,
    closure,
    f_vector,
    facet_defining_sets,
    facets,
    has_triangle,
    is_cube,
    is_product,
    is_pyramid,
)
from .types import (
    Catalog,
    CatalogEntry,
    TypeFingerprint,
    VertexFacetIncidence,
    canonicalize,
    catalog_insert,
    fingerprint,
    type_key,
    vertex_facet_incidence,
)
from .constructions import (
    ConstructionRecipe,
    InvalidPyramidalError,
    PyramidalSet,
    circular_connection,
    find_pyramidal_sets,
    joined_product,
    product,
    pyramid,
    reduced_joined_product,
    wedge_over_complement,
    wedge_over_facet,
)
from .enumeration import (
    ClassificationReport,
    classify,
    count_product_types,
    generate_face_graphs,
    verify_theorems,
)
