"""deltasparse: sparse (min,+) graph kernels with a bucketed shortest-path
solver on top, in unfused, fused, and range-parallel flavors."""

from .core import (
    BOOL_OR_AND,
    MIN_PLUS,
    PLUS_TIMES,
    Semiring,
    SparseMatrix,
    SparseVector,
    mask_from_indices,
    matrix_build,
    matrix_transpose_view,
    vector_build,
)
from .fused import (
    BackendChoice,
    bucket_bounds,
    fused_bucket_update,
    fused_masked_relax,
    parallel_execute,
    partition_ranges,
)
from .generate import random_connected_unit_graph, random_graph
from .io import (
    GraphFile,
    GraphLoadError,
    LabelMap,
    ParseError,
    ValidationError,
    load_edge_list,
    load_graph,
    load_matrix_market,
)
from .ops import (
    LESS,
    MIN,
    OR,
    PLUS,
    TIMES,
    BinaryOp,
    UnaryPredicate,
    always_true,
    apply_vector,
    ewise_add_vector,
    ewise_mult_vector,
    filter_matrix,
    filter_vector,
    greater_than,
    in_half_open,
    positive_at_most,
    vxm_min_plus,
)
from .sssp import (
    SsspResult,
    SsspState,
    compute_bucket,
    delta_stepping,
    dijkstra_oracle,
    relax_heavy,
    relax_light_phase,
    split_edges,
)

__version__ = "0.1.0"

__all__ = [
    "BOOL_OR_AND",
    "MIN_PLUS",
    "PLUS_TIMES",
    "Semiring",
    "SparseMatrix",
    "SparseVector",
    "mask_from_indices",
    "matrix_build",
    "matrix_transpose_view",
    "vector_build",
    "BackendChoice",
    "bucket_bounds",
    "fused_bucket_update",
    "fused_masked_relax",
    "parallel_execute",
    "partition_ranges",
    "random_connected_unit_graph",
    "random_graph",
    "GraphFile",
    "GraphLoadError",
    "LabelMap",
    "ParseError",
    "ValidationError",
    "load_edge_list",
    "load_graph",
    "load_matrix_market",
    "LESS",
    "MIN",
    "OR",
    "PLUS",
    "TIMES",
    "BinaryOp",
    "UnaryPredicate",
    "always_true",
    "apply_vector",
    "ewise_add_vector",
    "ewise_mult_vector",
    "filter_matrix",
    "filter_vector",
    "greater_than",
    "in_half_open",
    "positive_at_most",
    "vxm_min_plus",
    "SsspResult",
    "SsspState",
    "compute_bucket",
    "delta_stepping",
    "dijkstra_oracle",
    "relax_heavy",
    "relax_light_phase",
    "split_edges",
    "__version__",
]
