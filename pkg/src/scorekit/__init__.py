"""scorekit: spectral community detection via eigenvector ratios.

Implements the ratio-of-eigenvectors family of spectral clustering
methods for degree-heterogeneous networks, a degree-corrected block
model simulator, and evaluation/benchmark utilities.
"""

__version__ = "0.1.0"

from .graphs import (
    DegreeInfo,
    Graph,
    GraphFormatError,
    degree_info,
    filter_by_label,
    largest_connected_component,
    load_graph,
    parse_edge_list,
    parse_gml,
)
from .spectral import EigenBasis, build_regularized_laplacian, top_eigenpairs
from .kmeans import KMeansResult, kmeans
from .pipeline import (
    DetectionResult,
    PipelineConfig,
    build_ratio_matrix,
    run_pipeline,
    select_vector_count,
)
from .dcbm import (
    DCBMModel,
    build_balanced_pi,
    expected_adjacency,
    make_dcbm,
    sample_adjacency,
    sample_theta,
)
from .diagnostics import (
    ErrorRate,
    ScreeRQReport,
    confusion_matrix,
    error_count,
    error_rate,
    gap_statistic,
    rayleigh_quotient,
    scree_and_rq_report,
)

__all__ = [
    "DegreeInfo",
    "Graph",
    "GraphFormatError",
    "degree_info",
    "filter_by_label",
    "largest_connected_component",
    "load_graph",
    "parse_edge_list",
    "parse_gml",
    "EigenBasis",
    "build_regularized_laplacian",
    "top_eigenpairs",
    "KMeansResult",
    "kmeans",
    "DetectionResult",
    "PipelineConfig",
    "build_ratio_matrix",
    "run_pipeline",
    "select_vector_count",
    "DCBMModel",
    "build_balanced_pi",
    "expected_adjacency",
    "make_dcbm",
    "sample_adjacency",
    "sample_theta",
    "ErrorRate",
    "ScreeRQReport",
    "confusion_matrix",
    "error_count",
    "error_rate",
    "gap_statistic",
    "rayleigh_quotient",
    "scree_and_rq_report",
]
