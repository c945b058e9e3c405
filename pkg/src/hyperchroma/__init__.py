"""Edge coloring toolkit for linear hypergraphs."""

__version__ = "0.1.0"

from hyperchroma.hypergraph import (  # noqa: E402
    Hypergraph,
    LineGraph,
    TriangleStats,
    ValidationReport,
    build_line_graph,
    count_triangles,
    max_rank,
    max_vertex_degree,
    min_rank,
    partition_dyadic,
    truncated_log,
    validate_linear,
)
