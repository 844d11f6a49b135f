"""Polynomial preferential-attachment graphs: generator, observables, theory and audits."""
from ._backend import BACKEND
from .analytics import (
    count_p2,
    count_triangles,
    degree_histogram,
    dnn_curve,
    fit_loglog_slope,
    fit_power_law,
    global_clustering,
    stats_report,
)
from .generator import (
    GenerationConfig,
    GrowthTrace,
    exact_step_distribution,
    generate,
    grow_step,
    incremental_triangle_delta,
)
from .graph import EdgeRecord, MultiGraph, SeedGraphSpec, SeedKind, parse_edge_list, seed_graph, serialize_edge_list
from .model import (
    ModelConstants,
    ThreeParamSpec,
    WeightTable,
    model_constants,
    preset,
    three_param_to_table,
    validate_table,
)
from .rng import RandomStream, derive_stream

__version__ = "0.1.0"
