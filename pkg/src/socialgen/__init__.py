"""Synthetic simple directed social graphs with correlated degrees and high clustering."""

from .degrees import (
    CorrelationTriple,
    DegreeModel,
    DegreeSequences,
    ScaledChiSquare,
    fit_degree_model,
    sample_correlated_degrees,
)
from .graph import DegreeTriple, DirectedGraph, GraphError
from .metrics import GraphStats, stats_report
from .pipeline import RunConfig, run_pipeline
from .processes import SpreadSpec, SpreadSummary, run_experiment
from .rewire import RewireConfig, RewireReport, rewire_graph
from .sampler import build_graph

__version__ = "0.1.0"
