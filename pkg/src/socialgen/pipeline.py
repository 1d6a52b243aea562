"""fit -> generate -> rewire -> measure -> simulate, with stage-indexed seeding.

Each stage draws from ``np.random.default_rng([master_seed, STAGES[name]])``.
Changing parameters of a later stage therefore never alters what an
earlier stage produced.
"""

from __future__ import annotations

import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .degrees import DegreeModel, DegreeSequences, sample_correlated_degrees
from .graph import DirectedGraph
from .metrics import ASPL_SAMPLE_CAP, SPECTRUM_CAP, GraphStats, stats_report
from .processes import SpreadSpec, SpreadSummary, run_experiment
from .rewire import RewireConfig, RewireReport, rewire_graph
from .sampler import build_from_sequences

log = logging.getLogger(__name__)

STAGES = {"degrees": 0, "edges": 1, "rewire": 2, "metrics": 3, "simulate": 4}


def stage_seed(master_seed: int, stage: str) -> list[int]:
    return [int(master_seed), STAGES[stage]]


def stage_rng(master_seed: int, stage: str) -> np.random.Generator:
    return np.random.default_rng(stage_seed(master_seed, stage))


def simulate_seed(master_seed: int, index: int) -> int:
    """Integer seed for the ``index``-th spreading experiment of a run."""
    ss = np.random.SeedSequence(stage_seed(master_seed, "simulate") + [index])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass
class RunConfig:
    master_seed: int = 0
    skip_rewiring: bool = False
    rewire: RewireConfig = field(default_factory=RewireConfig)
    spreads: list[SpreadSpec] = field(default_factory=list)
    aspl_sample_cap: int = ASPL_SAMPLE_CAP
    spectrum_cap: int = SPECTRUM_CAP
    compute_stats: bool = True


@dataclass
class PipelineResult:
    graph: DirectedGraph
    degrees: DegreeSequences
    stats: Optional[GraphStats] = None
    rewire: Optional[RewireReport] = None
    spreads: list[SpreadSummary] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)


@contextmanager
def timed(timings: dict, name: str):
    t0 = time.perf_counter()
    yield
    timings[name] = time.perf_counter() - t0
    log.info("stage %s took %.2fs", name, timings[name])


def generate(model: DegreeModel, master_seed: int) -> tuple[DirectedGraph, DegreeSequences]:
    """Intermediary graph (before rewiring) for ``model``."""
    seqs = sample_correlated_degrees(model, stage_rng(master_seed, "degrees"))
    return build_from_sequences(seqs, stage_rng(master_seed, "edges")), seqs


def rewire(g: DirectedGraph, cfg: RewireConfig, master_seed: int) -> RewireReport:
    return rewire_graph(g, cfg, stage_rng(master_seed, "rewire"))


def run_pipeline(model: DegreeModel, cfg: RunConfig) -> PipelineResult:
    timings: dict[str, float] = {}
    with timed(timings, "generate"):
        g, seqs = generate(model, cfg.master_seed)
    result = PipelineResult(graph=g, degrees=seqs, timings=timings)
    if not cfg.skip_rewiring:
        with timed(timings, "rewire"):
            result.rewire = rewire(g, cfg.rewire, cfg.master_seed)
    if cfg.compute_stats:
        with timed(timings, "metrics"):
            result.stats = stats_report(
                g,
                aspl_sample_cap=cfg.aspl_sample_cap,
                seed=int(stage_rng(cfg.master_seed, "metrics").integers(2**63)),
            )
    with timed(timings, "simulate"):
        for spec in cfg.spreads:
            result.spreads.append(run_experiment(g, spec))
    return result
