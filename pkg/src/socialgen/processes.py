"""Push-pull rumour spreading and discrete-time SIR on a frozen graph.

Both processes are synchronous: every decision in a round is made against
the state at the start of that round.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .graph import DirectedGraph
from .metrics import connected_components

log = logging.getLogger(__name__)

PUSH_PULL = "push_pull"
SIR = "sir"


def seed_count(n: int) -> int:
    """``ceil(2 ln n)`` initial nodes, at least one."""
    return max(1, math.ceil(2.0 * math.log(n))) if n > 1 else 1


def default_max_rounds(n: int) -> int:
    return 10 * math.ceil(math.log2(max(n, 2))) + 50


def _local_view(g: DirectedGraph, nodes: Iterable[int], directed: bool):
    order = np.array(sorted(nodes), dtype=np.int64)
    local = {int(v): k for k, v in enumerate(order)}
    rows = []
    for v in order.tolist():
        nb = g.out_adj[v] if directed else set(g.out_adj[v]).union(g.in_adj[v])
        rows.append(sorted(local[w] for w in nb if w in local))
    ptr = np.zeros(len(rows) + 1, dtype=np.int64)
    ptr[1:] = np.cumsum([len(r) for r in rows])
    idx = np.fromiter((w for r in rows for w in r), dtype=np.int64, count=int(ptr[-1]))
    return order, local, ptr, idx


def _seed_mask(local: dict[int, int], size: int, seeds: Iterable[int]) -> np.ndarray:
    mask = np.zeros(size, dtype=bool)
    for s in seeds:
        if int(s) not in local:
            raise ValueError(f"seed node {s} is outside the simulated node set")
        mask[local[int(s)]] = True
    if not mask.any():
        raise ValueError("need at least one seed node")
    return mask


@dataclass
class _View:
    """Induced subgraph on ``nodes`` as local-index CSR (projected or directed)."""

    order: np.ndarray
    local: dict
    ptr: np.ndarray
    idx: np.ndarray

    @classmethod
    def build(cls, g: DirectedGraph, nodes: Iterable[int], directed: bool) -> "_View":
        return cls(*_local_view(g, nodes, directed))


def push_pull(
    g: DirectedGraph,
    nodes: Iterable[int],
    seeds: Iterable[int],
    rng: np.random.Generator,
    max_rounds: Optional[int] = None,
) -> Optional[int]:
    """Rounds until every node in ``nodes`` is informed, or None after ``max_rounds``.

    Each round every node opens a channel to one uniformly chosen projected
    neighbour; information crosses a channel in both directions.
    """
    return _push_pull(_View.build(g, nodes, directed=False), seeds, rng, max_rounds)


def _push_pull(view: _View, seeds, rng, max_rounds) -> Optional[int]:
    k = view.order.size
    informed = _seed_mask(view.local, k, seeds)
    if max_rounds is None:
        max_rounds = default_max_rounds(k)
    deg = np.diff(view.ptr)
    callers = np.flatnonzero(deg > 0)
    base = view.ptr[callers]
    cdeg = deg[callers]
    rounds = 0
    while not informed.all():
        if rounds >= max_rounds:
            log.warning("push-pull did not finish within %d rounds", max_rounds)
            return None
        rounds += 1
        picks = view.idx[base + np.minimum((rng.random(callers.size) * cdeg).astype(np.int64), cdeg - 1)]
        live = informed[callers] | informed[picks]
        informed[callers[live]] = True
        informed[picks[live]] = True
    return rounds


def sir(
    g: DirectedGraph,
    nodes: Iterable[int],
    seeds: Iterable[int],
    p: float,
    rng: np.random.Generator,
) -> float:
    """Fraction of ``nodes`` recovered once the epidemic dies out.

    Every directed edge gets one uniform draw per run and transmits iff the
    draw is below ``p``; an edge is used at most once, so runs sharing a
    generator state are coupled monotonically in ``p``.
    """
    return _sir(_View.build(g, nodes, directed=True), seeds, p, rng)


def _sir(view: _View, seeds, p: float, rng) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    ptr, idx = view.ptr, view.idx
    k = view.order.size
    infected = _seed_mask(view.local, k, seeds)
    transmits = rng.random(idx.size) < p
    recovered = np.zeros(k, dtype=bool)
    while infected.any():
        spreaders = np.flatnonzero(infected)
        starts = ptr[spreaders]
        counts = ptr[spreaders + 1] - starts
        # flat positions of all out-edges of the spreaders
        pos = np.repeat(starts - np.cumsum(counts) + counts, counts) + np.arange(int(counts.sum()))
        targets = idx[pos[transmits[pos]]]
        recovered |= infected
        fresh = np.zeros(k, dtype=bool)
        fresh[targets] = True
        infected = fresh & ~recovered
    return float(recovered.sum()) / k


@dataclass(frozen=True)
class SpreadSpec:
    process: str = PUSH_PULL
    seeds: Optional[Sequence[int]] = None  # None -> ceil(2 ln n) fresh random nodes per run
    p: float = 0.1
    repetitions: int = 100
    max_rounds: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        if self.process not in (PUSH_PULL, SIR):
            raise ValueError(f"unknown process {self.process!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must be in [0, 1], got {self.p}")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.seeds is not None and len(self.seeds) == 0:
            raise ValueError("explicit seed set is empty")


@dataclass
class SpreadSummary:
    process: str
    per_run: list = field(default_factory=list)
    mean: float = float("nan")
    std: float = float("nan")
    failures: int = 0

    def as_dict(self) -> dict:
        return {
            "process": self.process,
            "runs": len(self.per_run),
            "mean": self.mean,
            "std": self.std,
            "failures": self.failures,
            "per_run": ",".join(repr(v) for v in self.per_run),
        }


def run_rng(seed: int, rep: int) -> np.random.Generator:
    """Generator for repetition ``rep`` of an experiment seeded with ``seed``."""
    return np.random.default_rng([seed, rep])


def run_experiment(g: DirectedGraph, spec: SpreadSpec) -> SpreadSummary:
    """Repeat one process on the LWCC of ``g``."""
    _, lwcc = connected_components(g)
    nodes = np.array(sorted(lwcc), dtype=np.int64)
    n_seeds = min(seed_count(g.n), nodes.size)
    max_rounds = spec.max_rounds if spec.max_rounds is not None else default_max_rounds(nodes.size)
    view = _View.build(g, nodes, directed=spec.process == SIR)
    out = SpreadSummary(spec.process)
    for rep in range(spec.repetitions):
        rng = run_rng(spec.seed, rep)
        if spec.seeds is None:
            seeds = rng.choice(nodes, size=n_seeds, replace=False)
        else:
            seeds = spec.seeds
        if spec.process == PUSH_PULL:
            r = _push_pull(view, seeds, rng, max_rounds)
            if r is None:
                out.failures += 1
                continue
            out.per_run.append(r)
        else:
            out.per_run.append(_sir(view, seeds, spec.p, rng))
    if out.per_run:
        vals = np.asarray(out.per_run, dtype=float)
        out.mean = float(vals.mean())
        out.std = float(vals.std())
    return out
