"""Bernoulli edge sampling from reciprocal / in / out degree sequences.

Reciprocal edges come first, with pair probability proportional to
``recip[i] * recip[j]``; directed edges follow with probability proportional to
``outdeg[i] * indeg[j]``. Probability mass that would land on self-loops, and on
directed pairs already covered by a reciprocal edge, is spread uniformly
over the remaining eligible pairs so the expected totals are kept.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .degrees import DegreeModel, DegreeSequences, sample_correlated_degrees
from .graph import DirectedGraph, GraphError


@dataclass(frozen=True)
class EdgeSamplingPlan:
    r: float
    d: float
    recip_eligible: int
    dir_eligible: int

    @classmethod
    def from_sequences(cls, seqs: DegreeSequences) -> "EdgeSamplingPlan":
        m = int(np.count_nonzero(seqs.recip))
        o = seqs.outdeg != 0
        i = seqs.indeg != 0
        dir_pairs = int(o.sum()) * int(i.sum()) - int(np.count_nonzero(o & i))
        return cls(
            r=float(seqs.recip.sum()),
            d=0.5 * float(seqs.outdeg.sum() + seqs.indeg.sum()),
            recip_eligible=m * (m - 1) // 2,
            dir_eligible=dir_pairs,
        )

    @property
    def expected_entries(self) -> float:
        """Expected directed entries: two per reciprocal edge plus the directed ones."""
        return self.r + self.d


def _as_degrees(seq, n: int, name: str) -> np.ndarray:
    arr = np.asarray(seq, dtype=np.int64)
    if arr.shape != (n,):
        raise GraphError(f"{name} has shape {arr.shape}, expected ({n},)")
    if np.any(arr < 0):
        raise GraphError(f"{name} has negative entries")
    return arr


def reciprocal_increment(recip: np.ndarray) -> float:
    """Uniform per-pair share of the reciprocal self-loop mass ``sum recip^2 / 2r``."""
    r = float(recip.sum())
    m = int(np.count_nonzero(recip))
    pairs = m * (m - 1) // 2
    if r == 0 or pairs == 0:
        return 0.0
    return float((recip.astype(float) ** 2).sum()) / (2.0 * r) / pairs


def sample_reciprocal_edges(g: DirectedGraph, recip, rng: np.random.Generator) -> int:
    """Place reciprocal edges on an empty graph; returns the number placed."""
    if g.edge_count:
        raise GraphError("reciprocal sampling needs an empty graph")
    recip = _as_degrees(recip, g.n, "recip")
    r = float(recip.sum())
    elig = np.flatnonzero(recip)
    if r == 0 or elig.size < 2:
        return 0
    inc = reciprocal_increment(recip)
    recip_f = recip.astype(float)
    src: list[np.ndarray] = []
    dst: list[np.ndarray] = []
    for a in range(elig.size - 1):
        i = elig[a]
        js = elig[a + 1 :]
        p = np.minimum(1.0, recip_f[i] * recip_f[js] / r + inc)
        hit = js[rng.random(js.size) < p]
        if hit.size:
            src.append(np.full(hit.size, i))
            dst.append(hit)
    if not src:
        return 0
    s = np.concatenate(src)
    t = np.concatenate(dst)
    g.extend_edges(np.concatenate([s, t]), np.concatenate([t, s]))
    return int(s.size)


def directed_increment(g: DirectedGraph, outdeg: np.ndarray, indeg: np.ndarray) -> float:
    """Uniform share of (overlap reservoir + directed self-loop mass) per free eligible pair."""
    d = 0.5 * float(outdeg.sum() + indeg.sum())
    if d == 0:
        return 0.0
    o_nz = outdeg != 0
    i_nz = indeg != 0
    eligible = int(o_nz.sum()) * int(i_nz.sum()) - int(np.count_nonzero(o_nz & i_nz))
    reservoir = 0.0
    overlap = 0
    for i in np.flatnonzero(o_nz):
        row = g.out_adj[i]
        if not row:
            continue
        w = indeg[row]
        reservoir += float(outdeg[i]) * float(w.sum()) / d
        overlap += int(np.count_nonzero(w))
    self_mass = float((outdeg.astype(float) * indeg).sum()) / d
    free = eligible - overlap
    if free <= 0:
        return 0.0
    return (reservoir + self_mass) / free


def sample_directed_edges(g: DirectedGraph, outdeg, indeg, rng: np.random.Generator) -> int:
    """Add directed edges on top of the reciprocal ones; returns the number placed."""
    outdeg = _as_degrees(outdeg, g.n, "outdeg")
    indeg = _as_degrees(indeg, g.n, "indeg")
    d = 0.5 * float(outdeg.sum() + indeg.sum())
    if d == 0:
        return 0
    inc = directed_increment(g, outdeg, indeg)
    indeg_f = indeg.astype(float)
    targets = np.flatnonzero(indeg)
    src: list[np.ndarray] = []
    dst: list[np.ndarray] = []
    for i in np.flatnonzero(outdeg):
        js = targets[targets != i]
        if js.size == 0:
            continue
        p = np.minimum(1.0, float(outdeg[i]) * indeg_f[js] / d + inc)
        keep = rng.random(js.size) < p
        row = g.out_adj[i]
        if row:
            keep &= ~np.isin(js, row, assume_unique=True)
        hit = js[keep]
        if hit.size:
            src.append(np.full(hit.size, i))
            dst.append(hit)
    if not src:
        return 0
    s = np.concatenate(src)
    g.extend_edges(s, np.concatenate(dst))
    return int(s.size)


def build_from_sequences(seqs: DegreeSequences, rng: np.random.Generator) -> DirectedGraph:
    g = DirectedGraph(len(seqs))
    sample_reciprocal_edges(g, seqs.recip, rng)
    sample_directed_edges(g, seqs.outdeg, seqs.indeg, rng)
    return g


def build_graph(model: DegreeModel, rng: np.random.Generator) -> DirectedGraph:
    """Degrees -> reciprocal edges -> directed edges (the graph before rewiring)."""
    return build_from_sequences(sample_correlated_degrees(model, rng), rng)
