"""Degree-preserving edge rewiring that closes open triangles.

Every node ``x`` of the admitted set (total degree between 2 and the
chosen percentile) gets ``budget(x)`` iterations. Each iteration picks two
neighbours ``y1, y2`` of ``x``; when they are unconnected it looks for
``z1`` adjacent to ``y1`` only and ``z2`` adjacent to ``y2`` only (IDs
``>= x``) and swaps ``y1-z1, y2-z2`` into ``y1-y2, z1-z2`` when the edge
directions allow it without touching any node's degree triple.

Randomness is consumed in a fixed layout: each iteration owns one row
of ``2 + 2 * attempts`` uniforms, whether it uses them or not. Both
backends read the same rows, so they produce identical graphs.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .graph import DirectedGraph, GraphError

log = logging.getLogger(__name__)

BUDGET_CAP = 1_000_000
_CHUNK = 8192

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None


@dataclass(frozen=True)
class RewireConfig:
    degree_percentile: float = 95.0
    pair_fraction: float = 0.6
    attempts: int = 10

    def __post_init__(self):
        if not 0 < self.degree_percentile <= 100:
            raise ValueError(f"degree_percentile must be in (0, 100], got {self.degree_percentile}")
        if not 0 < self.pair_fraction <= 1:
            raise ValueError(f"pair_fraction must be in (0, 1], got {self.pair_fraction}")
        if self.attempts < 1:
            raise ValueError(f"attempts must be >= 1, got {self.attempts}")


@dataclass
class RewireReport:
    threshold: int = 0
    median: int = 0
    nodes: int = 0
    iterations: int = 0
    connected_pairs: int = 0
    empty_candidates: int = 0
    exhausted: int = 0
    attempted: int = 0
    successful: int = 0
    capped_nodes: list[int] = field(default_factory=list)

    _COUNTERS = ("iterations", "connected_pairs", "empty_candidates", "attempted", "successful", "exhausted")

    def absorb(self, counts) -> None:
        for name, v in zip(self._COUNTERS, counts):
            setattr(self, name, getattr(self, name) + int(v))

    def as_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "median": self.median,
            "nodes": self.nodes,
            "iterations": self.iterations,
            "connected_pairs": self.connected_pairs,
            "empty_candidates": self.empty_candidates,
            "exhausted": self.exhausted,
            "attempted": self.attempted,
            "successful": self.successful,
            "capped_nodes": len(self.capped_nodes),
        }


def nearest_rank(values, percent: float) -> int:
    """Nearest-rank percentile of a nonempty multiset."""
    s = sorted(values)
    if not s:
        raise ValueError("percentile of an empty multiset")
    rank = math.ceil(Fraction(percent).limit_denominator(10**6) * len(s) / 100)
    return s[max(rank, 1) - 1]


def rewiring_schedule(degrees, cfg: RewireConfig) -> tuple[list[int], list[int], int, int]:
    """Admitted nodes in ID order, their iteration counts, the percentile cut and the median."""
    degrees = list(degrees)
    if not degrees:
        return [], [], 0, 0
    t = nearest_rank(degrees, cfg.degree_percentile)
    nodes = [v for v, k in enumerate(degrees) if 2 <= k <= t]
    if not nodes:
        return [], [], t, 0
    m = nearest_rank([degrees[v] for v in nodes], 50)
    budgets = []
    for v in nodes:
        k = degrees[v]
        pairs = k * (k - 1) // 2
        if k > m:
            pairs = math.ceil(Fraction(pairs) * Fraction(cfg.pair_fraction).limit_denominator(10**9))
        budgets.append(pairs)
    return nodes, budgets, t, m


# ---------------------------------------------------------------------------
# reference backend on DirectedGraph


def rewire_step(g: DirectedGraph, y1: int, y2: int, z1: int, z2: int) -> bool:
    """Swap ``y1-z1, y2-z2`` into ``y1-y2, z1-z2`` if directions allow it.

    Returns False, leaving ``g`` untouched, when the two connections are
    neither both reciprocal nor one-way in opposite senses.
    """
    if len({y1, y2, z1, z2}) != 4:
        raise GraphError(f"rewire needs four distinct nodes, got {(y1, y2, z1, z2)}")
    if not (g.connected(y1, z1) and g.connected(y2, z2)):
        raise GraphError("z1 must be adjacent to y1 and z2 to y2")
    if g.connected(y1, y2) or g.connected(z1, z2):
        raise GraphError("y1-y2 and z1-z2 must be unconnected")
    a = g.has_directed_edge(y1, z1)
    b = g.has_directed_edge(z1, y1)
    c = g.has_directed_edge(y2, z2)
    d = g.has_directed_edge(z2, y2)
    if a and not b and not c and d:
        g.remove_directed_edge(y1, z1)
        g.remove_directed_edge(z2, y2)
        g.add_directed_edge(y1, y2)
        g.add_directed_edge(z2, z1)
    elif not a and b and c and not d:
        g.remove_directed_edge(z1, y1)
        g.remove_directed_edge(y2, z2)
        g.add_directed_edge(y2, y1)
        g.add_directed_edge(z1, z2)
    elif a and b and c and d:
        g.remove_directed_edge(y1, z1)
        g.remove_directed_edge(z1, y1)
        g.remove_directed_edge(y2, z2)
        g.remove_directed_edge(z2, y2)
        g.add_reciprocal_edge(y1, y2)
        g.add_reciprocal_edge(z1, z2)
    else:
        return False
    return True


def _pick(u: float, size: int) -> int:
    k = int(u * size)
    return k if k < size else size - 1


def _rewire_chunk_py(g: DirectedGraph, x: int, U: np.ndarray, attempts: int) -> list[int]:
    iterations = connected = empty = attempted = successful = exhausted = 0
    for row in U:
        iterations += 1
        nb = g.neighbors(x)
        d = len(nb)
        i1 = _pick(row[0], d)
        i2 = _pick(row[1], d - 1)
        if i2 >= i1:
            i2 += 1
        y1, y2 = nb[i1], nb[i2]
        if g.connected(y1, y2):
            connected += 1
            continue
        n1 = g.neighbors(y1)
        n2 = g.neighbors(y2)
        s1, s2 = set(n1), set(n2)
        cand1 = [z for z in n1 if z >= x and z not in s2]
        cand2 = [z for z in n2 if z >= x and z not in s1]
        if not cand1 or not cand2:
            empty += 1
            continue
        for a in range(attempts):
            z1 = cand1[_pick(row[2 + 2 * a], len(cand1))]
            z2 = cand2[_pick(row[3 + 2 * a], len(cand2))]
            if not g.connected(z1, z2):
                attempted += 1
                successful += rewire_step(g, y1, y2, z1, z2)
                break
        else:
            exhausted += 1
    return [iterations, connected, empty, attempted, successful, exhausted]


# ---------------------------------------------------------------------------
# compiled backend on fixed-shape sorted CSR rows


def _csr(rows: list[list[int]]) -> tuple[np.ndarray, np.ndarray]:
    ptr = np.zeros(len(rows) + 1, dtype=np.int64)
    ptr[1:] = np.cumsum([len(r) for r in rows])
    idx = np.fromiter((v for r in rows for v in r), dtype=np.int64, count=int(ptr[-1]))
    return ptr, idx


def _rows(ptr: np.ndarray, idx: np.ndarray) -> list[list[int]]:
    flat = idx.tolist()
    p = ptr.tolist()
    return [flat[p[v] : p[v + 1]] for v in range(len(p) - 1)]


if numba is not None:

    @numba.njit(cache=True)
    def _lower_bound(idx, lo, hi, v):
        while lo < hi:
            mid = (lo + hi) >> 1
            if idx[mid] < v:
                lo = mid + 1
            else:
                hi = mid
        return lo

    @numba.njit(cache=True)
    def _has(ptr, idx, u, v):
        p = _lower_bound(idx, ptr[u], ptr[u + 1], v)
        return p < ptr[u + 1] and idx[p] == v

    @numba.njit(cache=True)
    def _replace(ptr, idx, u, old, new):
        lo = ptr[u]
        hi = ptr[u + 1]
        p = _lower_bound(idx, lo, hi, old)
        if new > old:
            while p + 1 < hi and idx[p + 1] < new:
                idx[p] = idx[p + 1]
                p += 1
        else:
            while p > lo and idx[p - 1] > new:
                idx[p] = idx[p - 1]
                p -= 1
        idx[p] = new

    @numba.njit(cache=True)
    def _step_csr(y1, y2, z1, z2, op, oi, ip, ii, np_, ni):
        a = _has(op, oi, y1, z1)
        b = _has(op, oi, z1, y1)
        c = _has(op, oi, y2, z2)
        d = _has(op, oi, z2, y2)
        if a and not b and not c and d:
            _replace(op, oi, y1, z1, y2)
            _replace(ip, ii, z1, y1, z2)
            _replace(op, oi, z2, y2, z1)
            _replace(ip, ii, y2, z2, y1)
        elif not a and b and c and not d:
            _replace(op, oi, z1, y1, z2)
            _replace(ip, ii, y1, z1, y2)
            _replace(op, oi, y2, z2, y1)
            _replace(ip, ii, z2, y2, z1)
        elif a and b and c and d:
            _replace(op, oi, y1, z1, y2)
            _replace(ip, ii, y1, z1, y2)
            _replace(op, oi, z1, y1, z2)
            _replace(ip, ii, z1, y1, z2)
            _replace(op, oi, y2, z2, y1)
            _replace(ip, ii, y2, z2, y1)
            _replace(op, oi, z2, y2, z1)
            _replace(ip, ii, z2, y2, z1)
        else:
            return False
        # the projection sees the same swap in every case
        _replace(np_, ni, y1, z1, y2)
        _replace(np_, ni, y2, z2, y1)
        _replace(np_, ni, z1, y1, z2)
        _replace(np_, ni, z2, y2, z1)
        return True

    @numba.njit(cache=True)
    def _rewire_chunk_csr(x, U, attempts, op, oi, ip, ii, np_, ni, buf1, buf2, counts):
        for it in range(U.shape[0]):
            counts[0] += 1
            lo = np_[x]
            d = np_[x + 1] - lo
            i1 = min(int(U[it, 0] * d), d - 1)
            i2 = min(int(U[it, 1] * (d - 1)), d - 2)
            if i2 >= i1:
                i2 += 1
            y1 = ni[lo + i1]
            y2 = ni[lo + i2]
            if _has(np_, ni, y1, y2):
                counts[1] += 1
                continue
            p = _lower_bound(ni, np_[y1], np_[y1 + 1], x)
            p_end = np_[y1 + 1]
            q = _lower_bound(ni, np_[y2], np_[y2 + 1], x)
            q_end = np_[y2 + 1]
            n1 = 0
            n2 = 0
            while p < p_end and q < q_end:
                va = ni[p]
                vb = ni[q]
                if va < vb:
                    buf1[n1] = va
                    n1 += 1
                    p += 1
                elif vb < va:
                    buf2[n2] = vb
                    n2 += 1
                    q += 1
                else:
                    p += 1
                    q += 1
            while p < p_end:
                buf1[n1] = ni[p]
                n1 += 1
                p += 1
            while q < q_end:
                buf2[n2] = ni[q]
                n2 += 1
                q += 1
            if n1 == 0 or n2 == 0:
                counts[2] += 1
                continue
            found = False
            for a in range(attempts):
                z1 = buf1[min(int(U[it, 2 + 2 * a] * n1), n1 - 1)]
                z2 = buf2[min(int(U[it, 3 + 2 * a] * n2), n2 - 1)]
                if not _has(np_, ni, z1, z2):
                    counts[3] += 1
                    if _step_csr(y1, y2, z1, z2, op, oi, ip, ii, np_, ni):
                        counts[4] += 1
                    found = True
                    break
            if not found:
                counts[5] += 1


def _uniform_blocks(budget: int, width: int, rng: np.random.Generator):
    left = budget
    while left > 0:
        k = min(left, _CHUNK)
        yield rng.random((k, width))
        left -= k


def rewire_graph(
    g: DirectedGraph,
    cfg: RewireConfig,
    rng: np.random.Generator,
    backend: str = "auto",
) -> RewireReport:
    """Rewire ``g`` in place; every node keeps its (reciprocal, in, out) triple."""
    if backend == "auto":
        backend = "numba" if numba is not None else "python"
    if backend not in ("python", "numba"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and numba is None:
        raise RuntimeError("numba backend requested but numba is not installed")

    degrees = [len(r) for r in g.undirected_adjacency()]
    nodes, budgets, t, m = rewiring_schedule(degrees, cfg)
    report = RewireReport(threshold=t, median=m, nodes=len(nodes))
    width = 2 + 2 * cfg.attempts

    if backend == "numba" and nodes:
        op, oi = _csr(g.out_adj)
        ip, ii = _csr(g.in_adj)
        np_, ni = _csr([g.neighbors(v) for v in range(g.n)])
        cap = max(degrees) + 1
        buf1 = np.empty(cap, dtype=np.int64)
        buf2 = np.empty(cap, dtype=np.int64)

    for x, budget in zip(nodes, budgets):
        if budget > BUDGET_CAP:
            log.warning("node %d: %d rewiring iterations capped at %d", x, budget, BUDGET_CAP)
            report.capped_nodes.append(x)
            budget = BUDGET_CAP
        for U in _uniform_blocks(budget, width, rng):
            if backend == "numba":
                counts = np.zeros(6, dtype=np.int64)
                _rewire_chunk_csr(x, U, cfg.attempts, op, oi, ip, ii, np_, ni, buf1, buf2, counts)
            else:
                counts = _rewire_chunk_py(g, x, U, cfg.attempts)
            report.absorb(counts)

    if backend == "numba" and nodes:
        g.out_adj = _rows(op, oi)
        g.in_adj = _rows(ip, ii)
    return report
