"""Topological features of a directed graph.

Starred quantities (density, ASPL, diameter, clustering) are taken on the
largest weakly connected component; distances and clustering use the
undirected projection.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable, NamedTuple, Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .degrees import CorrelationTriple, degree_sequences_of, rank_correlations
from .graph import DirectedGraph

ASPL_SAMPLE_CAP = 20_000
ASPL_SAMPLE_SOURCES = 1_000
SPECTRUM_CAP = 6_000
_BFS_BLOCK = 256


class MetricsError(ValueError):
    pass


# ---------------------------------------------------------------------------
# components


def strongly_connected_components(g: DirectedGraph) -> list[list[int]]:
    """Tarjan's algorithm, iterative."""
    n = g.n
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, k = work[-1]
            row = g.out_adj[v]
            if k < len(row):
                work[-1] = (v, k + 1)
                w = row[k]
                if index[w] < 0:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def weakly_connected_components(g: DirectedGraph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for root in range(g.n):
        if seen[root]:
            continue
        seen[root] = True
        comp = [root]
        frontier = [root]
        while frontier:
            v = frontier.pop()
            for w in g.out_adj[v] + g.in_adj[v]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    frontier.append(w)
        comps.append(comp)
    return comps


def _largest(comps: list[list[int]]) -> set[int]:
    if not comps:
        return set()
    return set(max(comps, key=lambda c: (len(c), -min(c))))


def connected_components(g: DirectedGraph) -> tuple[set[int], set[int]]:
    """(LSCC, LWCC) node sets; ties go to the component holding the smallest ID."""
    return _largest(strongly_connected_components(g)), _largest(weakly_connected_components(g))


# ---------------------------------------------------------------------------
# scalar features


def density(edge_entries: int, n: int) -> float:
    if n < 2:
        raise MetricsError(f"density needs n >= 2, got {n}")
    return edge_entries / (n * (n - 1))


def _projection(g: DirectedGraph, nodes: Iterable[int]) -> tuple[list[int], list[list[int]]]:
    """Sorted node list and local-index neighbour lists of the induced projection."""
    order = sorted(nodes)
    local = {v: k for k, v in enumerate(order)}
    adj = []
    for v in order:
        nb = set(g.out_adj[v]).union(g.in_adj[v])
        adj.append(sorted(local[w] for w in nb if w in local))
    return order, adj


def _is_connected(adj: list[list[int]]) -> bool:
    if not adj:
        return True
    seen = {0}
    frontier = [0]
    while frontier:
        v = frontier.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return len(seen) == len(adj)


def _adjacency_matrix(adj: list[list[int]]) -> csr_matrix:
    k = len(adj)
    ptr = np.zeros(k + 1, dtype=np.int64)
    ptr[1:] = np.cumsum([len(r) for r in adj])
    idx = np.fromiter((w for r in adj for w in r), dtype=np.int64, count=int(ptr[-1]))
    return csr_matrix((np.ones(idx.size), idx, ptr), shape=(k, k))


class PathLengths(NamedTuple):
    aspl: float
    diameter: int
    exact: bool = True


def aspl_and_diameter(
    g: DirectedGraph,
    nodes: Iterable[int],
    sample_cap: int = ASPL_SAMPLE_CAP,
    sources: int = ASPL_SAMPLE_SOURCES,
    seed: int = 0,
) -> PathLengths:
    """Hop-distance ASPL and diameter of the induced undirected projection.

    Above ``sample_cap`` nodes the ASPL is estimated from ``sources``
    random BFS roots and the diameter is a double-sweep lower bound;
    ``exact`` is then False.
    """
    order, adj = _projection(g, nodes)
    k = len(order)
    if k < 2:
        raise MetricsError("need at least 2 nodes for path lengths")
    A = _adjacency_matrix(adj)
    exact = k <= sample_cap
    if exact:
        roots = np.arange(k)
    else:
        rng = np.random.default_rng(seed)
        roots = np.sort(rng.choice(k, size=min(sources, k), replace=False))

    total = 0.0
    diameter = 0
    far_node = int(roots[0])
    for start in range(0, roots.size, _BFS_BLOCK):
        block = roots[start : start + _BFS_BLOCK]
        dist = shortest_path(A, method="D", directed=False, unweighted=True, indices=block)
        if np.isinf(dist).any():
            raise MetricsError("node set is disconnected in the projection")
        total += float(dist.sum())
        row, col = np.unravel_index(int(np.argmax(dist)), dist.shape)
        if dist[row, col] > diameter:
            diameter = int(dist[row, col])
            far_node = int(col)
    aspl = total / (roots.size * (k - 1))

    if not exact:
        # double sweep from the farthest node seen so far
        for _ in range(4):
            dist = shortest_path(A, method="D", directed=False, unweighted=True, indices=[far_node])[0]
            ecc = int(dist.max())
            if ecc <= diameter:
                break
            diameter = ecc
            far_node = int(np.argmax(dist))
    return PathLengths(aspl, diameter, exact)


def local_clustering(adj: list[set[int]], v: int) -> float:
    nb = adj[v]
    k = len(nb)
    if k < 2:
        return 0.0
    links = sum(len(nb & adj[w]) for w in nb)  # each neighbour-neighbour edge seen twice
    return links / (k * (k - 1))


def average_clustering(g: DirectedGraph, nodes: Iterable[int]) -> float:
    order, adj = _projection(g, nodes)
    if not order:
        raise MetricsError("average clustering of an empty node set")
    sets = [set(r) for r in adj]
    return sum(local_clustering(sets, v) for v in range(len(order))) / len(order)


def degree_rank_correlations(g: DirectedGraph) -> CorrelationTriple:
    if g.n < 2:
        return CorrelationTriple(None, None, None)
    return rank_correlations(degree_sequences_of(g))


# ---------------------------------------------------------------------------
# spectrum


@dataclass
class Spectrum:
    eigenvalues: np.ndarray

    def histogram(self, bins: int = 100) -> tuple[np.ndarray, np.ndarray]:
        """(bin centres, counts) over [0, 2]."""
        counts, edges = np.histogram(np.clip(self.eigenvalues, 0.0, 2.0), bins=bins, range=(0.0, 2.0))
        return 0.5 * (edges[:-1] + edges[1:]), counts


def laplacian_spectrum(g: DirectedGraph, nodes: Iterable[int], cap: int = SPECTRUM_CAP) -> Spectrum:
    """Ascending eigenvalues of ``I - D^-1/2 A D^-1/2`` of the induced projection."""
    order, adj = _projection(g, nodes)
    k = len(order)
    if k > cap:
        raise MetricsError(f"{k} nodes exceed the dense eigensolver cap of {cap}")
    if k == 0:
        raise MetricsError("spectrum of an empty node set")
    if not _is_connected(adj):
        raise MetricsError("node set is disconnected in the projection")
    A = _adjacency_matrix(adj).toarray()
    deg = A.sum(axis=1)
    if k == 1:
        return Spectrum(np.zeros(1))
    s = 1.0 / np.sqrt(deg)
    L = np.eye(k) - s[:, None] * A * s[None, :]
    return Spectrum(np.linalg.eigvalsh(L))


# ---------------------------------------------------------------------------
# report


@dataclass(frozen=True)
class GraphStats:
    nodes: int
    edges: int
    density: float
    lscc_size: int
    lwcc_size: int
    density_lwcc: Optional[float]
    aspl_lwcc: Optional[float]
    diameter_lwcc: Optional[int]
    avg_cc_lwcc: Optional[float]
    rho1: Optional[float]
    rho2: Optional[float]
    rho3: Optional[float]
    aspl_estimated: bool = False

    def as_dict(self) -> dict:
        return asdict(self)


def stats_report(
    g: DirectedGraph,
    aspl_sample_cap: int = ASPL_SAMPLE_CAP,
    seed: int = 0,
) -> GraphStats:
    lscc, lwcc = connected_components(g)
    k = len(lwcc)
    dens_w = aspl = diam = cc = None
    estimated = False
    if k >= 2:
        inner = sum(len(g.out_adj[v]) for v in lwcc)
        dens_w = density(inner, k)
        paths = aspl_and_diameter(g, lwcc, sample_cap=aspl_sample_cap, seed=seed)
        aspl, diam, estimated = paths.aspl, paths.diameter, not paths.exact
        cc = average_clustering(g, lwcc)
    corr = degree_rank_correlations(g)
    return GraphStats(
        nodes=g.n,
        edges=g.edge_count,
        density=density(g.edge_count, g.n) if g.n >= 2 else 0.0,
        lscc_size=len(lscc),
        lwcc_size=k,
        density_lwcc=dens_w,
        aspl_lwcc=aspl,
        diameter_lwcc=diam,
        avg_cc_lwcc=cc,
        rho1=corr.rho1,
        rho2=corr.rho2,
        rho3=corr.rho3,
        aspl_estimated=estimated,
    )
