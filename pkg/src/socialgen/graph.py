"""Simple directed graph with reciprocal / in / out degree accounting.

Adjacency is stored twice (successors and predecessors), each as an
ID-sorted Python list so membership is a binary search and ordered
iteration is free. A reciprocal edge is two directed entries.
"""

from __future__ import annotations

from bisect import bisect_left, insort
from dataclasses import dataclass
from typing import Iterable, Iterator


class GraphError(ValueError):
    """Raised when an operation would break simplicity or refers to a bad node/edge."""


@dataclass(frozen=True)
class DegreeTriple:
    reciprocal: int
    in_only: int
    out_only: int

    @property
    def total(self) -> int:
        return self.reciprocal + self.in_only + self.out_only

    def __iter__(self):
        return iter((self.reciprocal, self.in_only, self.out_only))


def _contains(row: list[int], v: int) -> bool:
    k = bisect_left(row, v)
    return k < len(row) and row[k] == v


def _intersection_size(a: list[int], b: list[int]) -> int:
    if len(a) > len(b):
        a, b = b, a
    return sum(1 for v in a if _contains(b, v))


class DirectedGraph:
    """Directed graph over nodes ``0..n-1`` without self-loops or parallel edges."""

    __slots__ = ("n", "out_adj", "in_adj", "edge_count")

    def __init__(self, n: int):
        if n < 0:
            raise GraphError(f"node count must be >= 0, got {n}")
        self.n = int(n)
        self.out_adj: list[list[int]] = [[] for _ in range(self.n)]
        self.in_adj: list[list[int]] = [[] for _ in range(self.n)]
        self.edge_count = 0

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "DirectedGraph":
        """Bulk constructor; validates every entry like :meth:`add_directed_edge`."""
        g = cls(n)
        for i, j in edges:
            g._check(i)
            g._check(j)
            if i == j:
                raise GraphError(f"self-loop at node {i}")
            g.out_adj[i].append(j)
            g.in_adj[j].append(i)
        for v in range(g.n):
            g.out_adj[v].sort()
            g.in_adj[v].sort()
            row = g.out_adj[v]
            for k in range(1, len(row)):
                if row[k] == row[k - 1]:
                    raise GraphError(f"parallel edge ({v}->{row[k]})")
        g.edge_count = sum(len(r) for r in g.out_adj)
        return g

    def copy(self) -> "DirectedGraph":
        g = DirectedGraph(self.n)
        g.out_adj = [list(r) for r in self.out_adj]
        g.in_adj = [list(r) for r in self.in_adj]
        g.edge_count = self.edge_count
        return g

    def _check(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise GraphError(f"node {v} out of range [0, {self.n})")

    # -- mutation -------------------------------------------------------

    def add_directed_edge(self, i: int, j: int) -> None:
        self._check(i)
        self._check(j)
        if i == j:
            raise GraphError(f"self-loop at node {i}")
        if _contains(self.out_adj[i], j):
            raise GraphError(f"parallel edge ({i}->{j})")
        insort(self.out_adj[i], j)
        insort(self.in_adj[j], i)
        self.edge_count += 1

    def extend_edges(self, src, dst) -> None:
        """Insert many new directed entries at once.

        Trusted path for the samplers: entries must be absent, loop-free and
        unique. ``validate()`` re-checks everything if in doubt.
        """
        out_new: dict[int, list[int]] = {}
        in_new: dict[int, list[int]] = {}
        count = 0
        for i, j in zip(src, dst):
            i, j = int(i), int(j)
            out_new.setdefault(i, []).append(j)
            in_new.setdefault(j, []).append(i)
            count += 1
        for i, extra in out_new.items():
            self.out_adj[i] = sorted(self.out_adj[i] + extra)
        for j, extra in in_new.items():
            self.in_adj[j] = sorted(self.in_adj[j] + extra)
        self.edge_count += count

    def add_reciprocal_edge(self, i: int, j: int) -> None:
        self._check(i)
        self._check(j)
        if i == j:
            raise GraphError(f"self-loop at node {i}")
        if _contains(self.out_adj[i], j) or _contains(self.out_adj[j], i):
            raise GraphError(f"parallel edge ({i}-{j})")
        self.add_directed_edge(i, j)
        self.add_directed_edge(j, i)

    def remove_directed_edge(self, i: int, j: int) -> None:
        self._check(i)
        self._check(j)
        row = self.out_adj[i]
        k = bisect_left(row, j)
        if k == len(row) or row[k] != j:
            raise GraphError(f"missing edge ({i}->{j})")
        del row[k]
        col = self.in_adj[j]
        del col[bisect_left(col, i)]
        self.edge_count -= 1

    # -- queries --------------------------------------------------------

    def has_directed_edge(self, i: int, j: int) -> bool:
        self._check(i)
        self._check(j)
        return _contains(self.out_adj[i], j)

    def connected(self, i: int, j: int) -> bool:
        """True if an edge exists in either direction."""
        return self.has_directed_edge(i, j) or self.has_directed_edge(j, i)

    def degree_triple(self, v: int) -> DegreeTriple:
        self._check(v)
        out, inc = self.out_adj[v], self.in_adj[v]
        r = _intersection_size(out, inc)
        return DegreeTriple(r, len(inc) - r, len(out) - r)

    def neighbors(self, v: int) -> list[int]:
        """Projected neighbours of ``v`` (successors and predecessors), ID-sorted."""
        self._check(v)
        out, inc = self.out_adj[v], self.in_adj[v]
        if not inc:
            return list(out)
        if not out:
            return list(inc)
        return sorted(set(out).union(inc))

    def total_degree(self, v: int) -> int:
        return self.degree_triple(v).total

    def degree_triples(self) -> list[DegreeTriple]:
        return [self.degree_triple(v) for v in range(self.n)]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Directed entries in (src, dst) order."""
        for i, row in enumerate(self.out_adj):
            for j in row:
                yield i, j

    def undirected_adjacency(self) -> list[set[int]]:
        """Neighbour sets of the undirected projection."""
        return [set(self.out_adj[v]).union(self.in_adj[v]) for v in range(self.n)]

    def validate(self) -> None:
        """Full scan of the simplicity and mirror invariants."""
        total_in = 0
        for v in range(self.n):
            row = self.out_adj[v]
            if any(row[k] >= row[k + 1] for k in range(len(row) - 1)):
                raise GraphError(f"out_adj[{v}] unsorted or duplicated")
            if _contains(row, v):
                raise GraphError(f"self-loop at node {v}")
            for j in row:
                if not _contains(self.in_adj[j], v):
                    raise GraphError(f"mirror mismatch on ({v}->{j})")
            col = self.in_adj[v]
            if any(col[k] >= col[k + 1] for k in range(len(col) - 1)):
                raise GraphError(f"in_adj[{v}] unsorted or duplicated")
            total_in += len(col)
        total_out = sum(len(r) for r in self.out_adj)
        if not total_out == total_in == self.edge_count:
            raise GraphError(
                f"edge_count {self.edge_count} != out {total_out} / in {total_in}"
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return self.n == other.n and self.out_adj == other.out_adj

    def __repr__(self) -> str:
        return f"DirectedGraph(n={self.n}, edges={self.edge_count})"
