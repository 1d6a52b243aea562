"""Slow, obviously-correct reference computations used only by the tests.

Nothing here imports the code paths it is used to check.
"""

import itertools
import math

INF = float("inf")


# -- edge sampling ------------------------------------------------------------


def reciprocal_pair_probabilities(recip):
    """{(i, j): p} over unordered eligible pairs, i < j."""
    n = len(recip)
    r = sum(recip)
    elig = [(i, j) for i in range(n) for j in range(i + 1, n) if recip[i] != 0 and recip[j] != 0]
    if r == 0 or not elig:
        return {}
    loop_mass = sum(x * x for x in recip) / (2 * r)
    share = loop_mass / len(elig)
    return {(i, j): min(1.0, recip[i] * recip[j] / r + share) for i, j in elig}


def reciprocal_pair_probabilities_unclamped(recip):
    n = len(recip)
    r = sum(recip)
    elig = [(i, j) for i in range(n) for j in range(i + 1, n) if recip[i] != 0 and recip[j] != 0]
    loop_mass = sum(x * x for x in recip) / (2 * r)
    return {(i, j): recip[i] * recip[j] / r + loop_mass / len(elig) for i, j in elig}


def directed_pair_probabilities(outdeg, indeg, existing):
    """{(i, j): p} over free eligible ordered pairs; ``existing`` is a set of (i, j) entries."""
    n = len(outdeg)
    d = 0.5 * (sum(outdeg) + sum(indeg))
    if d == 0:
        return {}
    elig = [(i, j) for i in range(n) for j in range(n) if i != j and outdeg[i] != 0 and indeg[j] != 0]
    reservoir = sum(outdeg[i] * indeg[j] / d for i, j in elig if (i, j) in existing)
    self_mass = sum(outdeg[i] * indeg[i] / d for i in range(n))
    free = [(i, j) for i, j in elig if (i, j) not in existing]
    if not free:
        return {}
    share = (reservoir + self_mass) / len(free)
    return {(i, j): min(1.0, outdeg[i] * indeg[j] / d + share) for i, j in free}


# -- metrics on tiny graphs ------------------------------------------------------


def _closure(n, edges):
    reach = [[i == j for j in range(n)] for i in range(n)]
    for i, j in edges:
        reach[i][j] = True
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                for j in range(n):
                    if reach[k][j]:
                        reach[i][j] = True
    return reach


def _components(n, same):
    comps = []
    seen = set()
    for v in range(n):
        if v in seen:
            continue
        comp = {u for u in range(n) if same(u, v)}
        seen |= comp
        comps.append(comp)
    return comps


def _pick_largest(comps):
    best = None
    for c in comps:
        if best is None or len(c) > len(best) or (len(c) == len(best) and min(c) < min(best)):
            best = c
    return best or set()


def largest_components(n, edges):
    """(LSCC, LWCC) via transitive closure."""
    reach = _closure(n, edges)
    scc = _components(n, lambda u, v: reach[u][v] and reach[v][u])
    und = list(edges) + [(j, i) for i, j in edges]
    ureach = _closure(n, und)
    wcc = _components(n, lambda u, v: ureach[u][v])
    return _pick_largest(scc), _pick_largest(wcc)


def projected_neighbours(nodes, edges):
    nb = {v: set() for v in nodes}
    for i, j in edges:
        if i in nb and j in nb:
            nb[i].add(j)
            nb[j].add(i)
    return nb


def path_lengths(nodes, edges):
    """(ASPL, diameter) by Floyd-Warshall on the induced projection."""
    nodes = sorted(nodes)
    nb = projected_neighbours(nodes, edges)
    dist = {(u, v): (0 if u == v else (1 if v in nb[u] else INF)) for u in nodes for v in nodes}
    for k in nodes:
        for u in nodes:
            for v in nodes:
                if dist[u, k] + dist[k, v] < dist[u, v]:
                    dist[u, v] = dist[u, k] + dist[k, v]
    pairs = [dist[u, v] for u in nodes for v in nodes if u != v]
    return sum(pairs) / len(pairs), max(pairs)


def average_clustering(nodes, edges):
    nb = projected_neighbours(nodes, edges)
    total = 0.0
    for v in sorted(nodes):
        k = len(nb[v])
        if k < 2:
            continue
        closed = sum(1 for a, b in itertools.combinations(sorted(nb[v]), 2) if b in nb[a])
        total += closed / math.comb(k, 2)
    return total / len(nodes)


def degree_triples(n, edges):
    es = set(edges)
    out = []
    for v in range(n):
        succ = {j for i, j in es if i == v}
        pred = {i for i, j in es if j == v}
        r = len(succ & pred)
        out.append((r, len(pred) - r, len(succ) - r))
    return out
