"""Monte-Carlo comparison of the edge sampler against the brute-force oracle."""

import numpy as np

from socialgen.graph import DirectedGraph
from socialgen.sampler import sample_directed_edges, sample_reciprocal_edges

import oracles


def _z_ok(mean, expected, var, runs):
    se = np.sqrt(var / runs)
    diff = np.abs(mean - expected)
    # zero-variance nodes must match exactly
    return np.where(se > 0, diff <= 3 * se, diff < 1e-12)


def reciprocal_check(recip, runs, rng):
    """Fraction of nodes whose mean reciprocal degree is within 3 SE of the oracle."""
    n = len(recip)
    probs = oracles.reciprocal_pair_probabilities([int(x) for x in recip])
    exp = np.zeros(n)
    var = np.zeros(n)
    for (i, j), p in probs.items():
        for v in (i, j):
            exp[v] += p
            var[v] += p * (1 - p)
    total = np.zeros(n)
    for _ in range(runs):
        g = DirectedGraph(n)
        sample_reciprocal_edges(g, recip, rng)
        total += [len(g.out_adj[v]) for v in range(n)]
    return _z_ok(total / runs, exp, var, runs)


def directed_check(base: DirectedGraph, outdeg, indeg, runs, rng):
    """Same check for directed out- and in-counts added on top of ``base``."""
    n = base.n
    existing = set(base.edges())
    probs = oracles.directed_pair_probabilities([int(x) for x in outdeg], [int(x) for x in indeg], existing)
    exp_out, var_out, exp_in, var_in = (np.zeros(n) for _ in range(4))
    for (i, j), p in probs.items():
        exp_out[i] += p
        var_out[i] += p * (1 - p)
        exp_in[j] += p
        var_in[j] += p * (1 - p)
    base_out = np.array([len(base.out_adj[v]) for v in range(n)])
    base_in = np.array([len(base.in_adj[v]) for v in range(n)])
    tot_out = np.zeros(n)
    tot_in = np.zeros(n)
    edges_added = []
    for _ in range(runs):
        g = base.copy()
        edges_added.append(sample_directed_edges(g, outdeg, indeg, rng))
        tot_out += np.array([len(g.out_adj[v]) for v in range(n)]) - base_out
        tot_in += np.array([len(g.in_adj[v]) for v in range(n)]) - base_in
    ok_out = _z_ok(tot_out / runs, exp_out, var_out, runs)
    ok_in = _z_ok(tot_in / runs, exp_in, var_in, runs)
    total_exp = sum(probs.values())
    total_sd = np.sqrt(sum(p * (1 - p) for p in probs.values()) / runs)
    return ok_out, ok_in, float(np.mean(edges_added)), total_exp, total_sd


def instance(rng, n):
    """Heavy-tailed integer degree triple with some zeros, like the sampled sequences."""
    recip = np.floor(rng.gamma(0.9, 4.0, n) + 0.5).astype(np.int64)
    outdeg = np.floor(rng.gamma(0.8, 4.0, n) + 0.5).astype(np.int64)
    indeg = np.floor(rng.gamma(0.8, 4.0, n) + 0.5).astype(np.int64)
    return recip, outdeg, indeg
