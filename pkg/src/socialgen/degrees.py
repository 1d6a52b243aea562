"""Correlated degree sequences from scaled chi-square marginals (NORTA).

A scaled chi-square variable is ``c * Y`` with ``Y ~ chi2(k)``, fitted by
matching mean and variance. Joint samples are drawn by pushing a
correlated trivariate normal through the standard normal CDF (a Gaussian
copula) and then through each marginal's quantile function.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.special import ndtr

from .graph import DirectedGraph

_EPS = 1e-15
_FPMIN = 1e-300
_MAX_TERMS = 100_000
_QUANTILE_TOL = 1e-10
_MAX_NEWTON = 300

CORRELATED = "correlated"
INDEPENDENT = "independent"


class DegreeModelError(ValueError):
    pass


# ---------------------------------------------------------------------------
# incomplete gamma / chi-square numerics


def _gamma_series(a: float, x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    pos = x > 0
    if not pos.any():
        return out
    xs = x[pos]
    ap = a
    term = np.full_like(xs, 1.0 / a)
    total = term.copy()
    for _ in range(_MAX_TERMS):
        ap += 1.0
        term *= xs / ap
        total += term
        if np.all(np.abs(term) < np.abs(total) * _EPS):
            break
    out[pos] = total * np.exp(-xs + a * np.log(xs) - math.lgamma(a))
    return out


def _gamma_continued_fraction(a: float, x: np.ndarray) -> np.ndarray:
    """Upper regularized gamma Q(a, x) by modified Lentz; valid for x >= a + 1."""
    b = x + 1.0 - a
    c = np.full_like(x, 1.0 / _FPMIN)
    d = 1.0 / b
    h = d.copy()
    for i in range(1, _MAX_TERMS):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        d[np.abs(d) < _FPMIN] = _FPMIN
        c = b + an / c
        c[np.abs(c) < _FPMIN] = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if np.all(np.abs(delta - 1.0) < _EPS):
            break
    with np.errstate(under="ignore"):
        return np.exp(-x + a * np.log(x) - math.lgamma(a)) * h


def regularized_gamma_p(a: float, x) -> np.ndarray:
    """Lower regularized incomplete gamma P(a, x) for scalar ``a > 0`` and array ``x >= 0``."""
    if a <= 0:
        raise DegreeModelError(f"shape must be positive, got {a}")
    x = np.asarray(x, dtype=float)
    flat = np.atleast_1d(x).ravel()
    if np.any(flat < 0) or np.any(np.isnan(flat)):
        raise DegreeModelError("P(a, x) needs x >= 0")
    out = np.empty_like(flat)
    small = flat < a + 1.0
    out[small] = _gamma_series(a, flat[small])
    big = ~small
    if big.any():
        out[big] = 1.0 - _gamma_continued_fraction(a, flat[big])
    return out.reshape(x.shape)


def _gamma_density(a: float, t: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", under="ignore", invalid="ignore"):
        return np.exp((a - 1.0) * np.log(t) - t - math.lgamma(a))


def _initial_guess(a: float, u: np.ndarray) -> np.ndarray:
    if a > 1.0:
        pp = np.where(u < 0.5, u, 1.0 - u)
        s = np.sqrt(-2.0 * np.log(pp))
        z = (2.30753 + s * 0.27061) / (1.0 + s * (0.99229 + s * 0.04481)) - s
        z = np.where(u < 0.5, -z, z)
        return np.maximum(1e-3, a * (1.0 - 1.0 / (9.0 * a) - z / (3.0 * math.sqrt(a))) ** 3)
    t = 1.0 - a * (0.253 + a * 0.12)
    with np.errstate(divide="ignore"):
        lower = (u / t) ** (1.0 / a)
        upper = 1.0 - np.log1p(-(u - t) / (1.0 - t))
    return np.where(u < t, lower, upper)


def gamma_quantile(a: float, u) -> np.ndarray:
    """Inverse of P(a, .) by Newton iteration inside a shrinking bracket.

    Whenever the Newton step leaves the bracket the midpoint is taken
    instead, so convergence is guaranteed.
    """
    u = np.asarray(u, dtype=float)
    flat = np.atleast_1d(u).ravel()
    if np.any(~((flat > 0) & (flat < 1))):
        raise DegreeModelError("quantile needs probabilities in the open interval (0, 1)")

    t = _initial_guess(a, flat)
    lo = np.zeros_like(flat)
    hi = np.full_like(flat, max(2.0 * a, 1.0))
    # grow the upper bracket until P(hi) >= u
    while True:
        short = regularized_gamma_p(a, hi) < flat
        if not short.any():
            break
        lo[short] = hi[short]
        hi[short] *= 2.0
    bad = ~((t > lo) & (t < hi))
    t[bad] = 0.5 * (lo[bad] + hi[bad])

    active = np.arange(flat.size)
    for _ in range(_MAX_NEWTON):
        if active.size == 0:
            break
        ta = t[active]
        f = regularized_gamma_p(a, ta) - flat[active]
        below = f < 0
        lo[active[below]] = ta[below]
        hi[active[~below]] = ta[~below]
        dens = _gamma_density(a, ta)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = ta - f / dens
        la, ha = lo[active], hi[active]
        outside = ~((step > la) & (step < ha)) | ~np.isfinite(step)
        step[outside] = 0.5 * (la[outside] + ha[outside])
        done = (f == 0) | (np.abs(step - ta) <= _QUANTILE_TOL * np.abs(step))
        done |= (ha - la) <= _QUANTILE_TOL * ha
        t[active] = np.where(f == 0, ta, step)
        active = active[~done]
    return t.reshape(u.shape)


@dataclass(frozen=True)
class ScaledChiSquare:
    """``c * Y`` with ``Y ~ chi2(k)``."""

    k: float
    c: float

    def __post_init__(self):
        if not (self.k > 0 and self.c > 0):
            raise DegreeModelError(f"k and c must be positive, got k={self.k}, c={self.c}")

    @property
    def mean(self) -> float:
        return self.c * self.k

    @property
    def variance(self) -> float:
        return 2.0 * self.c**2 * self.k

    def cdf(self, x):
        x = np.maximum(np.asarray(x, dtype=float), 0.0)
        return regularized_gamma_p(self.k / 2.0, x / (2.0 * self.c))

    def quantile(self, u):
        return 2.0 * self.c * gamma_quantile(self.k / 2.0, u)


def scaled_chi_square_quantile(dist: ScaledChiSquare, u):
    return dist.quantile(u)


def fit_scaled_chi_square(samples: Sequence[float]) -> ScaledChiSquare:
    """Method-of-moments fit (population variance, ddof=0)."""
    x = np.asarray(samples, dtype=float)
    if x.size < 2:
        raise DegreeModelError("need at least 2 samples to fit")
    if np.any(x < 0):
        raise DegreeModelError("degree samples must be nonnegative")
    mean = float(x.mean())
    var = float(x.var())
    if var <= 0 or mean <= 0:
        raise DegreeModelError("zero variance (or zero mean) sample, cannot fit")
    return ScaledChiSquare(k=2.0 * mean**2 / var, c=var / (2.0 * mean))


# ---------------------------------------------------------------------------
# rank correlation


def average_ranks(x) -> np.ndarray:
    """1-based ranks; ties share the mean of the ranks they span."""
    x = np.asarray(x)
    n = x.size
    order = np.argsort(x, kind="mergesort")
    xs = x[order]
    starts = np.empty(n, dtype=bool)
    starts[:1] = True
    starts[1:] = xs[1:] != xs[:-1]
    first = np.flatnonzero(starts)
    counts = np.diff(np.append(first, n))
    group_rank = first + (counts + 1) / 2.0
    ranks = np.empty(n, dtype=float)
    ranks[order] = np.repeat(group_rank, counts)
    return ranks


def spearman_rho(xs, ys) -> float:
    xs = np.asarray(xs)
    ys = np.asarray(ys)
    if xs.shape != ys.shape:
        raise DegreeModelError(f"length mismatch: {xs.shape} vs {ys.shape}")
    if xs.size < 2:
        raise DegreeModelError("need at least 2 observations")
    rx = average_ranks(xs)
    ry = average_ranks(ys)
    rx -= rx.mean()
    ry -= ry.mean()
    sx = math.sqrt(float(rx @ rx))
    sy = math.sqrt(float(ry @ ry))
    if sx == 0 or sy == 0:
        raise DegreeModelError("constant sequence, rank correlation undefined")
    return float(np.clip((rx @ ry) / (sx * sy), -1.0, 1.0))


def rho_to_pearson(rho):
    """Spearman rho of a bivariate normal -> its Pearson correlation."""
    arr = np.asarray(rho, dtype=float)
    if np.any(np.abs(arr) > 1):
        raise DegreeModelError(f"rank correlation outside [-1, 1]: {rho}")
    out = 2.0 * np.sin(arr * math.pi / 6.0)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# model and sampling


@dataclass(frozen=True)
class CorrelationTriple:
    """rho(recip, in), rho(recip, out), rho(in, out); ``None`` marks undefined."""

    rho1: Optional[float]
    rho2: Optional[float]
    rho3: Optional[float]

    def __post_init__(self):
        for name in ("rho1", "rho2", "rho3"):
            v = getattr(self, name)
            if v is not None and not -1.0 <= v <= 1.0:
                raise DegreeModelError(f"{name}={v} outside [-1, 1]")

    def as_tuple(self):
        return (self.rho1, self.rho2, self.rho3)

    @property
    def complete(self) -> bool:
        return None not in self.as_tuple()


@dataclass(frozen=True)
class DegreeModel:
    n: int
    recip: ScaledChiSquare
    indeg: ScaledChiSquare
    outdeg: ScaledChiSquare
    corr: CorrelationTriple = CorrelationTriple(0.0, 0.0, 0.0)
    mode: str = CORRELATED

    def __post_init__(self):
        if self.n < 1:
            raise DegreeModelError(f"n must be >= 1, got {self.n}")
        if self.mode not in (CORRELATED, INDEPENDENT):
            raise DegreeModelError(f"unknown mode {self.mode!r}")
        if self.mode == CORRELATED and not self.corr.complete:
            raise DegreeModelError("correlated mode needs all three rank correlations")

    @property
    def marginals(self) -> tuple[ScaledChiSquare, ScaledChiSquare, ScaledChiSquare]:
        return (self.recip, self.indeg, self.outdeg)


@dataclass
class DegreeSequences:
    recip: np.ndarray
    indeg: np.ndarray
    outdeg: np.ndarray

    def __post_init__(self):
        self.recip = np.asarray(self.recip, dtype=np.int64)
        self.indeg = np.asarray(self.indeg, dtype=np.int64)
        self.outdeg = np.asarray(self.outdeg, dtype=np.int64)
        if not (self.recip.shape == self.indeg.shape == self.outdeg.shape):
            raise DegreeModelError("degree sequences must have equal length")
        if self.recip.ndim != 1:
            raise DegreeModelError("degree sequences must be one-dimensional")
        for seq in (self.recip, self.indeg, self.outdeg):
            if np.any(seq < 0):
                raise DegreeModelError("degrees must be nonnegative")

    def __len__(self) -> int:
        return int(self.recip.size)


def pearson_matrix(corr: CorrelationTriple) -> np.ndarray:
    r1, r2, r3 = (rho_to_pearson(v) for v in corr.as_tuple())
    return np.array([[1.0, r1, r2], [r1, 1.0, r3], [r2, r3, 1.0]])


def cholesky_factor(sigma: np.ndarray) -> np.ndarray:
    """Cholesky factor of a correlation matrix, repairing it when it is not PD."""
    try:
        return np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        pass
    w, v = np.linalg.eigh(sigma)
    w = np.clip(w, 1e-10, None)
    fixed = (v * w) @ v.T
    d = np.sqrt(np.diag(fixed))
    fixed = fixed / np.outer(d, d)
    warnings.warn(
        "correlation matrix is not positive definite; eigenvalues clipped at 1e-10",
        RuntimeWarning,
        stacklevel=2,
    )
    try:
        return np.linalg.cholesky(fixed)
    except np.linalg.LinAlgError as exc:
        raise DegreeModelError("correlation matrix could not be repaired") from exc


def sample_copula(model: DegreeModel, rng: np.random.Generator) -> np.ndarray:
    """``(n, 3)`` array of uniforms on (0, 1) with the model's dependence."""
    z = rng.standard_normal((model.n, 3))
    if model.mode == CORRELATED:
        z = z @ cholesky_factor(pearson_matrix(model.corr)).T
    u = ndtr(z)
    # keep strictly inside (0, 1) for the quantile functions
    return np.clip(u, np.finfo(float).tiny, np.nextafter(1.0, 0.0))


def sample_continuous_degrees(model: DegreeModel, rng: np.random.Generator) -> np.ndarray:
    """Pre-rounding NORTA output, ``(n, 3)`` columns (recip, in, out)."""
    u = sample_copula(model, rng)
    return np.column_stack([m.quantile(u[:, k]) for k, m in enumerate(model.marginals)])


def round_half_up(x) -> np.ndarray:
    return np.floor(np.asarray(x) + 0.5).astype(np.int64)


def sample_correlated_degrees(model: DegreeModel, rng: np.random.Generator) -> DegreeSequences:
    x = round_half_up(sample_continuous_degrees(model, rng))
    return DegreeSequences(x[:, 0], x[:, 1], x[:, 2])


def degree_sequences_of(g: DirectedGraph) -> DegreeSequences:
    triples = g.degree_triples()
    return DegreeSequences(
        [t.reciprocal for t in triples],
        [t.in_only for t in triples],
        [t.out_only for t in triples],
    )


def rank_correlations(seqs: DegreeSequences) -> CorrelationTriple:
    """Spearman triple; entries involving a constant sequence become ``None``."""

    def rho(a, b):
        try:
            return spearman_rho(a, b)
        except DegreeModelError:
            return None

    return CorrelationTriple(
        rho(seqs.recip, seqs.indeg),
        rho(seqs.recip, seqs.outdeg),
        rho(seqs.indeg, seqs.outdeg),
    )


def fit_degree_model(g: DirectedGraph) -> DegreeModel:
    if g.n < 2:
        raise DegreeModelError("need a graph with at least 2 nodes")
    seqs = degree_sequences_of(g)
    recip = fit_scaled_chi_square(seqs.recip)
    indeg = fit_scaled_chi_square(seqs.indeg)
    outdeg = fit_scaled_chi_square(seqs.outdeg)
    corr = rank_correlations(seqs)
    return DegreeModel(g.n, recip, indeg, outdeg, corr, CORRELATED)
