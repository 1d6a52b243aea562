"""Degree models sized like published crawled graphs.

Rank correlations are the crawled values; marginal mean/sd were chosen by
hand so the generated graphs land near the published edge counts and
clustering levels.
"""

from __future__ import annotations

from .degrees import CORRELATED, CorrelationTriple, DegreeModel, DegreeModelError, ScaledChiSquare


def chi_square_from_moments(mean: float, sd: float) -> ScaledChiSquare:
    if not (mean > 0 and sd > 0):
        raise DegreeModelError(f"mean and sd must be positive, got {mean}, {sd}")
    var = sd * sd
    return ScaledChiSquare(k=2.0 * mean * mean / var, c=var / (2.0 * mean))


def _model(n, recip, indeg, outdeg, corr, mode=CORRELATED) -> DegreeModel:
    return DegreeModel(
        n=n,
        recip=chi_square_from_moments(*recip),
        indeg=chi_square_from_moments(*indeg),
        outdeg=chi_square_from_moments(*outdeg),
        corr=CorrelationTriple(*corr),
        mode=mode,
    )


# 459 nodes, ~5,435 directed entries
G4 = _model(459, (6.0, 9.0), (5.84, 9.0), (5.84, 9.0), (0.465, 0.606, 0.240))

# 11,015 nodes, ~380,000 directed entries
G1 = _model(11015, (16.5, 35.0), (18.0, 39.0), (18.0, 39.0), (0.540, 0.612, 0.284))

# 5,000 nodes, ~15 entries per node
DESK = _model(5000, (7.5, 14.0), (7.8, 14.0), (7.8, 14.0), (0.407, 0.547, 0.250))

PRESETS = {"g4": G4, "g1": G1, "desk": DESK}


def expected_entries(model: DegreeModel) -> float:
    """Configured expectation of directed entries: n * (mean R + (mean I + mean O) / 2)."""
    return model.n * (model.recip.mean + 0.5 * (model.indeg.mean + model.outdeg.mean))
