"""Closed-form predictions: degree law, P2 growth, triangles, clustering limit."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .model import ModelConstants, Regime, p2_base_coefficient, regime_of


@dataclass(frozen=True)
class DegreeLawPrediction:
    d: int
    cmd: float
    error_exponent: float

    def expected_count(self, n: float) -> float:
        return self.cmd * n


def _gamma_args(m, A, B, d):
    return (d + B / A, m + (B + 1) / A, d + (B + A + 1) / A, m + B / A)


def degree_constant(m: int, A: float, B: float, d: int) -> float:
    """Limiting fraction of vertices of degree ``d``, evaluated in log-Gamma space."""
    if not 0 < A <= 1:
        raise DomainError(f"degree law needs 0 < A <= 1, got A={A}")
    if d < m:
        raise DomainError(f"degree law holds for d >= m={m}, got d={d}")
    args = _gamma_args(m, A, B, d)
    if min(args) <= 0:
        raise DomainError(f"non-positive Gamma argument for m={m}, A={A}, B={B}, d={d}")
    a, b, c, e = args
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.log(A) - math.lgamma(c) - math.lgamma(e))


def degree_law(m: int, A: float, B: float, d: int) -> DegreeLawPrediction:
    return DegreeLawPrediction(d, degree_constant(m, A, B, d), 2 + 1 / A)


def degree_ratio(A: float, B: float, d: int) -> float:
    """``c(m, d+1) / c(m, d)``."""
    return (d + B / A) / (d + 1 + (B + 1) / A)


def degree_table(m: int, A: float, B: float, d_max: int) -> np.ndarray:
    """``c(m, d)`` for ``d = m..d_max`` (log-Gamma at every point)."""
    if d_max < m:
        return np.zeros(0)
    return np.array([degree_constant(m, A, B, d) for d in range(m, d_max + 1)])


@dataclass(frozen=True)
class P2Prediction:
    regime: Regime
    value: float | None
    exponent: float


def p2_prediction(m: int, A: float, B: float, n: float) -> P2Prediction:
    """Leading-order P2(n): linear, ``n ln n``, or only the exponent ``2A`` when supercritical."""
    if not 0 <= A <= 1:
        raise DomainError(f"A must lie in [0, 1], got {A}")
    base = p2_base_coefficient(m, A, B)
    regime = regime_of(A)
    if regime is Regime.SUBCRITICAL:
        return P2Prediction(regime, base * n / (1 - 2 * A), 1.0)
    if regime is Regime.CRITICAL:
        return P2Prediction(regime, base * n * math.log(n), 1.0)
    return P2Prediction(regime, None, 2 * A)


def triangle_prediction(D: float, n: float) -> float:
    if D < 0:
        raise DomainError(f"D must be non-negative, got {D}")
    return D * n


@dataclass(frozen=True)
class ClusteringPrediction:
    regime: Regime
    value: float | None
    decay_exponent: float | None  # C(n) ~ n^decay_exponent in the supercritical regime


def clustering_prediction(c: ModelConstants, n: float | None = None) -> ClusteringPrediction:
    if abs(2 * c.m * c.A + c.B - c.m) > 1e-9:
        raise DomainError("inconsistent constants: 2mA + B != m")
    base = p2_base_coefficient(c.m, c.A, c.B)
    if c.regime is Regime.SUBCRITICAL:
        return ClusteringPrediction(c.regime, 3 * (1 - 2 * c.A) * c.D / base, None)
    if c.regime is Regime.CRITICAL:
        if n is None:
            raise DomainError("the critical-regime clustering prediction needs n")
        return ClusteringPrediction(c.regime, 3 * c.D / (base * math.log(n)), None)
    return ClusteringPrediction(c.regime, None, 1 - 2 * c.A)


def three_param_clustering(m: int, alpha: float, beta: float) -> float:
    """Clustering limit of the three-parameter model written directly in its parameters."""
    s = 2 * alpha + beta
    return 3 * (1 - s) * beta / (5 * m - 1 - 2 * (2 * m - 1) * s)


def theory_report(c: ModelConstants, d_max: int | None = None, n: float | None = None) -> dict:
    out = c.as_json()
    table = []
    if c.A > 0:
        d_hi = d_max if d_max is not None else c.m + 30
        try:
            table = [[d, v] for d, v in zip(range(c.m, d_hi + 1), degree_table(c.m, c.A, c.B, d_hi).tolist())]
        except DomainError:
            table = []
    out["cTable"] = table
    if c.regime is Regime.CRITICAL and n is not None:
        out["clusteringAtN"] = clustering_prediction(c, n).value
    if c.regime is Regime.SUPERCRITICAL:
        out["p2GrowthExponent"] = 2 * c.A
        out["clusteringDecayExponent"] = 1 - 2 * c.A
    return out
