"""Observables of a multigraph: degree histogram, P2, triangles, clustering, d_nn, fits.

Conventions: loops count twice toward total degree, are excluded from
triangles and from neighbour sums; parallel edges are counted with
multiplicity everywhere.
"""
from __future__ import annotations

import itertools
import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np

from . import _backend
from .errors import FitError
from .graph import MultiGraph

POWER_LAW_MIN_COUNT = 30
DNN_MIN_VERTICES = 20
BRUTE_FORCE_LIMIT = 5000


@dataclass(frozen=True)
class DegreeHistogram:
    degrees: np.ndarray
    counts: np.ndarray
    n: int

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.degrees.tolist(), self.counts.tolist()))

    def count(self, d: int) -> int:
        i = np.searchsorted(self.degrees, d)
        return int(self.counts[i]) if i < len(self.degrees) and self.degrees[i] == d else 0

    def write_csv(self, sink: TextIO) -> None:
        sink.write("degree,count\n")
        for d, c in zip(self.degrees.tolist(), self.counts.tolist()):
            sink.write(f"{d},{c}\n")


@dataclass(frozen=True)
class DnnTable:
    degrees: np.ndarray
    avg_neighbor_degree: np.ndarray
    vertex_counts: np.ndarray

    def rows(self) -> list[tuple[int, float, int]]:
        return list(zip(self.degrees.tolist(), self.avg_neighbor_degree.tolist(), self.vertex_counts.tolist()))

    def write_csv(self, sink: TextIO) -> None:
        sink.write("degree,avg_neighbor_degree,count\n")
        for d, a, c in self.rows():
            sink.write(f"{d},{a!r},{c}\n")


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    stderr: float
    points_used: int
    window: tuple[float, float]


def degree_histogram(g: MultiGraph) -> DegreeHistogram:
    counts = np.bincount(g.degrees[1:])
    degrees = np.nonzero(counts)[0]
    return DegreeHistogram(degrees, counts[degrees], g.n)


def count_p2(g: MultiGraph) -> int:
    """Pairs of adjacent edge ends: ``sum_v d_v (d_v - 1) / 2``."""
    d = g.degrees[1:].astype(np.int64)
    return int(np.sum(d * (d - 1)) // 2)


def count_triangles(g: MultiGraph, method: str = "indexed", kernels=None) -> int:
    """Triangles counted with multiplicity, ``sum_{i<j<k} e_ij e_jk e_ik``.

    ``indexed`` scans each vertex's out-records through the edge-block index in
    O(n m^2). ``brute`` intersects neighbour sets built from scratch and serves
    as an oracle for small graphs.
    """
    if method == "indexed":
        k = kernels or _backend.kernels
        return int(k.count_triangles(g._tails, g._heads, g._seed_start, g.n, g.m, g.n0))
    if method == "brute":
        if g.n > BRUTE_FORCE_LIMIT:
            raise ValueError(f"brute-force triangle count limited to n <= {BRUTE_FORCE_LIMIT}")
        return _brute_triangles(g)
    raise ValueError(f"unknown method {method!r}")


def _brute_triangles(g: MultiGraph) -> int:
    mult: dict[tuple[int, int], int] = defaultdict(int)
    nbrs: dict[int, set] = defaultdict(set)
    for t, h in zip(g.tails.tolist(), g.heads.tolist()):
        if t == h:
            continue
        mult[(h, t)] += 1
        nbrs[t].add(h)
        nbrs[h].add(t)
    total = 0
    for (i, j), e_ij in mult.items():
        for k in nbrs[i] & nbrs[j]:
            if k > j:
                total += e_ij * mult[(i, k)] * mult[(j, k)]
    return total


def global_clustering(g: MultiGraph) -> float | None:
    """``3 * triangles / P2``; None when there are no adjacent edge pairs."""
    p2 = count_p2(g)
    if p2 == 0:
        return None
    return 3 * count_triangles(g) / p2


def neighbor_degree_sums(g: MultiGraph) -> np.ndarray:
    """Per vertex, the sum over non-loop incident edge instances of the other end's degree."""
    t = g.tails.astype(np.int64)
    h = g.heads.astype(np.int64)
    keep = t != h
    t, h = t[keep], h[keep]
    deg = g.degrees.astype(np.float64)
    sums = np.bincount(t, weights=deg[h], minlength=g.n + 1)
    sums += np.bincount(h, weights=deg[t], minlength=g.n + 1)
    return sums


def dnn_curve(g: MultiGraph) -> DnnTable:
    """Average neighbour degree by vertex degree, ``sum / (d * N(d))``."""
    deg = g.degrees[1:].astype(np.int64)
    sums = neighbor_degree_sums(g)[1:]
    n_by_d = np.bincount(deg)
    s_by_d = np.bincount(deg, weights=sums, minlength=len(n_by_d))
    ds = np.nonzero(n_by_d)[0]
    ds = ds[ds > 0]
    avg = s_by_d[ds] / (ds * n_by_d[ds])
    return DnnTable(ds, avg, n_by_d[ds])


def fit_loglog_slope(points: Iterable[tuple[float, float]], min_y: float = 0.0) -> FitResult:
    """OLS of ``log y`` on ``log x`` over points with ``x > 0`` and ``y >= min_y`` (and ``y > 0``)."""
    pts = [(x, y) for x, y in points if x > 0 and y > 0 and y >= min_y]
    if len(pts) < 3:
        raise FitError(f"need at least 3 qualifying points, got {len(pts)}")
    x = np.log(np.array([p[0] for p in pts], dtype=np.float64))
    y = np.log(np.array([p[1] for p in pts], dtype=np.float64))
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    if sxx == 0:
        raise FitError("all x values coincide")
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    intercept = float(ym - slope * xm)
    resid = y - (intercept + slope * x)
    dof = len(pts) - 2
    stderr = math.sqrt(float(np.sum(resid**2)) / dof / sxx) if dof > 0 else 0.0
    xs = [p[0] for p in pts]
    return FitResult(slope, intercept, stderr, len(pts), (min(xs), max(xs)))


def fit_power_law(h: DegreeHistogram, m: int, min_count: int = POWER_LAW_MIN_COUNT) -> FitResult:
    """Log-log OLS on the raw histogram over ``d >= m`` with ``N(d) >= min_count``.

    The exponent estimate is ``-slope``.
    """
    pts = [(d, c) for d, c in zip(h.degrees.tolist(), h.counts.tolist()) if d >= m]
    return fit_loglog_slope(pts, min_y=min_count)


def fit_dnn_exponent(t: DnnTable, m: int, min_vertices: int = DNN_MIN_VERTICES) -> FitResult:
    pts = [(d, a) for d, a, c in t.rows() if d >= m and c >= min_vertices]
    return fit_loglog_slope(pts)


@dataclass
class StatsReport:
    n: int
    m: int
    gamma_hat: float | None
    gamma_stderr: float | None
    p2: int
    triangles: int
    clustering: float | None
    dnn_exponent: float | None
    fit_windows: dict = field(default_factory=dict)
    params: dict | None = None

    def as_json(self) -> dict:
        out = {
            "n": self.n,
            "m": self.m,
            "gammaHat": self.gamma_hat,
            "gammaStderr": self.gamma_stderr,
            "p2": self.p2,
            "triangles": self.triangles,
            "clustering": self.clustering,
            "dnnExponent": self.dnn_exponent,
            "fitWindows": self.fit_windows,
        }
        if self.params is not None:
            out["params"] = self.params
        return out

    def dumps(self) -> str:
        return json.dumps(self.as_json(), sort_keys=True, indent=2) + "\n"


def stats_report(g: MultiGraph, params: dict | None = None) -> StatsReport:
    h = degree_histogram(g)
    p2 = count_p2(g)
    tri = count_triangles(g)
    windows = {}
    try:
        pl = fit_power_law(h, g.m)
        gamma_hat, gamma_se = -pl.slope, pl.stderr
        windows["degree"] = {"dLow": pl.window[0], "dHigh": pl.window[1], "points": pl.points_used,
                             "minCount": POWER_LAW_MIN_COUNT}
    except FitError:
        gamma_hat = gamma_se = None
    try:
        dn = fit_dnn_exponent(dnn_curve(g), g.m)
        dnn_exp = dn.slope
        windows["dnn"] = {"dLow": dn.window[0], "dHigh": dn.window[1], "points": dn.points_used,
                          "minVertices": DNN_MIN_VERTICES}
    except FitError:
        dnn_exp = None
    return StatsReport(g.n, g.m, gamma_hat, gamma_se, p2, tri,
                       3 * tri / p2 if p2 else None, dnn_exp, windows, params)


def brute_force_p2(g: MultiGraph) -> int:
    """Adjacent edge-end pairs by enumerating, for each vertex, pairs of incident edge ends."""
    ends: dict[int, int] = defaultdict(int)
    for t, h in zip(g.tails.tolist(), g.heads.tolist()):
        ends[t] += 1
        ends[h] += 1
    return sum(sum(1 for _ in itertools.combinations(range(c), 2)) for c in ends.values())
