"""Monte Carlo checks of the one-step attachment laws on a frozen graph.

Each audit draws many independent next-step target tuples from the same
graph (never mutating it) and compares empirical frequencies with the
leading-order predictions via binomial z-scores. Quadratic remainders that the
class definition allows are checked separately against ``10 * (d/n)**2``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .analytics import fit_loglog_slope
from .errors import ConfigError
from .generator import GenerationConfig, generate, sample_steps
from .graph import MultiGraph
from .model import WeightTable, model_constants
from .rng import RandomStream

MIN_TRIALS = 10**4
REMAINDER_FACTOR = 10.0
DEFAULT_Z_BOUND = 4.0


@dataclass
class AuditRow:
    subject: str
    observable: str
    empirical: float
    predicted: float
    stderr: float
    z: float | None
    bound: float | None = None  # allowed quadratic remainder
    passed: bool = True
    within_remainder: bool | None = None

    def as_json(self) -> dict:
        return {
            "subject": self.subject,
            "observable": self.observable,
            "empiricalProbability": self.empirical,
            "predictedProbability": self.predicted,
            "standardError": self.stderr,
            "zScore": self.z,
            "bound": self.bound,
            "passed": self.passed,
            "withinRemainder": self.within_remainder,
        }


@dataclass
class AuditReport:
    trials: int
    graph_size: int
    rows: list[AuditRow] = field(default_factory=list)
    z_bound: float = DEFAULT_Z_BOUND

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.rows)

    def max_abs_z(self) -> float:
        zs = [abs(r.z) for r in self.rows if r.z is not None]
        return max(zs) if zs else 0.0

    def extend(self, other: "AuditReport") -> None:
        self.rows.extend(other.rows)

    def as_json(self) -> dict:
        return {
            "trials": self.trials,
            "graphSize": self.graph_size,
            "zBound": self.z_bound,
            "ok": self.ok,
            "rows": [r.as_json() for r in self.rows],
        }

    def dumps(self, params: dict | None = None) -> str:
        out = self.as_json()
        if params is not None:
            out["params"] = params
        return json.dumps(out, sort_keys=True, indent=2) + "\n"


def binomial_z(hits: int, trials: int, predicted: float) -> tuple[float, float, float]:
    """``(empirical, stderr, z)`` using the binomial variance at the predicted value.

    When the prediction is 0 the empirical variance is used; two zeros give z = 0.
    """
    emp = hits / trials
    p = predicted if predicted > 0 else emp
    se = math.sqrt(max(p * (1 - p), 0.0) / trials)
    if se == 0:
        return emp, 0.0, 0.0 if emp == predicted else math.inf
    return emp, se, (emp - predicted) / se


def _z_row(subject, observable, emp, pred, se, z, remainder, z_bound) -> AuditRow:
    """Row z-tested against the leading term; also records whether the deviation fits the remainder."""
    within = abs(emp - pred) <= remainder + z_bound * se
    return AuditRow(subject, observable, emp, pred, se, z, bound=remainder,
                    passed=abs(z) <= z_bound, within_remainder=within)


def _check_trials(trials: int) -> None:
    if trials < MIN_TRIALS:
        raise ConfigError(f"audits need at least {MIN_TRIALS} trials, got {trials}")


def default_vertices(g: MultiGraph, s: RandomStream) -> dict[str, int]:
    """Max-degree, median-degree and one uniformly random vertex."""
    deg = g.degrees[1:]
    order = np.argsort(deg, kind="stable")
    return {
        "max-degree": int(order[-1]) + 1,
        "median-degree": int(order[len(order) // 2]) + 1,
        "random": s.bounded(g.n) + 1,
    }


def audit_increment_probabilities(g: MultiGraph, table: WeightTable, trials: int, s: RandomStream,
                                  vertices: dict[str, int] | None = None,
                                  z_bound: float = DEFAULT_Z_BOUND, kernels=None) -> AuditReport:
    """Single-step degree increments against ``A d/n + B/n``.

    Per vertex: ``P(+1)`` is z-tested against the linear law; ``P(>=2)`` must
    stay below ``10 (d/n)^2``; the mean increment, which is linear in ``d``
    without a quadratic remainder, is z-tested as well. A pooled least-squares
    estimate of ``A`` over all vertices is z-tested against the table's constant.
    """
    _check_trials(trials)
    c = model_constants(table)
    n = g.n
    if vertices is None:
        vertices = default_vertices(g, s)
    targets = sample_steps(g, table, s, trials, kernels)
    report = AuditReport(trials, n, z_bound=z_bound)
    for label, v in vertices.items():
        d = g.degree(v)
        hits = np.count_nonzero(targets == v, axis=1)
        subject = f"{label}:{v}(d={d})"
        pred = c.A * d / n + c.B / n
        bound = REMAINDER_FACTOR * (d / n) ** 2
        emp, se, z = binomial_z(int(np.count_nonzero(hits == 1)), trials, pred)
        report.rows.append(_z_row(subject, "P(+1)", emp, pred, se, z, bound, z_bound))
        mean = float(hits.mean())
        se_mean = math.sqrt(max(float(hits.var()), pred * (1 - pred)) / trials)
        z_mean = (mean - pred) / se_mean if se_mean > 0 else 0.0
        report.rows.append(AuditRow(subject, "E[increment]", mean, pred, se_mean, z_mean,
                                    passed=abs(z_mean) <= z_bound))
        multi = int(np.count_nonzero(hits >= 2))
        emp2 = multi / trials
        se2 = math.sqrt(emp2 * (1 - emp2) / trials)
        report.rows.append(AuditRow(subject, "P(>=2)", emp2, 0.0, se2, None, bound=bound,
                                    passed=emp2 <= bound + z_bound * se2))
    report.rows.append(_pooled_A(g, table, targets, c.A, c.B, z_bound))
    return report


def _pooled_A(g, table, targets, A, B, z_bound) -> AuditRow:
    """Least squares of ``n * E[hits_i]`` on ``d_i``, with ``B = m - 2mA`` imposed."""
    n, m = g.n, g.m
    trials = targets.shape[0]
    counts = np.bincount(targets.ravel(), minlength=n + 2)[1 : n + 1].astype(np.float64)
    deg = g.degrees[1:].astype(np.float64)
    x = deg - 2 * m
    y = counts * n / trials - m
    sxx = float(np.sum(x * x))
    if sxx == 0:
        return AuditRow("all-vertices", "A_hat", math.nan, A, 0.0, None, passed=True)
    a_hat = float(np.sum(x * y) / sxx)
    # per-vertex hit counts are ~Poisson with mean trials * (A d + B)/n
    lam = np.maximum(A * deg + B, 0.0) / n * trials
    var_y = lam * (n / trials) ** 2
    se = math.sqrt(float(np.sum(x * x * var_y))) / sxx
    z = (a_hat - A) / se if se > 0 else 0.0
    return AuditRow("all-vertices", "A_hat", a_hat, A, se, z, passed=abs(z) <= z_bound)


def default_pairs(g: MultiGraph, s: RandomStream) -> dict[str, tuple[int, int]]:
    """Hub with one of its neighbours, the most-multiple pair if any, and a random edge's ends."""
    tails, heads = g.tails, g.heads
    nonloop = np.nonzero(tails != heads)[0]
    if len(nonloop) == 0:
        return {}
    pairs = {}
    hub = int(np.argmax(g.degrees[1:])) + 1
    incident = nonloop[(tails[nonloop] == hub) | (heads[nonloop] == hub)]
    if len(incident):
        e = int(incident[s.bounded(len(incident))])
        pairs["hub-edge"] = (int(tails[e]), int(heads[e]))
    keys = tails[nonloop].astype(np.int64) * (g.n + 1) + heads[nonloop]
    uniq, cnt = np.unique(keys, return_counts=True)
    if cnt.max() >= 2:
        k = int(uniq[np.argmax(cnt)])
        pairs["multi-edge"] = (k // (g.n + 1), k % (g.n + 1))
    e = int(nonloop[s.bounded(len(nonloop))])
    pairs["random-edge"] = (int(tails[e]), int(heads[e]))
    return pairs


def audit_pair_increments(g: MultiGraph, table: WeightTable, trials: int, s: RandomStream,
                          pairs: dict[str, tuple[int, int]] | None = None,
                          z_bound: float = DEFAULT_Z_BOUND, kernels=None) -> AuditReport:
    """Joint increments of adjacent vertices against ``e_ij D / (mn)``."""
    _check_trials(trials)
    c = model_constants(table)
    n, m = g.n, g.m
    if pairs is None:
        pairs = default_pairs(g, s)
    targets = sample_steps(g, table, s, trials, kernels)
    report = AuditReport(trials, n, z_bound=z_bound)
    for label, (i, j) in pairs.items():
        e = g.edge_multiplicity(i, j)
        if e < 1 or i == j:
            raise ConfigError(f"pair ({i}, {j}) must be two distinct adjacent vertices")
        both = np.any(targets == i, axis=1) & np.any(targets == j, axis=1)
        hits = int(np.count_nonzero(both))
        pred = e * c.D / (m * n)
        emp, se, z = binomial_z(hits, trials, pred)
        di, dj = g.degree(i), g.degree(j)
        subject = f"{label}:({i},{j})(e={e},d={di},{dj})"
        bound = REMAINDER_FACTOR * di * dj / n**2
        if pred > 0:
            report.rows.append(_z_row(subject, "P(both +)", emp, pred, se, z, bound, z_bound))
        else:
            # no leading term: only the O(d_i d_j / n^2) remainder can show up
            se0 = math.sqrt(bound * (1 - bound) / trials)
            report.rows.append(AuditRow(subject, "P(both +)", emp, pred, se0, None, bound=bound,
                                        passed=emp <= bound + z_bound * se0))
    return report


def exact_loop_probability(table: WeightTable, n: int) -> float:
    """Only uniform slots can reach the newcomer, each with probability ``1/(n+1)``."""
    m = table.m
    return sum(w * (1 - (n / (n + 1)) ** (m - l)) for _, l, w in table.entries)


def audit_loop_probability(table: WeightTable, n_list, trials_per_n: int, master_seed: int = 0,
                           z_bound: float = DEFAULT_Z_BOUND, kernels=None) -> AuditReport:
    """Loop probability at each size against its exact value, plus its ``1/n`` decay."""
    _check_trials(trials_per_n)
    n_list = [int(n) for n in n_list]
    if n_list != sorted(n_list):
        raise ConfigError("n_list must be ascending")
    report = AuditReport(trials_per_n, n_list[-1] if n_list else 0, z_bound=z_bound)
    emps = []
    for idx, n in enumerate(n_list):
        g, _ = generate(GenerationConfig(n, table, master_seed=master_seed, checkpoints=[],
                                         stream_index=2000 + idx), kernels=kernels)
        s = RandomStream(master_seed, 3000 + idx)
        targets = sample_steps(g, table, s, trials_per_n, kernels)
        hits = int(np.count_nonzero(np.any(targets == n + 1, axis=1)))
        pred = exact_loop_probability(table, n)
        emp, se, z = binomial_z(hits, trials_per_n, pred)
        emps.append(emp)
        report.rows.append(AuditRow(f"n={n}", "P(loop)", emp, pred, se, z, passed=abs(z) <= z_bound))
    if len(n_list) >= 3 and all(e > 0 for e in emps):
        fit = fit_loglog_slope(zip(n_list, emps))
        report.rows.append(AuditRow("decay", "loglog slope", fit.slope, -1.0, fit.stderr, None,
                                    bound=0.3, passed=abs(fit.slope + 1.0) <= 0.3))
    return report


def full_audit(table: WeightTable, n: int, trials: int, master_seed: int = 0,
               loop_sizes=(100, 1000, 10000), z_bound: float = DEFAULT_Z_BOUND, kernels=None) -> AuditReport:
    """Increment, pair-increment and loop audits for one model at size ``n``."""
    g, _ = generate(GenerationConfig(n, table, master_seed=master_seed, checkpoints=[]), kernels=kernels)
    report = audit_increment_probabilities(g, table, trials, RandomStream(master_seed, 1), z_bound=z_bound,
                                           kernels=kernels)
    report.extend(audit_pair_increments(g, table, trials, RandomStream(master_seed, 2), z_bound=z_bound,
                                        kernels=kernels))
    report.extend(audit_loop_probability(table, loop_sizes, trials, master_seed, z_bound, kernels))
    return report
