"""Growth process for the polynomial model.

Each step draws all ``m`` targets from the graph as it stood before the step
(a weight-table key, then edge pairs, then target ends, then uniform
vertices) and only then inserts the new vertex. Running counts of paths of
length two and of triangles are maintained incrementally so that a trace of
the clustering coefficient comes for free.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import TextIO

import numpy as np

from . import _backend
from .errors import ConfigError, OracleTooLarge
from .graph import MultiGraph, SeedGraphSpec, seed_graph
from .model import WeightTable
from .rng import GENERATION_STREAM, RandomStream, derive_stream

ORACLE_LIMIT = 10**6


def default_checkpoints(n: int, n0: int = 1) -> list[int]:
    """Geometric grid ``round(10**(1 + 0.06 i))`` up to ``n``, plus ``n`` itself."""
    pts = set()
    i = 0
    while True:
        size = round(10 ** (1 + 0.06 * i))
        if size > n:
            break
        if size >= n0:
            pts.add(size)
        i += 1
    pts.add(n)
    return sorted(pts)


@dataclass
class GenerationConfig:
    n: int
    table: WeightTable
    seed_spec: SeedGraphSpec = field(default_factory=SeedGraphSpec)
    master_seed: int = 0
    checkpoints: list[int] | None = None
    stream_index: int = GENERATION_STREAM

    def __post_init__(self):
        if self.n < self.seed_spec.n0:
            raise ConfigError(f"n={self.n} is smaller than the seed size n0={self.seed_spec.n0}")
        if self.checkpoints is None:
            self.checkpoints = default_checkpoints(self.n, self.seed_spec.n0)
        else:
            cps = [int(c) for c in self.checkpoints]
            if cps != sorted(set(cps)):
                raise ConfigError("checkpoints must be strictly increasing")
            if cps and (cps[0] < self.seed_spec.n0 or cps[-1] > self.n):
                raise ConfigError(f"checkpoints must lie in [{self.seed_spec.n0}, {self.n}]")
            self.checkpoints = cps

    def as_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.table.m,
            "table": self.table.describe(),
            "n0": self.seed_spec.n0,
            "seedKind": self.seed_spec.kind.value,
            "masterSeed": self.master_seed,
            "streamIndex": self.stream_index,
        }


@dataclass(frozen=True)
class TraceRow:
    n: int
    p2: int
    triangles: int

    @property
    def clustering(self) -> float | None:
        return 3 * self.triangles / self.p2 if self.p2 else None


@dataclass
class GrowthTrace:
    rows: list[TraceRow] = field(default_factory=list)

    @property
    def final(self) -> TraceRow:
        return self.rows[-1]

    def write_csv(self, sink: TextIO, params: dict | None = None) -> None:
        if params is not None:
            import json

            sink.write("# params " + json.dumps(params, sort_keys=True) + "\n")
        sink.write("n,p2,triangles,clustering\n")
        for r in self.rows:
            c = "" if r.clustering is None else repr(r.clustering)
            sink.write(f"{r.n},{r.p2},{r.triangles},{c}\n")


def _check_table(g: MultiGraph, table: WeightTable) -> None:
    if table.m != g.m:
        raise ConfigError(f"table is for m={table.m} but graph has m={g.m}")
    if not table.support:
        raise ConfigError("table has no positive weight")


def grow_step(g: MultiGraph, table: WeightTable, s: RandomStream, kernels=None) -> tuple[int, ...]:
    """Targets of the next vertex as an ordered m-tuple; ``g`` is not modified.

    Slots ``2x-1, 2x`` of each edge pair hold the (head, tail) of the drawn edge.
    """
    return tuple(sample_steps(g, table, s, 1, kernels)[0].tolist())


def sample_steps(g: MultiGraph, table: WeightTable, s: RandomStream, trials: int, kernels=None) -> np.ndarray:
    """``trials`` independent draws of :func:`grow_step` as a ``(trials, m)`` array."""
    _check_table(g, table)
    if g.num_edges < 1:
        raise ValueError("graph has no edges to sample")
    k = kernels or _backend.kernels
    ks, ls, cum = table.kernel_arrays()
    return k.sample_steps(g.tails, g.heads, g.n, g.m, ks, ls, cum, s.bit_generator, trials)


def incremental_triangle_delta(g: MultiGraph, targets) -> int:
    """Triangles closed by attaching a new vertex to ``targets`` (not yet applied).

    Each unordered pair of slots hitting two distinct old vertices ``i, j``
    closes ``e_ij`` triangles; loops and repeated targets close none.
    """
    targets = list(targets)
    total = 0
    for a, b in itertools.combinations(range(len(targets)), 2):
        i, j = targets[a], targets[b]
        if i != j and i <= g.n and j <= g.n:
            total += g.edge_multiplicity(i, j)
    return total


def grow_to(g: MultiGraph, table: WeightTable, s: RandomStream, n_target: int,
            checkpoints=(), p2: int | None = None, triangles: int | None = None, kernels=None):
    """Advance ``g`` in place to ``n_target`` vertices; returns the trace rows hit on the way."""
    from .analytics import count_p2, count_triangles

    _check_table(g, table)
    k = kernels or _backend.kernels
    if p2 is None:
        p2 = count_p2(g)
    if triangles is None:
        triangles = count_triangles(g)
    rows = []
    cps = [c for c in checkpoints if c > g.n]
    if g.n in checkpoints:
        rows.append(TraceRow(g.n, p2, triangles))
    if n_target <= g.n:
        return rows, p2, triangles
    g.reserve(n_target)
    cp_arr = np.asarray(cps, dtype=np.int64)
    cp_p2 = np.zeros(len(cps), dtype=np.int64)
    cp_tri = np.zeros(len(cps), dtype=np.int64)
    ks, ls, cum = table.kernel_arrays()
    e_old = g.num_edges
    p2, triangles = k.grow(g._tails, g._heads, g._deg, g._seed_start, g.n, n_target,
                           g.m, g.n0, ks, ls, cum, s.bit_generator, cp_arr, cp_p2, cp_tri,
                           p2, triangles)
    # in-degrees are rebuilt in one vectorised pass rather than inside the hot loop
    new_heads = g._heads[e_old : e_old + g.m * (n_target - g.n)]
    g._in_deg[: n_target + 1] += np.bincount(new_heads, minlength=n_target + 1).astype(np.int32)
    g.n = n_target
    rows.extend(TraceRow(int(c), int(a), int(b)) for c, a, b in zip(cps, cp_p2, cp_tri))
    return rows, int(p2), int(triangles)


def generate(cfg: GenerationConfig, kernels=None) -> tuple[MultiGraph, GrowthTrace]:
    """Grow a graph to ``cfg.n`` vertices. Deterministic in ``cfg.master_seed``."""
    if cfg.table.m < 1:
        raise ConfigError("m must be positive")
    g = seed_graph(cfg.seed_spec, cfg.table.m, capacity=cfg.n)
    s = derive_stream(cfg.master_seed, cfg.stream_index)
    rows, _, _ = grow_to(g, cfg.table, s, cfg.n, cfg.checkpoints, kernels=kernels)
    return g, GrowthTrace(rows)


def exact_step_distribution(g: MultiGraph, table: WeightTable) -> dict[tuple[int, ...], float]:
    """Exact probability of every ordered target tuple for the next step.

    Direct evaluation of the weighted sum of monomials: a pair factor for slots
    ``(2x-1, 2x) = (a, b)`` is the number of records with head ``a`` and tail
    ``b`` over ``mn``; a target factor is ``in_degree / mn``; a uniform factor is
    ``1 / (n+1)``. Only for tiny instances.
    """
    _check_table(g, table)
    n, m = g.n, g.m
    if (n + 1) ** m > ORACLE_LIMIT:
        raise OracleTooLarge(f"(n+1)^m = {(n + 1) ** m} tuples exceeds the oracle limit {ORACLE_LIMIT}")
    mn = g.num_edges  # m*n unless the seed is non-standard
    oriented = {}
    for t, h in zip(g.tails.tolist(), g.heads.tolist()):
        oriented[(h, t)] = oriented.get((h, t), 0) + 1
    in_deg = g.in_degrees.tolist() + [0]
    vertices = range(1, n + 2)
    dist = {}
    for tup in itertools.product(vertices, repeat=m):
        p = 0.0
        for k, l, w in table.entries:
            if w == 0:
                continue
            term = w
            for x in range(k):
                term *= oriented.get((tup[2 * x], tup[2 * x + 1]), 0) / mn
            for y in range(2 * k, l):
                term *= in_deg[tup[y]] / mn
            term *= (1.0 / (n + 1)) ** (m - l)
            p += term
        if p > 0:
            dist[tup] = p
    return dist


def marginal_sum(dist: dict) -> float:
    return math.fsum(dist.values())
