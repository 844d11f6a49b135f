"""Growing directed multigraph with loops.

Edges are stored as two parallel ``int32`` arrays (tails and heads) in creation
order. Every edge is oriented from its newer endpoint to its older one, so
``tail >= head`` always holds and the head is the *target end*. Vertex ids are
1-based.

Records are sorted by tail: the ``e0`` seed edges come first, then each grown
vertex ``v`` owns the block ``[e0 + m*(v-1-n0), e0 + m*(v-n0))``. That layout doubles as the
pair-multiplicity index: ``e_ij`` for ``i >= j`` is the number of records in
``i``'s block whose head is ``j``, an O(m) scan with no hash map.
"""
from __future__ import annotations

import enum
import io
import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, NamedTuple, TextIO

import numpy as np

from .errors import ConfigError, EdgeListError

HEADER_PREFIX = "# pagen-edgelist"


class EdgeRecord(NamedTuple):
    tail: int
    head: int


class SeedKind(str, enum.Enum):
    SELF_LOOPS = "self-loops"
    CYCLE = "cycle"


@dataclass(frozen=True)
class SeedGraphSpec:
    n0: int = 1
    kind: SeedKind = SeedKind.SELF_LOOPS

    def __post_init__(self):
        object.__setattr__(self, "kind", SeedKind(self.kind))


class MultiGraph:
    """Append-only multigraph in which every grown vertex has out-degree ``m``.

    A loop adds one to the in-degree and one to the out-degree of its vertex,
    so it contributes two to the total degree and the handshake identity
    ``sum(degree) == 2*m*n`` holds exactly.
    """

    def __init__(self, m: int, seed_tails, seed_heads, n0: int, capacity: int | None = None):
        if m < 1:
            raise ConfigError(f"m must be a positive integer, got {m}")
        seed_tails = np.asarray(seed_tails, dtype=np.int64)
        seed_heads = np.asarray(seed_heads, dtype=np.int64)
        if len(seed_tails) != len(seed_heads):
            raise ConfigError("seed tails and heads differ in length")
        if np.any(seed_tails < seed_heads) or np.any(seed_heads < 1) or np.any(seed_tails > n0):
            raise ConfigError("seed edges must satisfy 1 <= head <= tail <= n0")
        if np.any(np.diff(seed_tails) < 0):
            raise ConfigError("seed edges must be sorted by tail")

        self.m = m
        self.n0 = n0
        self.n = n0
        e0 = len(seed_tails)
        # grown blocks start after the seed; off == 0 for the usual m*n0-edge seed
        self._off = e0 - m * n0
        cap = max(n0, capacity or 0, 16)
        self._tails = np.zeros(m * cap + max(self._off, 0), dtype=np.int32)
        self._heads = np.zeros(m * cap + max(self._off, 0), dtype=np.int32)
        self._in_deg = np.zeros(cap + 2, dtype=np.int32)
        self._deg = np.zeros(cap + 2, dtype=np.int32)
        self._tails[:e0] = seed_tails
        self._heads[:e0] = seed_heads
        np.add.at(self._in_deg, seed_heads, 1)
        np.add.at(self._deg, seed_heads, 1)
        np.add.at(self._deg, seed_tails, 1)
        # seed_start[v-1]:seed_start[v] are the records with tail v, v <= n0
        self._seed_start = np.searchsorted(seed_tails, np.arange(1, n0 + 2), side="left").astype(np.int64)

    # -- capacity -----------------------------------------------------------------

    @property
    def capacity(self) -> int:
        return (len(self._tails) - max(self._off, 0)) // self.m

    def reserve(self, n: int) -> None:
        """Grow storage so that the graph can hold ``n`` vertices without reallocating."""
        if n <= self.capacity:
            return
        m = self.m
        e = self.num_edges
        size = m * n + max(self._off, 0)
        tails = np.zeros(size, dtype=np.int32)
        heads = np.zeros(size, dtype=np.int32)
        tails[:e] = self._tails[:e]
        heads[:e] = self._heads[:e]
        in_deg = np.zeros(n + 2, dtype=np.int32)
        deg = np.zeros(n + 2, dtype=np.int32)
        in_deg[: self.n + 1] = self._in_deg[: self.n + 1]
        deg[: self.n + 1] = self._deg[: self.n + 1]
        self._tails, self._heads, self._in_deg, self._deg = tails, heads, in_deg, deg

    # -- views --------------------------------------------------------------------

    @property
    def num_edges(self) -> int:
        return self.m * self.n + self._off

    @property
    def tails(self) -> np.ndarray:
        return self._tails[: self.num_edges]

    @property
    def heads(self) -> np.ndarray:
        return self._heads[: self.num_edges]

    @property
    def degrees(self) -> np.ndarray:
        """Total degrees indexed by vertex id; entry 0 is a zero placeholder."""
        return self._deg[: self.n + 1]

    @property
    def in_degrees(self) -> np.ndarray:
        return self._in_deg[: self.n + 1]

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return int(self._deg[v])

    def in_degree(self, v: int) -> int:
        self._check_vertex(v)
        return int(self._in_deg[v])

    def out_degree(self, v: int) -> int:
        self._check_vertex(v)
        return int(self._deg[v] - self._in_deg[v])

    def edge(self, index: int) -> EdgeRecord:
        return EdgeRecord(int(self._tails[index]), int(self._heads[index]))

    def edges(self) -> Iterable[EdgeRecord]:
        for t, h in zip(self.tails.tolist(), self.heads.tolist()):
            yield EdgeRecord(t, h)

    def out_range(self, v: int) -> tuple[int, int]:
        """Slice of the edge arrays holding the records with tail ``v``."""
        if v <= self.n0:
            return int(self._seed_start[v - 1]), int(self._seed_start[v])
        start = self.m * (v - 1) + self._off
        return start, start + self.m

    def edge_multiplicity(self, i: int, j: int) -> int:
        """Number of edges between ``i`` and ``j`` (loops when ``i == j``)."""
        self._check_vertex(i)
        self._check_vertex(j)
        hi, lo = (i, j) if i >= j else (j, i)
        start, stop = self.out_range(hi)
        return int(np.count_nonzero(self._heads[start:stop] == lo))

    def pair_multiplicity(self) -> dict[tuple[int, int], int]:
        """Full ``{(i, j): e_ij}`` map with ``i >= j``, recomputed from the edge arrays."""
        return dict(Counter(zip(self.tails.tolist(), self.heads.tolist())))

    def _check_vertex(self, v: int) -> None:
        if not 1 <= v <= self.n:
            raise IndexError(f"vertex {v} out of range 1..{self.n}")

    # -- mutation -----------------------------------------------------------------

    def add_vertex(self, targets) -> int:
        """Append vertex ``n+1`` with one edge to each target; returns the new id."""
        targets = [int(t) for t in targets]
        if len(targets) != self.m:
            raise ValueError(f"expected {self.m} targets, got {len(targets)}")
        v = self.n + 1
        for t in targets:
            if not 1 <= t <= v:
                raise ValueError(f"target {t} out of range 1..{v}")
        if v > self.capacity:
            self.reserve(max(2 * self.capacity, v))
        base = self.num_edges
        for s, t in enumerate(targets):
            self._tails[base + s] = v
            self._heads[base + s] = t
            self._in_deg[t] += 1
            self._deg[t] += 1
            self._deg[v] += 1
        self.n = v
        return v

    def copy(self) -> "MultiGraph":
        g = MultiGraph.__new__(MultiGraph)
        g.m, g.n0, g.n, g._off = self.m, self.n0, self.n, self._off
        g._tails = self._tails.copy()
        g._heads = self._heads.copy()
        g._in_deg = self._in_deg.copy()
        g._deg = self._deg.copy()
        g._seed_start = self._seed_start.copy()
        return g

    def __eq__(self, other):
        if not isinstance(other, MultiGraph):
            return NotImplemented
        return (
            self.m == other.m
            and self.n == other.n
            and np.array_equal(self.tails, other.tails)
            and np.array_equal(self.heads, other.heads)
        )

    def __repr__(self):
        return f"MultiGraph(n={self.n}, m={self.m}, n0={self.n0})"

    @classmethod
    def from_edges(cls, edges, m: int = 1, n: int | None = None) -> "MultiGraph":
        """Treat an arbitrary edge collection as the seed of a graph with out-degree ``m``.

        Pairs are oriented newer-to-older and stably sorted by tail. ``n``
        defaults to the largest vertex id.
        """
        pairs = [(max(int(u), int(v)), min(int(u), int(v))) for u, v in edges]
        pairs.sort(key=lambda p: p[0])
        if n is None:
            n = max((t for t, _ in pairs), default=1)
        return cls(m, [t for t, _ in pairs], [h for _, h in pairs], n)


def seed_graph(spec: SeedGraphSpec, m: int, capacity: int | None = None) -> MultiGraph:
    """Initial graph with ``spec.n0`` vertices and ``m*n0`` edges.

    ``self-loops`` gives every seed vertex ``m`` loops. ``cycle`` is the
    ``n0``-cycle with every edge repeated ``m`` times (for ``n0 == 2`` that is
    ``2m`` parallel edges between vertices 1 and 2).
    """
    if m < 1:
        raise ConfigError(f"m must be a positive integer, got {m}")
    n0 = spec.n0
    if n0 < 1:
        raise ConfigError(f"n0 must be >= 1, got {n0}")
    if spec.kind is SeedKind.SELF_LOOPS:
        tails = np.repeat(np.arange(1, n0 + 1), m)
        heads = tails.copy()
    else:
        if n0 < 2:
            raise ConfigError("a cycle seed needs n0 >= 2")
        pairs = [(v, v - 1) for v in range(2, n0 + 1)] + [(n0, 1)]
        pairs.sort()
        tails = np.repeat([t for t, _ in pairs], m)
        heads = np.repeat([h for _, h in pairs], m)
    return MultiGraph(m, tails, heads, n0, capacity=capacity)


# -- edge-list I/O --------------------------------------------------------------


def serialize_edge_list(g: MultiGraph, sink: TextIO, params: dict | None = None) -> None:
    """Write ``g`` as ``tail<TAB>head`` lines in creation order.

    ``params`` (the generating configuration) is embedded as a JSON comment so
    that every file records how it was produced.
    """
    extra = f" e0={g.m * g.n0 + g._off}" if g._off else ""
    sink.write(f"{HEADER_PREFIX} m={g.m} n0={g.n0}{extra}\n")
    if params is not None:
        sink.write("# params " + json.dumps(params, sort_keys=True) + "\n")
    data = np.column_stack((g.tails, g.heads))
    buf = io.StringIO()
    np.savetxt(buf, data, fmt="%d", delimiter="\t")
    sink.write(buf.getvalue())


def edge_list_string(g: MultiGraph, params: dict | None = None) -> str:
    buf = io.StringIO()
    serialize_edge_list(g, buf, params)
    return buf.getvalue()


def _parse_header(line: str, lineno: int) -> dict[str, int]:
    fields = {}
    for tok in line[len(HEADER_PREFIX):].split():
        key, sep, value = tok.partition("=")
        if not sep or not value.isdigit():
            raise EdgeListError(f"bad header field {tok!r}", lineno)
        fields[key] = int(value)
    return fields


def _infer_n0(tails: np.ndarray, m: int) -> int:
    """Smallest seed size such that every later vertex owns exactly its block."""
    idx = np.arange(len(tails))
    block_owner = idx // m + 1
    mismatched = np.nonzero(tails != block_owner)[0]
    n0 = int(block_owner[mismatched[-1]]) if len(mismatched) else 1
    while True:
        grown = max(n0, int(tails[: m * n0].max()))
        if grown == n0:
            return n0
        n0 = grown


def parse_edge_list(source: TextIO, m: int | None = None) -> MultiGraph:
    """Inverse of :func:`serialize_edge_list`.

    ``m`` may come from the argument or the header; if both are present they
    must agree. Without a header ``n0`` is inferred as the smallest seed that
    makes the remaining records follow the one-block-per-vertex layout.
    """
    header: dict[str, int] = {}
    tails: list[int] = []
    heads: list[int] = []
    for lineno, line in enumerate(source, start=1):
        line = line.rstrip("\n").rstrip("\r")
        if line.startswith("#"):
            if line.startswith(HEADER_PREFIX):
                header = _parse_header(line, lineno)
            continue
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0].isdigit() or not parts[1].isdigit():
            raise EdgeListError(f"expected 'tail<TAB>head', got {line!r}", lineno)
        t, h = int(parts[0]), int(parts[1])
        if h < 1:
            raise EdgeListError(f"vertex ids are 1-based, got head {h}", lineno)
        if t < h:
            raise EdgeListError(f"tail {t} < head {h}; edges must point to the older vertex", lineno)
        if tails and t < tails[-1]:
            raise EdgeListError("edges must appear in creation order (tails nondecreasing)", lineno)
        tails.append(t)
        heads.append(h)

    if m is None:
        m = header.get("m")
        if m is None:
            raise EdgeListError("m not given and no header present")
    elif "m" in header and header["m"] != m:
        raise EdgeListError(f"m={m} disagrees with header m={header['m']}")
    if not tails:
        raise EdgeListError("no edges")
    e0 = header.get("e0")
    t_arr = np.asarray(tails, dtype=np.int64)
    h_arr = np.asarray(heads, dtype=np.int64)
    if e0 is None:
        if len(tails) % m:
            raise EdgeListError(f"edge count {len(tails)} is not divisible by m={m}")
        n0 = header.get("n0") or _infer_n0(t_arr, m)
        e0 = m * n0
    else:
        n0 = header.get("n0")
        if n0 is None:
            raise EdgeListError("header field e0 requires n0")
        if e0 > len(tails) or (len(tails) - e0) % m:
            raise EdgeListError(f"{len(tails) - e0} grown records is not a multiple of m={m}")
    n = n0 + (len(tails) - e0) // m
    if e0 > len(tails):
        raise EdgeListError(f"n0={n0} needs {e0} seed records, file has {len(tails)}")
    if e0 and int(t_arr[:e0].max()) > n0:
        raise EdgeListError(f"seed edges reference vertices beyond n0={n0}")
    owners = np.arange(len(tails) - e0) // m + n0 + 1
    bad = np.nonzero(t_arr[e0:] != owners)[0]
    if len(bad):
        raise EdgeListError(
            f"vertex {int(owners[bad[0]])} must own exactly {m} consecutive records (edge #{e0 + int(bad[0]) + 1})"
        )
    g = MultiGraph(m, t_arr[:e0], h_arr[:e0], n0, capacity=n)
    rest_t = t_arr[e0:]
    rest_h = h_arr[e0:]
    e = len(tails)
    g._tails[e0:e] = rest_t
    g._heads[e0:e] = rest_h
    np.add.at(g._in_deg, rest_h, 1)
    np.add.at(g._deg, rest_h, 1)
    np.add.at(g._deg, rest_t, 1)
    g.n = n
    return g
