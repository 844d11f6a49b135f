"""Seeded random streams and the sampling primitives used by the growth steps.

Every random decision in the package goes through a 64-bit raw draw from a
PCG64 generator. Bounded integers use Lemire's multiply-and-reject method and
floats take the top 53 bits, so the pure-Python and compiled kernels consume
exactly the same raw values and produce identical graphs.
"""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
_INV_2_53 = 1.0 / 9007199254740992.0

GENERATION_STREAM = 0
REPLICA_STREAM_BASE = 1000


def bounded_from(raw, bound):
    """Unbiased integer in ``[0, bound)`` from a zero-argument raw-uint64 source."""
    x = raw()
    prod = x * bound
    low = prod & MASK64
    if low < bound:
        threshold = (MASK64 + 1 - bound) % bound  # unsigned -bound mod bound
        while low < threshold:
            x = raw()
            prod = x * bound
            low = prod & MASK64
    return prod >> 64


def double_from(raw):
    return (raw() >> 11) * _INV_2_53


def categorical_from(raw, cumulative):
    """Index of the first cumulative weight exceeding a uniform draw."""
    u = double_from(raw)
    last = len(cumulative) - 1
    j = 0
    while j < last and u >= cumulative[j]:
        j += 1
    return j


class RandomStream:
    """Deterministic stream keyed by ``(master_seed, stream_index)``.

    The pair is hashed through :class:`numpy.random.SeedSequence` (the stream
    index is the spawn key), so distinct indices give independent streams and
    the same pair gives the same sequence on every platform.
    """

    def __init__(self, master_seed: int, stream_index: int = GENERATION_STREAM):
        if stream_index < 0:
            raise ValueError(f"stream index must be non-negative, got {stream_index}")
        self.master_seed = int(master_seed) & MASK64
        self.stream_index = int(stream_index)
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(self.stream_index,))
        self.bit_generator = np.random.PCG64(seq)
        self._raw = self.bit_generator.random_raw

    def next_u64(self) -> int:
        return self._raw()

    def random(self) -> float:
        """Uniform float in [0, 1)."""
        return double_from(self._raw)

    def bounded(self, bound: int) -> int:
        if bound < 1:
            raise ValueError(f"bound must be >= 1, got {bound}")
        return bounded_from(self._raw, bound)

    def categorical(self, cumulative) -> int:
        return categorical_from(self._raw, cumulative)

    def snapshot(self) -> dict:
        return self.bit_generator.state

    def restore(self, state: dict) -> None:
        self.bit_generator.state = state

    def __repr__(self):
        return f"RandomStream(master_seed={self.master_seed}, stream_index={self.stream_index})"


def derive_stream(master_seed: int, stream_index: int = GENERATION_STREAM) -> RandomStream:
    return RandomStream(master_seed, stream_index)


def replica_stream(master_seed: int, replica: int) -> RandomStream:
    return RandomStream(master_seed, REPLICA_STREAM_BASE + replica)


def sample_uniform_edge(g, s: RandomStream):
    """Uniformly chosen edge record of ``g`` (each of the m*n records with prob 1/(mn))."""
    e = g.num_edges
    if e < 1:
        raise ValueError("cannot sample an edge from an empty graph")
    return g.edge(s.bounded(e))


def sample_uniform_vertex(bound: int, s: RandomStream) -> int:
    """Uniform vertex id in ``{1, ..., bound}``."""
    return s.bounded(bound) + 1


def sample_weight_entry(table, s: RandomStream) -> tuple[int, int]:
    """Draw a ``(k, l)`` key of ``table`` with probability equal to its weight."""
    keys = table.support
    return keys[s.categorical(table.cumulative)]
