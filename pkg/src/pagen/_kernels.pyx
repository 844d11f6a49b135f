# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: growth loop, batch step sampling, indexed triangle count.

Mirrors ``_pykernels`` draw for draw. The growth loop runs without the GIL so
sweep replicas can share a thread pool.
"""
from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.stdint cimport int32_t, int64_t, uint64_t

import numpy as np

NAME = "cython"

cdef extern from *:
    """
    #include <stdint.h>
    #include "numpy/random/bitgen.h"

    static inline uint64_t pagen_bounded(bitgen_t *rng, uint64_t bound) {
        uint64_t x = rng->next_uint64(rng->state);
        __uint128_t prod = (__uint128_t)x * bound;
        uint64_t low = (uint64_t)prod;
        if (low < bound) {
            uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                x = rng->next_uint64(rng->state);
                prod = (__uint128_t)x * bound;
                low = (uint64_t)prod;
            }
        }
        return (uint64_t)(prod >> 64);
    }

    static inline double pagen_double(bitgen_t *rng) {
        return (double)(rng->next_uint64(rng->state) >> 11) * (1.0 / 9007199254740992.0);
    }
    """
    ctypedef struct bitgen_t:
        pass
    uint64_t pagen_bounded(bitgen_t *rng, uint64_t bound) nogil
    double pagen_double(bitgen_t *rng) nogil


cdef bitgen_t* _bitgen_ptr(object bit_generator) except NULL:
    return <bitgen_t*> PyCapsule_GetPointer(bit_generator.capsule, "BitGenerator")


cdef inline int64_t _multiplicity(const int32_t[::1] heads, const int64_t[::1] seed_start,
                                  int64_t m, int64_t n0, int64_t i, int64_t j) noexcept nogil:
    cdef int64_t hi = i, lo = j, start, stop, e, c = 0
    if j > i:
        hi = j
        lo = i
    if hi <= n0:
        start = seed_start[hi - 1]
        stop = seed_start[hi]
    else:
        start = m * (hi - 1) + seed_start[n0] - m * n0
        stop = start + m
    for e in range(start, stop):
        if heads[e] == lo:
            c += 1
    return c


cdef inline void _draw_targets(bitgen_t *rng, int64_t n, uint64_t e, int64_t m, int64_t e0, int64_t n0,
                               const int32_t[::1] tails, const int32_t[::1] heads,
                               const int64_t[::1] ks, const int64_t[::1] ls, const double[::1] cum,
                               int32_t *out) noexcept nogil:
    cdef double u = pagen_double(rng)
    cdef Py_ssize_t j = 0, last = cum.shape[0] - 1
    cdef int64_t k0, l0, x, s = 0, idx
    while j < last and u >= cum[j]:
        j += 1
    k0 = ks[j]
    l0 = ls[j]
    for x in range(k0):
        idx = <int64_t>pagen_bounded(rng, e)
        out[s] = heads[idx]
        # grown records know their tail from their position; saves a cache miss
        if idx >= e0:
            out[s + 1] = <int32_t>(n0 + 1 + (idx - e0) // m)
        else:
            out[s + 1] = tails[idx]
        s += 2
    for x in range(l0 - 2 * k0):
        out[s] = heads[<int64_t>pagen_bounded(rng, e)]
        s += 1
    for x in range(m - l0):
        out[s] = <int32_t>(pagen_bounded(rng, <uint64_t>(n + 1)) + 1)
        s += 1


def grow(int32_t[::1] tails, int32_t[::1] heads, int32_t[::1] deg,
         const int64_t[::1] seed_start, int64_t n, int64_t n_target, int64_t m, int64_t n0,
         const int64_t[::1] ks, const int64_t[::1] ls, const double[::1] cum, object bitgen,
         const int64_t[::1] checkpoints, int64_t[::1] cp_p2, int64_t[::1] cp_tri,
         int64_t p2, int64_t tri):
    cdef bitgen_t *rng = _bitgen_ptr(bitgen)
    cdef int32_t[::1] buf = np.zeros(max(m, 1), dtype=np.int32)
    cdef int32_t *b = &buf[0]
    cdef int64_t a, c, ia, ib, v, t, base
    cdef int64_t off = seed_start[n0] - m * n0
    cdef Py_ssize_t cp = 0, ncp = checkpoints.shape[0]
    with bitgen.lock, nogil:
        while n < n_target:
            _draw_targets(rng, n, <uint64_t>(m * n + off), m, m * n0 + off, n0, tails, heads, ks, ls, cum, b)
            for a in range(m):
                ia = b[a]
                if ia > n:
                    continue
                for c in range(a + 1, m):
                    ib = b[c]
                    if ib != ia and ib <= n:
                        tri += _multiplicity(heads, seed_start, m, n0, ia, ib)
            v = n + 1
            base = m * n + off
            for a in range(m):
                t = b[a]
                tails[base + a] = <int32_t>v
                heads[base + a] = <int32_t>t
                p2 += deg[v]
                deg[v] += 1
                p2 += deg[t]
                deg[t] += 1
            n = v
            while cp < ncp and checkpoints[cp] == n:
                cp_p2[cp] = p2
                cp_tri[cp] = tri
                cp += 1
    return p2, tri


def sample_steps(const int32_t[::1] tails, const int32_t[::1] heads, int64_t n, int64_t m,
                 const int64_t[::1] ks, const int64_t[::1] ls, const double[::1] cum,
                 object bitgen, int64_t trials):
    cdef bitgen_t *rng = _bitgen_ptr(bitgen)
    out_arr = np.empty((trials, m), dtype=np.int32)
    cdef int32_t[:, ::1] out = out_arr
    cdef int64_t t
    cdef uint64_t e = <uint64_t>tails.shape[0]
    if trials == 0:
        return out_arr
    with bitgen.lock, nogil:
        for t in range(trials):
            _draw_targets(rng, n, e, m, e, 0, tails, heads, ks, ls, cum, &out[t, 0])
    return out_arr


def count_triangles(const int32_t[::1] tails, const int32_t[::1] heads,
                    const int64_t[::1] seed_start, int64_t n, int64_t m, int64_t n0):
    cdef int64_t v, start, stop, a, c, ha, hb, total = 0
    cdef int64_t off = seed_start[n0] - m * n0
    with nogil:
        for v in range(1, n + 1):
            if v <= n0:
                start = seed_start[v - 1]
                stop = seed_start[v]
            else:
                start = m * (v - 1) + off
                stop = start + m
            for a in range(start, stop):
                ha = heads[a]
                if ha == v:
                    continue
                for c in range(a + 1, stop):
                    hb = heads[c]
                    if hb != ha and hb != v:
                        total += _multiplicity(heads, seed_start, m, n0, ha, hb)
    return total


def draw_bounded(object bitgen, uint64_t bound, int64_t count):
    """``count`` bounded draws; exposed so the sampling primitive can be checked in isolation."""
    cdef bitgen_t *rng = _bitgen_ptr(bitgen)
    out_arr = np.empty(count, dtype=np.uint64)
    cdef uint64_t[::1] out = out_arr
    cdef int64_t i
    with bitgen.lock, nogil:
        for i in range(count):
            out[i] = pagen_bounded(rng, bound)
    return out_arr
