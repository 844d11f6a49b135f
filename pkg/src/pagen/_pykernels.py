"""Pure-Python kernels.

Same signatures and same raw-draw consumption as the compiled ``_kernels``
module, so both produce identical output for identical streams. Used when the
extension is not built or ``PAGEN_PURE_PYTHON=1`` is set.
"""
import numpy as np

from .rng import bounded_from, categorical_from

NAME = "python"


def _multiplicity(heads, seed_start, m, n0, i, j):
    hi, lo = (i, j) if i >= j else (j, i)
    if hi <= n0:
        start, stop = seed_start[hi - 1], seed_start[hi]
    else:
        start = m * (hi - 1) + seed_start[n0] - m * n0
        stop = start + m
    c = 0
    for e in range(start, stop):
        if heads[e] == lo:
            c += 1
    return c


def _draw_targets(raw, n, e, m, tails, heads, ks, ls, cum, out):
    """Fill ``out`` with one step's targets; ``n`` vertices and ``e`` edges so far."""
    j = categorical_from(raw, cum)
    k0 = ks[j]
    l0 = ls[j]
    s = 0
    for _ in range(k0):
        idx = bounded_from(raw, e)
        out[s] = heads[idx]
        out[s + 1] = tails[idx]
        s += 2
    for _ in range(l0 - 2 * k0):
        out[s] = heads[bounded_from(raw, e)]
        s += 1
    for _ in range(m - l0):
        out[s] = bounded_from(raw, n + 1) + 1
        s += 1


def grow(tails, heads, deg, seed_start, n, n_target, m, n0, ks, ls, cum, bitgen,
         checkpoints, cp_p2, cp_tri, p2, tri):
    raw = bitgen.random_raw
    off = int(seed_start[n0]) - m * n0
    e0 = m * n + off
    tl = tails[:e0].tolist()
    hl = heads[:e0].tolist()
    dg = deg.tolist()
    ss = seed_start.tolist()
    ksl, lsl, cuml = ks.tolist(), ls.tolist(), cum.tolist()
    cps = checkpoints.tolist()
    cp = 0
    buf = [0] * m
    while n < n_target:
        _draw_targets(raw, n, len(hl), m, tl, hl, ksl, lsl, cuml, buf)
        for a in range(m):
            ia = buf[a]
            if ia > n:
                continue
            for b in range(a + 1, m):
                ib = buf[b]
                if ib != ia and ib <= n:
                    tri += _multiplicity(hl, ss, m, n0, ia, ib)
        v = n + 1
        for t in buf:
            tl.append(v)
            hl.append(t)
            p2 += dg[v]
            dg[v] += 1
            p2 += dg[t]
            dg[t] += 1
        n = v
        while cp < len(cps) and cps[cp] == n:
            cp_p2[cp] = p2
            cp_tri[cp] = tri
            cp += 1
    e1 = m * n + off
    tails[e0:e1] = tl[e0:]
    heads[e0:e1] = hl[e0:]
    deg[:] = dg
    return p2, tri


def sample_steps(tails, heads, n, m, ks, ls, cum, bitgen, trials):
    """``tails`` and ``heads`` hold exactly the current edges."""
    raw = bitgen.random_raw
    e = len(tails)
    tl = tails.tolist()
    hl = heads.tolist()
    ksl, lsl, cuml = ks.tolist(), ls.tolist(), cum.tolist()
    out = np.empty((trials, m), dtype=np.int32)
    buf = [0] * m
    for t in range(trials):
        _draw_targets(raw, n, e, m, tl, hl, ksl, lsl, cuml, buf)
        out[t] = buf
    return out


def count_triangles(tails, heads, seed_start, n, m, n0):
    """Each triangle is counted at its largest vertex from pairs of that vertex's out-records."""
    ss = seed_start.tolist()
    off = ss[n0] - m * n0
    hl = heads[: m * n + off].tolist()
    total = 0
    for v in range(1, n + 1):
        if v <= n0:
            start, stop = ss[v - 1], ss[v]
        else:
            start = m * (v - 1) + off
            stop = start + m
        for a in range(start, stop):
            ha = hl[a]
            if ha == v:
                continue
            for b in range(a + 1, stop):
                hb = hl[b]
                if hb != ha and hb != v:
                    total += _multiplicity(hl, ss, m, n0, ha, hb)
    return total


def draw_bounded(bitgen, bound, count):
    raw = bitgen.random_raw
    return np.array([bounded_from(raw, bound) for _ in range(count)], dtype=np.uint64)
