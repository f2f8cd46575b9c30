"""numba-compiled kernels; signatures mirror ``_numpy``."""
import math

import numpy as np
import numba
from numba import njit, prange

from ._numpy import TABLE_MAX, unit_tables

# avoid probing an outdated system TBB
numba.config.THREADING_LAYER = "workqueue"


@njit(parallel=True, cache=True)
def _grid_table(residues, G, a_start, count, cos_t, sin_t):
    out = np.empty(count, dtype=np.float64)
    m = residues.size
    for k in prange(count):
        a = a_start + k
        re = 0.0
        im = 0.0
        for j in range(m):
            ph = (a * residues[j]) % G
            re += cos_t[ph]
            im += sin_t[ph]
        out[k] = math.hypot(re / m, im / m)
    return out


@njit(parallel=True, cache=True)
def _grid_trig(residues, G, a_start, count):
    out = np.empty(count, dtype=np.float64)
    m = residues.size
    scale = 2.0 * math.pi / G
    for k in prange(count):
        a = a_start + k
        re = 0.0
        im = 0.0
        for j in range(m):
            ang = ((a * residues[j]) % G) * scale
            re += math.cos(ang)
            im += math.sin(ang)
        out[k] = math.hypot(re / m, im / m)
    return out


def grid_magnitudes(residues, G, a_start, count):
    residues = np.ascontiguousarray(residues, dtype=np.int64)
    if G <= TABLE_MAX:
        cos_t, sin_t = unit_tables(G)
        return _grid_table(residues, G, a_start, count, cos_t, sin_t)
    return _grid_trig(residues, G, a_start, count)


@njit(cache=True)
def _or_shifted(a_idx, b_bytes, out_bytes, shift):
    nb = b_bytes.size
    no = out_bytes.size
    for t in range(a_idx.size):
        lo = a_idx[t] + shift
        j0 = max(0, -lo)
        j1 = min(nb, no - lo)
        for j in range(j0, j1):
            out_bytes[lo + j] |= b_bytes[j]


def sumset_bits(a_idx, b_bits, out, shift):
    # uint8 views let LLVM vectorise the OR loop
    _or_shifted(np.ascontiguousarray(a_idx, dtype=np.int64),
                np.ascontiguousarray(b_bits).view(np.uint8), out.view(np.uint8), shift)
    return out


@njit(cache=True)
def sparse_convolve(counts, support, out):
    n = counts.size
    for x in range(n):
        c = counts[x]
        if c != 0:
            for t in range(support.size):
                out[x + support[t]] += c
    return out


@njit(cache=True)
def longest_step_run(bits, d):
    n = bits.size
    run = np.zeros(n, dtype=np.int64)
    best_len = 0
    best_start = -1
    for i in range(n):
        if bits[i]:
            run[i] = run[i - d] + 1 if i >= d else 1
            L = run[i]
            s = i - (L - 1) * d
            if L > best_len or (L == best_len and s < best_start):
                best_len = L
                best_start = s
    return best_start, best_len


@njit(parallel=True, cache=True)
def pair_sumset_sizes(a_pad, a_len, b_pad, b_len, window):
    na = a_len.size
    nb = b_len.size
    out = np.empty((na, nb), dtype=np.int64)
    for i in prange(na):
        seen = np.zeros(window, dtype=np.int64)
        for j in range(nb):
            stamp = j + 1
            c = 0
            for p in range(a_len[i]):
                for q in range(b_len[j]):
                    s = a_pad[i, p] + b_pad[j, q]
                    if seen[s] != stamp:
                        seen[s] = stamp
                        c += 1
            out[i, j] = c
    return out


@njit(cache=True)
def _f_at(idx, G, gamma):
    r = idx.size
    total = 0.0
    for j in range(r + 1):
        t = 1.0
        for i in range(r):
            x = idx[i] / G
            t *= x if i < j else (1.0 - x)
        if t > 0.0:
            total += t ** gamma
    return total


@njit(cache=True)
def realvar_grid_min(r, G, gamma):
    idx = np.full(r, G, dtype=np.int64)
    best = np.inf
    arg = idx.copy()
    while True:
        v = _f_at(idx, G, gamma)
        if v < best:
            best = v
            arg[:] = idx
        # next nonincreasing tuple in reverse-lexicographic order
        p = r - 1
        while p >= 0 and idx[p] == 0:
            p -= 1
        if p < 0:
            break
        idx[p] -= 1
        for q in range(p + 1, r):
            idx[q] = idx[p]
    return best, arg


@njit(parallel=True, cache=True)
def psi_batch(numer, D, b, n, o):
    m = numer.size
    psi = np.zeros(m, dtype=np.int64)
    w = np.zeros(m, dtype=np.int64)
    for k in prange(m):
        R = numer[k]
        acc = 0
        cnt = 0
        for _ in range(n):
            R = R * b
            s = R // D
            R = R - s * D
            dig = s - o
            acc = acc * b + dig
            if dig != 0:
                cnt += 1
        psi[k] = acc
        w[k] = cnt
    return psi, w
