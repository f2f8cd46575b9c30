"""Pure-numpy kernels. Reference path and fallback when numba is disabled."""
from functools import lru_cache

import numpy as np

_CHUNK = 1 << 22


# phases are exact residues mod G, so cos/sin come from a table when it fits
TABLE_MAX = 1 << 22


@lru_cache(maxsize=4)
def unit_tables(G):
    ang = np.arange(G, dtype=np.float64) * (2.0 * np.pi / G)
    c, s = np.cos(ang), np.sin(ang)
    c.flags.writeable = False
    s.flags.writeable = False
    return c, s


def grid_magnitudes(residues, G, a_start, count):
    """|mean_m e(a*r_m/G)| for a in [a_start, a_start+count)."""
    residues = np.asarray(residues, dtype=np.int64)
    out = np.empty(count, dtype=np.float64)
    step = max(1, _CHUNK // max(1, residues.size))
    table = unit_tables(G) if G <= TABLE_MAX else None
    two_pi_over_g = 2.0 * np.pi / G
    for lo in range(0, count, step):
        hi = min(count, lo + step)
        a = np.arange(a_start + lo, a_start + hi, dtype=np.int64)
        ph = (a[:, None] * residues[None, :]) % G
        if table is not None:
            re = table[0][ph].mean(axis=1)
            im = table[1][ph].mean(axis=1)
        else:
            ang = ph.astype(np.float64) * two_pi_over_g
            re = np.cos(ang).mean(axis=1)
            im = np.sin(ang).mean(axis=1)
        out[lo:hi] = np.hypot(re, im)
    return out


def sumset_bits(a_idx, b_bits, out, shift):
    """out[a + j + shift] |= b_bits[j] for every a in a_idx, clipped to out."""
    nb = b_bits.size
    no = out.size
    for a in np.asarray(a_idx, dtype=np.int64):
        lo = a + shift
        j0 = max(0, -lo)
        j1 = min(nb, no - lo)
        if j1 > j0:
            out[lo + j0:lo + j1] |= b_bits[j0:j1]
    return out


def sparse_convolve(counts, support, out):
    """out[x + s] += counts[x] for each s in support; out must be long enough."""
    n = counts.size
    for s in np.asarray(support, dtype=np.int64):
        out[s:s + n] += counts
    return out


def longest_step_run(bits, d):
    """Longest run bits[i], bits[i+d], ... all True. Returns (start, length)."""
    best_len, best_start = 0, -1
    for c in range(min(d, bits.size)):
        col = bits[c::d].astype(np.int8)
        if not col.any():
            continue
        padded = np.concatenate(([0], col, [0]))
        edges = np.flatnonzero(np.diff(padded))
        starts, ends = edges[0::2], edges[1::2]
        lengths = ends - starts
        k = int(np.argmax(lengths))
        L = int(lengths[k])
        s = c + int(starts[k]) * d
        if L > best_len or (L == best_len and s < best_start):
            best_len, best_start = L, s
    return best_start, best_len


def pair_sumset_sizes(a_pad, a_len, b_pad, b_len, window):
    """|A_i + B_j| for all pairs; rows padded with -1. Needs window <= 63."""
    if window > 63:
        raise ValueError("bitmask path needs window <= 63")
    na, nb = a_len.size, b_len.size
    out = np.empty((na, nb), dtype=np.int64)
    one = np.uint64(1)
    for i in range(na):
        ai = a_pad[i, :a_len[i]]
        sums = ai[:, None, None] + b_pad[None, :, :]
        valid = (b_pad >= 0)[None, :, :]
        bits = np.where(valid, one << np.where(valid, sums, 0).astype(np.uint64), np.uint64(0))
        masks = np.bitwise_or.reduce(np.bitwise_or.reduce(bits, axis=2), axis=0)
        out[i] = _popcount64(masks)
    return out


def _popcount64(x):
    x = x.astype(np.uint64)
    c = np.zeros(x.shape, dtype=np.int64)
    while np.any(x):
        c += (x & np.uint64(1)).astype(np.int64)
        x = x >> np.uint64(1)
    return c


def _ordered_grid(r, G, first):
    """All nonincreasing index tuples of length r with leading index `first`."""
    rows = np.array([[first]], dtype=np.int64)
    for _ in range(r - 1):
        last = rows[:, -1]
        reps = last + 1
        base = np.repeat(rows, reps, axis=0)
        nxt = np.concatenate([np.arange(v + 1) for v in last]).astype(np.int64)
        rows = np.column_stack([base, nxt])
    return rows


def realvar_values(x, gamma):
    """f(x) = sum_j (x_1..x_j (1-x_{j+1})..(1-x_r))^gamma, rows of x."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    r = x.shape[1]
    pre = np.ones((x.shape[0], r + 1))
    post = np.ones((x.shape[0], r + 1))
    for i in range(r):
        pre[:, i + 1] = pre[:, i] * x[:, i]
    for i in range(r - 1, -1, -1):
        post[:, i] = post[:, i + 1] * (1.0 - x[:, i])
    terms = pre * post
    return np.sum(terms ** gamma, axis=1)


def realvar_grid_min(r, G, gamma):
    """Minimum of f over the ordered grid {G >= i_1 >= ... >= i_r >= 0}/G."""
    best = np.inf
    arg = np.zeros(r, dtype=np.int64)
    for first in range(G + 1):
        idx = _ordered_grid(r, G, first)
        vals = realvar_values(idx / G, gamma)
        k = int(np.argmin(vals))
        if vals[k] < best:
            best = float(vals[k])
            arg = idx[k].copy()
    return best, arg


def psi_batch(numer, D, b, n, o):
    """Centred digits of beta = numer/D - o/(b-1): returns (psi, nonzero count).

    `numer` holds numerators of frac(alpha + o/(b-1)) over denominator D.
    """
    R = np.asarray(numer, dtype=np.int64).copy()
    psi = np.zeros(R.size, dtype=np.int64)
    w = np.zeros(R.size, dtype=np.int64)
    for _ in range(n):
        R = R * b
        s = R // D
        R = R - s * D
        dig = s - o
        psi = psi * b + dig
        w += dig != 0
    return psi, w
