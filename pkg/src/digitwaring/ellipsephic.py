"""Integers whose base-b digits are all d1 or d2, their k-th powers, and
dense-bitset machinery for sumsets and representation counts."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .config import check_bits, check_enumeration, check_pairs
from .errors import BudgetExceeded, HypothesisViolated, NotFound
from .radix import check_base

_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class EllipsephicParams:
    b: int
    k: int
    n: int
    d1: int
    d2: int

    def __post_init__(self):
        check_base(self.b)
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        for d in (self.d1, self.d2):
            if not 0 <= d < self.b:
                raise ValueError(f"digit {d} outside [0, {self.b})")
        if self.d1 == self.d2:
            raise ValueError("d1 and d2 must differ")

    @property
    def N(self) -> int:
        return self.b**self.n

    @property
    def u(self) -> int:
        """The all-d1 word d1 (b^n - 1)/(b - 1)."""
        return self.d1 * (self.b**self.n - 1) // (self.b - 1)

    @property
    def step(self) -> int:
        return self.d2 - self.d1

    @property
    def coprime(self) -> bool:
        return math.gcd(self.d1**self.k, self.d2**self.k) == 1

    def require_coprime(self) -> None:
        if not self.coprime:
            raise HypothesisViolated(
                "coprime-digits", f"gcd({self.d1}^{self.k}, {self.d2}^{self.k}) != 1"
            )

    def with_n(self, n: int) -> "EllipsephicParams":
        return EllipsephicParams(self.b, self.k, n, self.d1, self.d2)


def eval_L(bits: Sequence[int], radix: int) -> int:
    total = 0
    for x in reversed(list(bits)):
        if x not in (0, 1):
            raise ValueError("L expects a 0/1 sequence")
        total = total * radix + x
    return total


def _all_L(n: int, radix: int) -> np.ndarray:
    """L_radix(x) for all x in {0,1}^n, indexed by the bitmask of x."""
    big = radix**n >= _INT64_SAFE
    vals = np.zeros(1, dtype=object if big else np.int64)
    for i in range(n):
        vals = np.concatenate([vals, vals + radix**i])
    return vals


def enumerate_fixed_length_S(params: EllipsephicParams) -> np.ndarray:
    """All 2^n numbers with exactly n digits from {d1, d2}, sorted."""
    check_enumeration(params.n)
    vals = params.u + params.step * _all_L(params.n, params.b)
    return np.sort(vals)


def mu_support(params: EllipsephicParams) -> np.ndarray:
    """Sorted k-th powers of the fixed-length words; each has mass 2^-n."""
    s = enumerate_fixed_length_S(params)
    top = max(abs(int(s[0])), abs(int(s[-1])))
    if top**params.k >= _INT64_SAFE:
        return np.sort(np.array([int(x) ** params.k for x in s], dtype=object))
    return np.sort(s.astype(np.int64) ** params.k)


def variable_length_S(params: EllipsephicParams, ceiling: int) -> list[int]:
    """Every x >= 0 with all digits in {d1, d2} (any length) and x <= ceiling.

    0 is always included.
    """
    b = params.b
    out = {0}
    frontier = [d for d in (params.d1, params.d2) if d > 0 and d <= ceiling]
    while frontier:
        out.update(frontier)
        nxt = []
        for x in frontier:
            for d in (params.d1, params.d2):
                y = x * b + d
                if y <= ceiling:
                    nxt.append(y)
        frontier = nxt
    return sorted(out)


# -- dense bitsets ---------------------------------------------------------

@dataclass(frozen=True)
class RangeBitset:
    """Presence bitmap over the integer window [offset, offset + len(bits))."""

    offset: int
    bits: np.ndarray = field(repr=False)

    @classmethod
    def empty(cls, lo: int, hi: int) -> "RangeBitset":
        check_bits(hi - lo)
        return cls(int(lo), np.zeros(max(0, hi - lo), dtype=np.bool_))

    @classmethod
    def from_values(cls, values: Iterable[int], window=None) -> "RangeBitset":
        vals = [int(v) for v in values]
        if window is None:
            if not vals:
                return cls.empty(0, 0)
            window = (min(vals), max(vals) + 1)
        lo, hi = int(window[0]), int(window[1])
        out = cls.empty(lo, hi)
        for v in vals:
            if not lo <= v < hi:
                raise ValueError(f"value {v} outside window [{lo}, {hi})")
            out.bits[v - lo] = True
        return out

    @property
    def window(self) -> tuple[int, int]:
        return self.offset, self.offset + self.bits.size

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.bits))

    def members(self) -> np.ndarray:
        return np.flatnonzero(self.bits).astype(np.int64) + self.offset

    def __contains__(self, x) -> bool:
        i = int(x) - self.offset
        return 0 <= i < self.bits.size and bool(self.bits[i])

    def __len__(self) -> int:
        return self.count

    def restricted(self, lo: int, hi: int) -> "RangeBitset":
        out = RangeBitset.empty(lo, hi)
        a, b = max(lo, self.offset), min(hi, self.window[1])
        if b > a:
            out.bits[a - lo:b - lo] = self.bits[a - self.offset:b - self.offset]
        return out


def sumset(A: RangeBitset, B: RangeBitset, clip=None) -> RangeBitset:
    """{a + b} intersected with ``clip`` = (lo, hi); ``None`` keeps the full window."""
    if clip is None:
        lo = A.offset + B.offset
        hi = A.window[1] + B.window[1] - 1
        hi = max(hi, lo)
    else:
        lo, hi = int(clip[0]), int(clip[1])
    out = RangeBitset.empty(lo, hi)
    if A.count == 0 or B.count == 0 or hi <= lo:
        return out
    if A.count > B.count:
        A, B = B, A
    check_pairs(A.count * B.bits.size, "sumset")
    kernels.sumset_bits(A.members(), B.bits, out.bits, B.offset - lo)
    return out


def iterated_sumset(A: RangeBitset, times: int, clip=None) -> RangeBitset:
    if times < 1:
        raise ValueError("times must be >= 1")
    acc = A if clip is None else A.restricted(*clip)
    for _ in range(times - 1):
        acc = sumset(acc, A, clip)
    return acc


# -- representation counts -------------------------------------------------

@dataclass(frozen=True)
class RepresentationCounts:
    """Ordered t-fold representation counts r_t(x) for x in [offset, offset+len)."""

    t: int
    offset: int
    counts: np.ndarray = field(repr=False)

    def __getitem__(self, x) -> int:
        i = int(x) - self.offset
        if 0 <= i < self.counts.size:
            return int(self.counts[i])
        return 0

    def items(self):
        for i in np.flatnonzero(self.counts):
            yield int(i) + self.offset, int(self.counts[i])

    @property
    def total(self) -> int:
        return int(self.counts.sum(dtype=object))

    @property
    def support_size(self) -> int:
        return int(np.count_nonzero(self.counts))

    def sum_of_squares(self) -> int:
        c = self.counts.astype(object)
        return int((c * c).sum())


def convolve_counts(left: RepresentationCounts, right: RepresentationCounts) -> RepresentationCounts:
    """Exact convolution r_{t1} * r_{t2}."""
    size = left.counts.size + right.counts.size - 1
    check_bits(size, "count array")
    support = np.flatnonzero(right.counts)
    out = np.zeros(size, dtype=np.int64)
    # spread by multiplicity: each support point carries weight right.counts[s]
    for s in support:
        w = int(right.counts[s])
        out[s:s + left.counts.size] += left.counts * w
    return RepresentationCounts(left.t + right.t, left.offset + right.offset, out)


def representation_counts(t: int, params: EllipsephicParams, window=None) -> RepresentationCounts:
    """r_t(x): ordered t-tuples from ``mu_support`` summing to x."""
    if t < 1:
        raise ValueError("t must be >= 1")
    if t * params.n > 62:
        raise BudgetExceeded("2^(t n) would overflow int64 counts")
    support = mu_support(params)
    lo, hi = int(support[0]), int(support[-1])
    width = hi - lo
    check_bits(t * width + 1, "count array")
    rel = np.array([int(s) - lo for s in support], dtype=np.int64)
    counts = np.zeros(width + 1, dtype=np.int64)
    np.add.at(counts, rel, 1)
    for step in range(1, t):
        out = np.zeros((step + 1) * width + 1, dtype=np.int64)
        kernels.sparse_convolve(counts, rel, out)
        counts = out
    rc = RepresentationCounts(t, t * lo, counts)
    if window is not None:
        wlo, whi = int(window[0]), int(window[1])
        check_bits(whi - wlo, "count window")
        sliced = np.zeros(max(0, whi - wlo), dtype=np.int64)
        a, b = max(wlo, rc.offset), min(whi, rc.offset + counts.size)
        if b > a:
            sliced[a - wlo:b - wlo] = counts[a - rc.offset:b - rc.offset]
        rc = RepresentationCounts(t, wlo, sliced)
    return rc


# -- desk-scale basis order ------------------------------------------------

@dataclass(frozen=True)
class BasisCertificate:
    s: int
    window: tuple[int, int]
    witness: object  # "covered" when s == 0, else least x uncovered by s-1 summands
    powers: tuple = field(repr=False, default=())


def power_set(params: EllipsephicParams, ceiling: int) -> list[int]:
    """Sorted {x^k : x in S, x^k <= ceiling}, including 0."""
    root = int(round(ceiling ** (1.0 / params.k))) + 2
    xs = variable_length_S(params, root)
    return sorted({x**params.k for x in xs if x**params.k <= ceiling})


def min_basis_order(params: EllipsephicParams, window, s_max: int) -> BasisCertificate:
    """Least s with [A, B] inside the s-fold sumset of S^k (0 in S^k)."""
    params.require_coprime()
    A, B = int(window[0]), int(window[1])
    if A > B:
        return BasisCertificate(0, (A, B), "covered")
    if A < 0:
        raise HypothesisViolated("window>=0", "sums of k-th powers are nonnegative")
    powers = power_set(params, B)
    P = RangeBitset.from_values(powers, (0, B + 1))
    reach = RangeBitset.from_values([0], (0, B + 1))
    prev_gap = None
    for s in range(0, s_max + 1):
        gaps = np.flatnonzero(~reach.bits[A:B + 1])
        if gaps.size == 0:
            witness = "covered" if s == 0 else prev_gap
            return BasisCertificate(s, (A, B), witness, tuple(powers))
        prev_gap = A + int(gaps[0])
        if s < s_max:
            reach = sumset(reach, P, (0, B + 1))
    raise NotFound(f"window [{A}, {B}] not covered with s <= {s_max}")


def min_summands_table(powers: Sequence[int], ceiling: int) -> np.ndarray:
    """c[x] = least number of positive powers summing to x (coin-change DP).

    Independent of the bitset engine; unreachable entries hold -1.
    """
    inf = np.iinfo(np.int64).max // 2
    c = np.full(ceiling + 1, inf, dtype=np.int64)
    c[0] = 0
    pos = [p for p in powers if 0 < p <= ceiling]
    for x in range(1, ceiling + 1):
        best = inf
        for p in pos:
            if p > x:
                break
            v = c[x - p]
            if v + 1 < best:
                best = v + 1
        c[x] = best
    c[c >= inf] = -1
    return c


def verify_certificate(params: EllipsephicParams, cert: BasisCertificate) -> bool:
    A, B = cert.window
    if A > B:
        return cert.s == 0
    powers = power_set(params, B)
    c = min_summands_table(powers, B)
    seg = c[A:B + 1]
    if np.any(seg < 0):
        return False
    s = int(seg.max())
    if s != cert.s:
        return False
    if s == 0:
        return cert.witness == "covered"
    w = cert.witness
    return isinstance(w, int) and A <= w <= B and c[w] == s and not np.any(c[A:w] == s)


# -- growth lemmas used to assemble the basis ------------------------------

@dataclass(frozen=True)
class Progression:
    d: int
    start: int
    length: int
    required: int


def find_progression_in_iterated_sumset(A: Iterable[int], X: int, r: int) -> Progression:
    """Progression of difference 1 <= d <= r-1 inside the 4r-fold sumset of A.

    Requires A within [1, X] and |A| >= 1 + X/r; the guaranteed length is
    floor(X / 2r^2). Returns the smallest d reaching it, with its longest run.
    """
    A = sorted(set(int(a) for a in A))
    if r < 2:
        raise HypothesisViolated("r>=2", "need r >= 2 for a difference in [1, r-1]")
    if not A or A[0] < 1 or A[-1] > X:
        raise HypothesisViolated("A-in-[1,X]")
    if len(A) * r < r + X:
        raise HypothesisViolated("size", f"|A| = {len(A)} < 1 + X/r")
    folds = 4 * r
    base = RangeBitset.from_values(A, (0, X + 1))
    total = iterated_sumset(base, folds, (0, folds * X + 1))
    need = X // (2 * r * r)
    for d in range(1, r):
        start, length = kernels.longest_step_run(total.bits, d)
        if length >= need and length > 0:
            return Progression(d, int(start) + total.offset, int(length), need)
    raise NotFound(f"no progression of length {need} with d < {r}")


@dataclass(frozen=True)
class CoverResult:
    target: tuple[int, int]
    covering: tuple[int, int] | None
    j_max: int

    @property
    def ok(self) -> bool:
        if self.target[0] > self.target[1]:
            return True
        return self.covering is not None


def interval_sum_cover(interval, X, K) -> CoverResult:
    """Check that the union of j*I, 1 <= j <= ceil(2K/eta^2), contains
    [4X/eta, KX/eta] (discrete), where eta = |I|/X."""
    lo, hi = int(interval[0]), int(interval[1])
    X = Fraction(X)
    K = Fraction(K)
    L = hi - lo + 1
    if X < 1:
        raise HypothesisViolated("X>=1")
    if lo < 0 or hi >= X:
        raise HypothesisViolated("I-in-[0,X)")
    if L < 2:
        raise HypothesisViolated("L>=2")
    if K < 4:
        raise HypothesisViolated("K>=4")
    eta = Fraction(L) / X
    j1 = math.ceil(2 * K / eta**2)
    t_lo = math.ceil(4 * X / eta)
    t_hi = math.floor(K * X / eta)
    # from j0 on, (j+1)I starts no later than one past the end of jI
    j0 = max(1, -(-(lo - 1) // (L - 1))) if lo > 1 else 1
    check_pairs(min(j0, j1), "interval union")
    pieces = [(j * lo, j * hi) for j in range(1, min(j0, j1 + 1))]
    if j0 <= j1:
        pieces.append((j0 * lo, j1 * hi))
    merged = []
    for a, b in sorted(pieces):
        if merged and a <= merged[-1][1] + 1:
            merged[-1] = (merged[-1][0], max(merged[-1][1], b))
        else:
            merged.append((a, b))
    cover = None
    for a, b in merged:
        if a <= t_lo and t_hi <= b:
            cover = (a, b)
            break
    return CoverResult((t_lo, t_hi), cover, j1)
