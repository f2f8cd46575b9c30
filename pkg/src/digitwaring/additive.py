"""Additive energy, digital Hamming balls and Gowers box norms.

Energies are exact integers. Inequalities with square roots are compared
after squaring, so no tolerance is ever involved on the integer side.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Sequence

import numpy as np

from .config import check_bits, check_pairs
from .errors import HypothesisViolated
from .radix import check_base, digit_count_db

EPS_BOX = 2.0**-50


def as_set(A: Iterable[int]) -> list[int]:
    return sorted(set(int(a) for a in A))


def _dense(A: list[int], B: list[int]) -> bool:
    span = A[-1] - A[0] + B[-1] - B[0] + 2
    return span <= 64 * (len(A) * len(B) + 64)


def pair_sum_counts(A: Sequence[int], B: Sequence[int]) -> tuple[int, np.ndarray]:
    """(offset, r) with r[s - offset] = #{(a, b) : a + b = s}.

    Dense convolution of indicator vectors. Use :func:`pair_sum_counter` when
    the span is huge compared with |A||B|.
    """
    A, B = as_set(A), as_set(B)
    if not A or not B:
        return 0, np.zeros(0, dtype=np.int64)
    span_a = A[-1] - A[0] + 1
    span_b = B[-1] - B[0] + 1
    check_bits(span_a + span_b, "pair-sum vector")
    ia = np.zeros(span_a, dtype=np.int64)
    ib = np.zeros(span_b, dtype=np.int64)
    ia[np.array(A) - A[0]] = 1
    ib[np.array(B) - B[0]] = 1
    return A[0] + B[0], np.convolve(ia, ib)


def pair_sum_counter(A: Sequence[int], B: Sequence[int]) -> Counter:
    A, B = as_set(A), as_set(B)
    check_pairs(len(A) * len(B), "pair sums")
    return Counter(a + b for a in A for b in B)


def _dot(x: np.ndarray, y: np.ndarray) -> int:
    return int(np.dot(x.astype(object), y.astype(object))) if x.size else 0


def additive_energy(A: Iterable[int]) -> int:
    """E(A) = sum_s r_A(s)^2."""
    A = as_set(A)
    if not A:
        return 0
    if not _dense(A, A):
        return sum(v * v for v in pair_sum_counter(A, A).values())
    _, r = pair_sum_counts(A, A)
    return _dot(r, r)


def energy4(A1, A2, A3, A4, e: int = 0) -> int:
    """#{(a1..a4) : a1 + a2 = a3 + a4 + e}."""
    A1, A2, A3, A4 = (as_set(A) for A in (A1, A2, A3, A4))
    if not (A1 and A2 and A3 and A4):
        return 0
    if not (_dense(A1, A2) and _dense(A3, A4)):
        c12, c34 = pair_sum_counter(A1, A2), pair_sum_counter(A3, A4)
        return sum(v * c34.get(s - e, 0) for s, v in c12.items())
    o12, r12 = pair_sum_counts(A1, A2)
    o34, r34 = pair_sum_counts(A3, A4)
    # align r34 shifted by e against r12 on the common window
    lo = max(o12, o34 + e)
    hi = min(o12 + r12.size, o34 + e + r34.size)
    if hi <= lo:
        return 0
    return _dot(r12[lo - o12:hi - o12], r34[lo - o34 - e:hi - o34 - e])


def energy4_with_carry(A1, A2, A3, A4, e: int, b: int) -> int:
    b = check_base(b)
    if abs(e) >= b:
        raise HypothesisViolated("|e|<b", f"carry {e} out of range for base {b}")
    return energy4(A1, A2, A3, A4, e)


def hamming_ball(b: int, r: int, m: int, window=None) -> list[int]:
    """Integers with at most r nonzero centred digits, all in positions < m.

    Built by choosing positions and then digit values; ``window`` = (lo, hi)
    keeps lo <= x < hi.
    """
    b = check_base(b)
    if r < 0 or m < 0:
        raise ValueError("r and m must be >= 0")
    nz = [d for d in range(-((b - 1) // 2), b // 2 + 1) if d]
    size = sum(math.comb(m, j) * len(nz) ** j for j in range(min(r, m) + 1))
    check_bits(size, "Hamming ball")
    out = {0}
    for j in range(1, min(r, m) + 1):
        for pos in combinations(range(m), j):
            w = [b**p for p in pos]
            for ds in product(nz, repeat=j):
                out.add(sum(d * x for d, x in zip(ds, w)))
    vals = sorted(out)
    if window is not None:
        lo, hi = window
        vals = [x for x in vals if lo <= x < hi]
    return vals


def in_ball(A: Iterable[int], b: int, r: int) -> bool:
    return all(digit_count_db(a, b) <= r for a in A)


@dataclass(frozen=True)
class BoundReport:
    value: int
    bound_sq: int  # compare value^2 against this
    name: str

    @property
    def ok(self) -> bool:
        return self.value * self.value <= self.bound_sq

    def to_json(self) -> dict:
        return {"name": self.name, "value": self.value, "bound_squared": str(self.bound_sq),
                "ok": self.ok}


def energy_bound_check(A: Iterable[int], b: int, r: int) -> BoundReport:
    """E(A) <= (2b)^(4r) |A|^2 for A inside the digital Hamming ball of radius r."""
    A = as_set(A)
    if not in_ball(A, b, r):
        raise HypothesisViolated("ball-membership", f"some element has more than {r} nonzero digits")
    E = additive_energy(A)
    bound = (2 * b) ** (4 * r) * len(A) ** 2
    return BoundReport(E, bound * bound, "energy<=(2b)^4r|A|^2")


def quadripartite_bound_check(As: Sequence, rs: Sequence[int], e: int, b: int) -> BoundReport:
    """count(a1+a2 = a3+a4+e) <= (2b)^(r1+..+r4) prod |A_i|^(1/2), squared."""
    if len(As) != 4 or len(rs) != 4:
        raise ValueError("need four sets and four radii")
    As = [as_set(A) for A in As]
    for A, r in zip(As, rs):
        if not in_ball(A, b, r):
            raise HypothesisViolated("ball-membership", f"set exceeds radius {r}")
    cnt = energy4_with_carry(*As, e, b)
    bound_sq = (2 * b) ** (2 * sum(rs)) * math.prod(len(A) for A in As)
    return BoundReport(cnt, bound_sq, "quadripartite")


@dataclass(frozen=True)
class GowersEnergyReport:
    joint: int
    energies: tuple

    @property
    def ok(self) -> bool:
        return self.joint**4 <= math.prod(self.energies)


def gowers_cs_energy(S1, S2, S3, S4) -> GowersEnergyReport:
    """E(S1,S2,S3,S4)^4 <= prod E(S_i), all exact."""
    sets = [as_set(S) for S in (S1, S2, S3, S4)]
    return GowersEnergyReport(energy4(*sets), tuple(additive_energy(S) for S in sets))


@dataclass(frozen=True)
class QuadrupleReport:
    size: int
    M: int
    energy: int

    @property
    def cauchy_schwarz_ok(self) -> bool:
        # sums lie in [-2M, 2M], so E >= |S|^4 / (4M + 1)
        return self.energy * (4 * self.M + 1) >= self.size**4

    @property
    def quarter_ok(self) -> bool:
        # the eps^4 M^3 / 4 form with eps = |S| / M
        return 4 * self.energy * self.M >= self.size**4


def quadruple_lower_bound(S: Iterable[int], M: int) -> QuadrupleReport:
    S = as_set(S)
    if S and (S[0] < -M or S[-1] > M):
        raise ValueError("S must lie in [-M, M]")
    return QuadrupleReport(len(S), int(M), additive_energy(S))


# -- box norms ----------------------------------------------------------------

@dataclass(frozen=True)
class BoxFunction:
    """f on X_1 x ... x X_d, stored as a complex array of shape (|X_1|, ..., |X_d|)."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.ndim < 1 or 0 in v.shape:
            raise ValueError("box function needs non-empty axes")
        object.__setattr__(self, "values", v)

    @property
    def dims(self) -> int:
        return self.values.ndim

    def mean(self) -> complex:
        return complex(self.values.mean())


@dataclass(frozen=True)
class BoxNorm:
    value: float  # the norm
    power: float  # the 2^d-th power before the root, clamped at 0
    imag: float  # imaginary residue of the average (should be ~0)
    error: float  # certified radius on `power`


def _gowers_average(values: np.ndarray) -> tuple[float, float, int]:
    d = values.ndim
    shape = values.shape
    check_pairs(int(np.prod(shape)) ** 2 * 2**d, "box norm")
    # axes of the 2d-dimensional grid: (x_1^0, x_1^1, x_2^0, x_2^1, ...)
    acc = np.ones([s for s in shape for _ in (0, 1)], dtype=np.complex128)
    for w in product((0, 1), repeat=d):
        idx = []
        for i, s in enumerate(shape):
            ar = np.arange(s)
            sh = [1] * (2 * d)
            sh[2 * i + w[i]] = s
            idx.append(ar.reshape(sh))
        g = values[tuple(idx)]
        acc = acc * (np.conj(g) if sum(w) % 2 else g)
    flat = acc.ravel()
    re = math.fsum(flat.real.tolist()) / flat.size
    im = math.fsum(flat.imag.tolist()) / flat.size
    return re, im, flat.size


def box_norm(f: BoxFunction) -> BoxNorm:
    v = f.values
    re, im, terms = _gowers_average(v)
    scale = float(np.max(np.abs(v))) ** (2**v.ndim) if v.size else 0.0
    err = EPS_BOX * (2**v.ndim + 1) * scale
    power = max(re, 0.0)
    return BoxNorm(power ** (1.0 / 2**v.ndim), power, im, err)


@dataclass(frozen=True)
class BoxCSReport:
    lhs: float
    norm: float
    guard: float

    @property
    def ok(self) -> bool:
        return self.lhs <= self.norm + self.guard


def _independent_of_axis(psi: np.ndarray, axis: int) -> bool:
    first = np.take(psi, [0], axis=axis)
    return bool(np.all(psi == first))


def box_cs_check(f: BoxFunction, psis: Sequence[np.ndarray]) -> BoxCSReport:
    """|E prod_i Psi_i f| <= ||f||_box, with Psi_i constant along axis i and |Psi_i| <= 1."""
    v = f.values
    if len(psis) != v.ndim:
        raise ValueError("need one factor per axis")
    prod_ = np.ones_like(v)
    for i, p in enumerate(psis):
        p = np.broadcast_to(np.asarray(p, dtype=np.complex128), v.shape)
        if not _independent_of_axis(p, i):
            raise HypothesisViolated("independence", f"factor {i} depends on x_{i}")
        if np.max(np.abs(p)) > 1 + 1e-12:
            raise HypothesisViolated("1-bounded", f"factor {i} exceeds 1 in modulus")
        prod_ = prod_ * p
    lhs = abs(complex((prod_ * v).mean()))
    nb = box_norm(f)
    # the root is concave, so this bounds how far the error radius can move it
    D = 2.0**v.ndim
    guard = (nb.power + nb.error) ** (1.0 / D) - nb.power ** (1.0 / D) + EPS_BOX * v.size
    return BoxCSReport(lhs, nb.value, guard)
