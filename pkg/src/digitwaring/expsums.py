"""Weyl-type sums over fixed-length ellipsephic k-th powers.

    mu_hat(theta) = E_{x in {0,1}^n} e(theta (u + (d2-d1) L_b(x))^k)

Phases are always reduced to an exact residue p*m mod q before any
trigonometry, so huge k-th powers never reach a float. The float64 path
carries a documented error radius ``eps_num(terms)``; ``prec=`` switches to
mpmath at the requested working precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from . import kernels
from .config import check_bits, check_enumeration, check_pairs
from .ellipsephic import EllipsephicParams, _all_L, eval_L, mu_support, representation_counts
from .errors import HypothesisViolated
from .radix import dist_to_int, unit_angle, w_tilde_n

# per-term rounding radius of the float64 phase path (angle, cos/sin, summation)
EPS_UNIT = 2.0**-50


def eps_num(terms: int) -> float:
    return EPS_UNIT * max(1, int(terms))


@dataclass(frozen=True)
class PaperConstants:
    """Exact constants attached to (b, k, d1, d2).

    ``C`` is b^(7k^2/2), an integer only when k is even; ``C_log_b`` always
    holds the exponent. ``eps_41`` multiplies N^-k.
    """

    b: int
    k: int
    d1: int
    d2: int

    @property
    def B(self) -> int:
        return self.b ** (6 * self.k**2)

    @property
    def C_log_b(self) -> Fraction:
        return Fraction(7 * self.k**2, 2)

    @property
    def C(self):
        e = self.C_log_b
        return self.b**e.numerator if e.denominator == 1 else None

    @property
    def t_moment(self) -> int:
        return 8 * self.b ** (9 * self.k**2)

    @property
    def c_large(self) -> Fraction:
        return Fraction(1, 4 * self.b ** (3 * self.k**2))

    @property
    def Q_41(self) -> int:
        return 2 * math.factorial(self.k) * self.b ** (self.k * (self.k - 1) // 2 + 1)

    @property
    def eps_41(self) -> Fraction:
        return Fraction(self.b ** (self.k * (self.k + 1) // 2 - 1), 2 * math.factorial(self.k))

    @property
    def q0(self) -> int:
        k = self.k
        return math.factorial(k) * (self.d2 - self.d1) ** k * self.b ** (k * (k - 1) // 2)

    @property
    def large_threshold(self) -> Fraction:
        """1 - c: the very-large-value level."""
        return 1 - self.c_large

    @classmethod
    def of(cls, params: EllipsephicParams) -> "PaperConstants":
        return cls(params.b, params.k, params.d1, params.d2)

    def as_dict(self) -> dict:
        return {
            "B": str(self.B), "C_log_b": str(self.C_log_b),
            "C": None if self.C is None else str(self.C),
            "t_moment": str(self.t_moment), "c_large": str(self.c_large),
            "Q_41": str(self.Q_41), "eps_41": str(self.eps_41), "q0": str(self.q0),
        }


# -- evaluation ---------------------------------------------------------------

def _phase_residues(theta: Fraction, values) -> tuple[list[int], int]:
    p, q = theta.numerator, theta.denominator
    return [(p * int(m)) % q for m in values], q


def phase_sum(theta, values, prec: int | None = None) -> complex:
    """E_m e(theta m) over the given integers with exact phase reduction."""
    theta = unit_angle(theta)
    res, q = _phase_residues(theta, values)
    n = len(res)
    if n == 0:
        raise ValueError("empty average")
    if prec is not None:
        import mpmath

        with mpmath.workprec(prec):
            acc = mpmath.mpc(0)
            for r in res:
                acc += mpmath.expjpi(mpmath.mpf(2 * r) / q)
            acc /= n
            return complex(acc)
    ang = np.array([r / q for r in res]) * (2.0 * np.pi)
    re = math.fsum(np.cos(ang)) / n
    im = math.fsum(np.sin(ang)) / n
    return complex(re, im)


def mu_hat(params: EllipsephicParams, theta, prec: int | None = None) -> complex:
    check_enumeration(params.n)
    return phase_sum(theta, mu_support(params), prec)


def linear_product_magnitude(alpha, m: int, d: int) -> tuple[float, float]:
    """(|E_y e(alpha L_d(y))|, exp(-sum_i ||alpha d^i||^2)) for y in {0,1}^m.

    Uses |1 + e(t)|/2 = |cos(pi ||t||)| factor by factor.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    alpha = unit_angle(alpha)
    value = 1.0
    sq = Fraction(0)
    for i in range(m):
        t = dist_to_int(alpha * d**i)
        value *= abs(math.cos(math.pi * float(t)))
        sq += t * t
    return value, math.exp(-float(sq))


def linear_sum_direct(alpha, m: int, d: int) -> float:
    """|E_y e(alpha L_d(y))| by summing all 2^m words."""
    check_enumeration(m)
    return abs(phase_sum(alpha, _all_L(m, d)))


def linear_sum_group_ring(alpha, m: int, d: int) -> tuple[np.ndarray, np.ndarray]:
    """Both sides of sum_y x^(p L_d(y)) = prod_i (1 + x^(p d^i)) in Z[x]/(x^q - 1).

    For alpha = p/q the linear exponential sum is this polynomial evaluated
    at x = e(1/q), so equal coefficient vectors mean the product formula and
    direct summation agree exactly, not just numerically.
    """
    alpha = unit_angle(alpha)
    p, q = alpha.numerator, alpha.denominator
    check_bits(q, "group-ring vector")
    check_enumeration(m)
    direct = np.zeros(q, dtype=np.int64)
    for v in _all_L(m, d):
        direct[(p * int(v)) % q] += 1
    prod_ = np.zeros(q, dtype=np.int64)
    prod_[0] = 1
    for i in range(m):
        s = (p * d**i) % q
        prod_ = prod_ + np.roll(prod_, s)
    return direct, prod_


# -- scans --------------------------------------------------------------------

@dataclass(frozen=True)
class LargeValueRecord:
    theta: Fraction
    magnitude: float
    a: int | None
    q: int | None
    dist: Fraction | None  # ||theta q||

    def row(self) -> dict:
        return {
            "theta_num": self.theta.numerator, "theta_den": self.theta.denominator,
            "magnitude": repr(self.magnitude), "a": self.a, "q": self.q,
            "dist_num": None if self.dist is None else self.dist.numerator,
            "dist_den": None if self.dist is None else self.dist.denominator,
        }


def _grid_residues(params: EllipsephicParams, G: int) -> np.ndarray:
    return np.array([int(m) % G for m in mu_support(params)], dtype=np.int64)


def grid_scan(params: EllipsephicParams, G: int, chunk: int = 1 << 18):
    """Yield (a_start, magnitudes) over the grid a/G, a in [0, G)."""
    check_enumeration(params.n)
    res = _grid_residues(params, G)
    check_pairs(G * res.size // 64 + 1, "grid scan")
    for lo in range(0, G, chunk):
        cnt = min(chunk, G - lo)
        yield lo, kernels.grid_magnitudes(res, G, lo, cnt)


def _exceeds(params, theta, mag, delta, guard, prec=96) -> bool:
    """mag >= delta, settled at high precision inside the guard band."""
    if mag >= delta + guard:
        return True
    if mag < delta - guard:
        return False
    return abs(mu_hat(params, theta, prec=prec)) >= delta


def scan_large_values(params: EllipsephicParams, G: int, delta, Q: int | None = None):
    """All grid angles a/G with |mu_hat| >= delta, annotated by a Dirichlet
    approximation with denominator at most Q (default Q_41)."""
    from .diophantine import dirichlet_approx

    if Q is None:
        Q = PaperConstants.of(params).Q_41
    delta_f = float(delta)
    guard = eps_num(2**params.n)
    out = []
    for lo, mags in grid_scan(params, G):
        for i in np.flatnonzero(mags >= delta_f - guard):
            a = lo + int(i)
            theta = Fraction(a, G)
            if not _exceeds(params, theta, float(mags[i]), delta_f, guard):
                continue
            ra = dirichlet_approx(theta, Q)
            out.append(LargeValueRecord(theta, float(mags[i]), ra.a, ra.q,
                                        dist_to_int(theta * ra.q)))
    return out


def has_major_arc_approx(theta: Fraction, Q: int, bound: Fraction):
    """Least q <= Q with ||theta q|| <= bound, or None (brute force over q)."""
    for q in range(1, Q + 1):
        if dist_to_int(theta * q) <= bound:
            return q
    return None


@dataclass
class LargeValueStructureReport:
    grid: int
    threshold: Fraction
    Q: int
    eps: Fraction
    large_points: int
    violations: list
    max_off_arc: float  # largest magnitude among points with no approximation

    @property
    def ok(self) -> bool:
        return not self.violations


def large_value_structure_check(params: EllipsephicParams, G: int) -> LargeValueStructureReport:
    """Every grid angle at or above 1 - c_large has q <= Q_41 with
    ||theta q|| <= eps_41 N^-k. Points below the level are not examined
    beyond tracking the largest off-arc magnitude near the level."""
    if params.n < params.k:
        raise HypothesisViolated("n>=k", "very-large-value statement needs n >= k")
    pc = PaperConstants.of(params)
    thr = pc.large_threshold
    bound = pc.eps_41 / params.N**params.k
    guard = eps_num(2**params.n)
    thr_f = float(thr)
    # screen well below the level so the off-arc maximum is informative
    screen = thr_f - 1e-3
    large = 0
    violations = []
    max_off = 0.0
    for lo, mags in grid_scan(params, G):
        for i in np.flatnonzero(mags >= screen):
            a = lo + int(i)
            theta = Fraction(a, G)
            q = has_major_arc_approx(theta, pc.Q_41, bound)
            mag = float(mags[i])
            high = _exceeds(params, theta, mag, thr_f, guard)
            large += high
            if q is None:
                max_off = max(max_off, mag)
                if high:
                    violations.append((theta, mag))
    return LargeValueStructureReport(G, thr, pc.Q_41, pc.eps_41, large, violations, max_off)


# -- moments ------------------------------------------------------------------

def moment_2t_exact(params: EllipsephicParams, t: int) -> Fraction:
    """sum_x mu^(t)(x)^2 = (sum_x r_t(x)^2) / 2^(2tn)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0:
        return Fraction(1)
    rc = representation_counts(t, params)
    return Fraction(rc.sum_of_squares(), 2 ** (2 * t * params.n))


@dataclass(frozen=True)
class Quadrature:
    value: float
    error: float
    panels: int


def moment_2t_quadrature(params: EllipsephicParams, t: int, panels: int = 1 << 14) -> Quadrature:
    """Periodic trapezoid rule for the integral of |mu_hat|^(2t) over [0,1).

    The error estimate is the change from panels/2 to panels. The rule is
    exact once panels exceeds t*(max - min) of the support.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if panels < 2:
        raise ValueError("need at least 2 panels")
    if t == 0:
        return Quadrature(1.0, 0.0, panels)
    res = np.array([int(m) % panels for m in mu_support(params)], dtype=np.int64)
    check_pairs(panels * res.size // 64 + 1, "quadrature")
    mags = kernels.grid_magnitudes(res, panels, 0, panels)
    f = mags ** (2 * t)
    full = math.fsum(f) / panels
    half = math.fsum(f[::2]) / (panels // 2) if panels % 2 == 0 else full
    err = abs(full - half) + eps_num(res.size) * 2 * t
    return Quadrature(full, err, panels)


# -- decoupling ---------------------------------------------------------------

def multisection_split(x: Sequence[int], k: int, b: int) -> list[list[int]]:
    """x^(j) = (x_{ik+j})_i; asserts L_b(x) = sum_j b^j L_{b^k}(x^(j))."""
    x = list(x)
    if k < 1 or len(x) % k:
        raise ValueError(f"k={k} must divide n={len(x)}")
    parts = [x[j::k] for j in range(k)]
    lhs = eval_L(x, b)
    rhs = sum(b**j * eval_L(p, b**k) for j, p in enumerate(parts))
    if lhs != rhs:
        raise AssertionError(f"multisection identity failed: {lhs} != {rhs}")
    return parts


def cos_exp_inequalities(J: int = 1000) -> tuple[float, float]:
    """Margins of |1+e(t)| <= 2 exp(-||t||^2) and 2 - |1+e(t)| >= 4||t||^2
    over t = j/J. Both margins must be >= 0 (up to rounding)."""
    j = np.arange(J + 1)
    t = j / J
    nt = np.minimum(t % 1, 1 - t % 1)
    mod = np.abs(2 * np.cos(np.pi * t))
    m1 = np.min(2 * np.exp(-(nt**2)) - mod)
    m2 = np.min((2 - mod) - 4 * nt**2)
    return float(m1), float(m2)


@dataclass
class DecouplingReport:
    theta: Fraction
    k: int
    mu_abs: float
    box_side: float  # E e(theta q0 sum_w (-1)^|w| prod L), real and >= 0
    shifts: tuple  # t_0..t_{k-1}
    shifted_abs: float  # |E e(theta q0 prod (L + t_i))| at the chosen shifts
    good_tuples: int  # tuples x^(1..k-1) with inner magnitude >= delta^(2^k)/2
    good_needed: float
    product_bound_ok: bool
    w_tilde_ok: bool
    guard: float

    @property
    def ok(self) -> bool:
        g = self.guard
        lower = self.mu_abs ** (2**self.k)
        return (
            lower <= self.box_side + g
            and lower <= self.shifted_abs + g
            and self.good_tuples >= self.good_needed - g
            and self.product_bound_ok
            and self.w_tilde_ok
        )


def decoupling_bound_check(params: EllipsephicParams, theta, shifts=None) -> DecouplingReport:
    """Walk the decoupling argument for one theta at desk scale.

    1. |mu_hat|^(2^k) <= the box average of e(theta q0 prod_i L(x^(i)))
       (direct summation over 2^(2n) word pairs, omega-expanded).
    2. Pigeonhole: shifts t_i = -L(x_1^(i)) maximising
       |E e(theta q0 prod (L(x^(i)) + t_i))|, unless shifts are given.
    3. For every x^(1..k-1): |E_y e(alpha L_{b^k}(y))| <= exp(-b^-2k w_tilde_n(alpha))
       with alpha = theta q0 prod_{i>=1} (L(x^(i)) + t_i), plus the count of
       tuples whose inner magnitude is >= delta^(2^k)/2, and on those the
       bound w_tilde_n(alpha) <= 2^k b^2k log(2/delta).
    """
    b, k, n = params.b, params.k, params.n
    if n % k:
        raise HypothesisViolated("k|n", f"k={k} does not divide n={n}")
    check_enumeration(2 * n)
    theta = unit_angle(theta)
    q0 = PaperConstants.of(params).q0
    m = n // k
    Lk = [int(v) for v in _all_L(m, b**k)]
    W = len(Lk)
    guard = eps_num(W ** (2 * k)) * 4
    mu_abs = abs(mu_hat(params, theta))

    check_pairs(W ** (2 * k) * 2**k, "box average")
    phases = []
    for x0 in product(range(W), repeat=k):
        for x1 in product(range(W), repeat=k):
            s = 0
            for w in product((0, 1), repeat=k):
                term = 1
                for i in range(k):
                    term *= Lk[(x1 if w[i] else x0)[i]]
                s += -term if sum(w) % 2 else term
            phases.append(q0 * s)
    box_side = phase_sum(theta, phases).real

    def shifted_avg(ts):
        vals = []
        for xs in product(range(W), repeat=k):
            pr = q0
            for i in range(k):
                pr *= Lk[xs[i]] + ts[i]
            vals.append(pr)
        return abs(phase_sum(theta, vals))

    if shifts is None:
        best = None
        for x1 in product(range(W), repeat=k):
            ts = tuple(-Lk[j] for j in x1)
            v = shifted_avg(ts)
            if best is None or v > best[0] + 1e-15:
                best = (v, ts)
        shifted_abs, shifts = best
    else:
        shifts = tuple(int(t) for t in shifts)
        if len(shifts) != k:
            raise ValueError(f"need {k} shifts t_0..t_{k - 1}")
        shifted_abs = shifted_avg(shifts)

    half = mu_abs ** (2**k) / 2
    good = 0
    prod_ok = True
    wt_ok = True
    w_limit = (2**k) * b ** (2 * k) * math.log(2 / mu_abs) if mu_abs > 0 else math.inf
    for xs in product(range(W), repeat=k - 1):
        mult = q0
        for i, j in enumerate(xs):
            mult *= Lk[j] + shifts[i + 1]
        alpha = theta * mult
        val, ebound = linear_product_magnitude(alpha, m, b**k)
        wt = w_tilde_n(alpha, b, n)
        if val > ebound + 1e-12 or ebound > math.exp(-float(wt) / b ** (2 * k)) + 1e-12:
            prod_ok = False
        if val >= half - guard:
            good += 1
            if float(wt) > w_limit + 1e-9:
                wt_ok = False
    needed = 0.5 * mu_abs ** (2**k) * 2 ** ((k - 1) * m)
    return DecouplingReport(theta, k, mu_abs, box_side, tuple(shifts), shifted_abs,
                            good, needed, prod_ok, wt_ok, guard)
