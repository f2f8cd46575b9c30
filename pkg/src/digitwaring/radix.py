"""Centred base-b digits for integers and for angles modulo 1.

Digits live in (-b/2, b/2]. For an angle alpha the fractional digits are the
coefficients of b^-1, b^-2, ... in

    alpha = alpha_1 b^-1 + alpha_2 b^-2 + ...  (mod 1),

so "the first n digits" always means alpha_1..alpha_n. All arithmetic here is
exact (``fractions.Fraction`` or plain integers); digit functions are
discontinuous and must never see a float.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import kernels


def check_base(b: int) -> int:
    b = int(b)
    if b < 3:
        raise ValueError(f"base must be >= 3, got {b}")
    return b


def unit_angle(x) -> Fraction:
    """Exact representative of x modulo 1 in [0, 1)."""
    return Fraction(x) % 1


@dataclass(frozen=True)
class CenteredExpansion:
    base: int
    digits: tuple
    kind: str  # "integer" or "fractional"

    def value(self):
        """Integer value, or the finite fractional sum sum_j d_j b^-(j+1)."""
        b = self.base
        if self.kind == "integer":
            return sum(d * b**i for i, d in enumerate(self.digits))
        return sum(Fraction(d, b ** (j + 1)) for j, d in enumerate(self.digits))

    @property
    def nonzero(self) -> int:
        return sum(1 for d in self.digits if d)


def _centre(r: int, b: int) -> int:
    # residue in [0, b) -> (-b/2, b/2]; b/2 itself is kept for even b
    return r - b if 2 * r > b else r


def centered_digits_int(x: int, b: int) -> CenteredExpansion:
    b = check_base(b)
    x = int(x)
    digits = []
    while x:
        d = _centre(x % b, b)
        digits.append(d)
        x = (x - d) // b
    return CenteredExpansion(b, tuple(digits), "integer")


def _offset(b: int) -> int:
    # largest centred digit magnitude on the negative side: (b-1)//2 for any b
    return (b - 1) // 2


def shifted_numerator(alpha: Fraction, b: int) -> tuple[int, int]:
    """(R, D) with R/D = frac(alpha + o/(b-1)), o = (b-1)//2.

    The ordinary base-b digits of R/D, minus o, are the centred digits of
    alpha. Ordinary digits never end in a tail of b-1, which is exactly the
    preference for a tail of -(b-1)/2 in the odd case.
    """
    alpha = Fraction(alpha)
    p, q = alpha.numerator, alpha.denominator
    D = q * (b - 1)
    R = (p * (b - 1) + _offset(b) * q) % D
    return R, D


def frac_digits(alpha, b: int, n: int) -> CenteredExpansion:
    b = check_base(b)
    if n < 1:
        raise ValueError("n must be >= 1")
    R, D = shifted_numerator(Fraction(alpha), b)
    o = _offset(b)
    digits = []
    for _ in range(n):
        R *= b
        s, R = divmod(R, D)
        digits.append(s - o)
    return CenteredExpansion(b, tuple(digits), "fractional")


def digit_count_db(x: int, b: int) -> int:
    return centered_digits_int(x, b).nonzero


def w_n(alpha, b: int, n: int) -> int:
    return frac_digits(alpha, b, n).nonzero


def dist_to_int(x) -> Fraction:
    r = Fraction(x) % 1
    return min(r, 1 - r)


def w_tilde_n(alpha, b: int, n: int) -> Fraction:
    b = check_base(b)
    if n < 1:
        raise ValueError("n must be >= 1")
    alpha = Fraction(alpha) % 1
    total = Fraction(0)
    for i in range(n):
        total += dist_to_int(alpha * b**i) ** 2
    return total


def psi(alpha, b: int, n: int) -> int:
    """Integer whose centred digits are alpha_1..alpha_n, most significant first.

    d_b(psi(alpha)) == w_n(alpha) and ||alpha - b^-n psi(alpha)|| <= (3/4) b^-n.
    """
    acc = 0
    for d in frac_digits(alpha, b, n).digits:
        acc = acc * b + d
    return acc


def psi_weight_batch(theta, ms: Sequence[int], b: int, n: int):
    """psi(theta*m) and w_n(theta*m) for every m, as two int arrays.

    Uses the compiled kernel when every intermediate fits in int64 and falls
    back to exact Python integers otherwise.
    """
    b = check_base(b)
    theta = Fraction(theta)
    p, q = theta.numerator, theta.denominator
    D = q * (b - 1)
    o = _offset(b)
    ms = [int(m) for m in ms]
    fits = D * b < (1 << 62) and b ** (n + 1) < (1 << 62)
    if fits:
        numer = np.array([(p * m * (b - 1) + o * q) % D for m in ms], dtype=np.int64)
        return kernels.psi_batch(numer, D, b, n, o)
    psis = np.empty(len(ms), dtype=object)
    ws = np.empty(len(ms), dtype=np.int64)
    for k, m in enumerate(ms):
        e = frac_digits(theta * m, b, n)
        acc = 0
        for d in e.digits:
            acc = acc * b + d
        psis[k] = acc
        ws[k] = e.nonzero
    return psis, ws


def hamming_weight_ball_bound(b: int) -> Fraction:
    """Per-run constant K_b = b^4 / (4 (b-1)^2 (b^2-1)).

    Positions whose next nonzero digit lies at distance i contribute at most
    (b^2/(2(b-1)))^2 b^-2i to w_tilde, so every maximal run ending at a
    nonzero digit contributes at most K_b in total.
    """
    return Fraction(b**4, 4 * (b - 1) ** 2 * (b * b - 1))


def digits_value(digits: Iterable[int], b: int) -> int:
    return sum(d * b**i for i, d in enumerate(digits))
