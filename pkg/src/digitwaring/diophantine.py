"""Rational approximation and the digit-to-diophantine pipeline.

The pipeline takes an angle theta for which many m in [-M, M] have few
nonzero centred digits in theta*m, and extracts a small q with ||theta q||
small. It runs the fibre / dyadic-class / difference-set argument literally,
with every constant overridable so planted desk-scale instances can be
pushed through it.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import HypothesisViolated
from .radix import check_base, dist_to_int, psi_weight_batch, unit_angle


def as_exact(x) -> Fraction:
    """Fractions and ints pass through; floats go via their shortest repr,
    so 0.15 means 3/20 rather than the nearest binary double."""
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class RationalApprox:
    a: int
    q: int
    err: Fraction  # |theta - a/q|


def convergents(x: Fraction):
    """Continued-fraction convergents p/q of x, in order."""
    x = Fraction(x)
    p0, q0, p1, q1 = 0, 1, 1, 0
    num, den = x.numerator, x.denominator
    while den:
        a, r = divmod(num, den)
        p0, p1 = p1, a * p1 + p0
        q0, q1 = q1, a * q1 + q0
        yield p1, q1
        num, den = den, r


def dirichlet_approx(theta, Q: int) -> RationalApprox:
    """(a, q) with 1 <= q <= Q, gcd(a, q) = 1 and |theta - a/q| <= 1/(qQ).

    theta is reduced mod 1 first. The last convergent with denominator <= Q
    works because the next one has denominator > Q; when theta's own
    denominator is <= Q this is theta itself.
    """
    Q = int(Q)
    if Q < 1:
        raise ValueError("Q must be >= 1")
    theta = unit_angle(theta)
    best = None
    for p, q in convergents(theta):
        if q > Q:
            break
        best = (p, q)
    a, q = best
    return RationalApprox(a, q, abs(theta - Fraction(a, q)))


# -- Vinogradov-type refinement ------------------------------------------------

@dataclass(frozen=True)
class VinogradovCertificate:
    q: int
    a: int
    dist: Fraction  # ||alpha q||
    q_bound: Fraction  # 16 / delta2
    dist_bound: Fraction  # delta1 / (delta2 L)
    divides_all: bool  # q | n for every n in S

    @property
    def ok(self) -> bool:
        return self.q <= self.q_bound and self.dist <= self.dist_bound and self.divides_all


def vinogradov_refine(alpha, L: int, delta1, delta2, S: Iterable[int]) -> VinogradovCertificate:
    """Small q with ||alpha q|| <= delta1 / (delta2 L), from a dense set of
    n in [1, L] with ||alpha n|| <= delta1.

    Dirichlet at Q = 4L, then the two bootstrapping steps. Hypotheses are
    checked first; a failure raises HypothesisViolated naming the clause.
    """
    alpha = unit_angle(alpha)
    L = int(L)
    d1, d2 = as_exact(delta1), as_exact(delta2)
    S = sorted(set(int(n) for n in S))
    if L < 1:
        raise HypothesisViolated("L>=1", f"L={L}")
    if d1 <= 0 or d2 <= 0:
        raise HypothesisViolated("delta>0", "delta1 and delta2 must be positive")
    if d2 < 32 * d1:
        raise HypothesisViolated("delta2>=32*delta1", f"delta2={d2}, delta1={d1}")
    if L < 16 / d2:
        raise HypothesisViolated("L>=16/delta2", f"L={L} < {16 / d2}")
    if S and (S[0] < 1 or S[-1] > L):
        raise HypothesisViolated("S in [1,L]", f"S spans [{S[0]}, {S[-1]}]")
    if len(S) < d2 * L:
        raise HypothesisViolated("|S|>=delta2*L", f"|S|={len(S)} < {d2 * L}")
    for n in S:
        if dist_to_int(alpha * n) > d1:
            raise HypothesisViolated("||alpha n||<=delta1", f"fails at n={n}")

    ra = dirichlet_approx(alpha, 4 * L)
    q = ra.q
    cert = VinogradovCertificate(
        q=q, a=ra.a, dist=dist_to_int(alpha * q), q_bound=16 / d2,
        dist_bound=d1 / (d2 * L), divides_all=all(n % q == 0 for n in S),
    )
    if not cert.ok:
        # cannot happen when the hypotheses hold; surfaced loudly if it does
        raise AssertionError(f"refinement conclusion failed: {cert}")
    return cert


# -- the carry set and the truncation map --------------------------------------

@dataclass(frozen=True)
class CarrySet:
    """Sigma = {lam b^(n-1) + lam' : |lam| <= 3b, |lam'| <= 3}."""

    b: int
    n: int
    members: frozenset = field(repr=False)

    @classmethod
    def build(cls, b: int, n: int) -> "CarrySet":
        b = check_base(b)
        if n < 1:
            raise ValueError("n must be >= 1")
        top = b ** (n - 1)
        mem = frozenset(lam * top + lp for lam in range(-3 * b, 3 * b + 1) for lp in range(-3, 4))
        return cls(b, n, mem)

    @property
    def bound(self) -> int:
        return 7 * (6 * self.b + 1)

    def __contains__(self, x) -> bool:
        return int(x) in self.members

    def __len__(self) -> int:
        return len(self.members)


def pi_map(theta, b: int, n: int, ms: Sequence[int]):
    """pi(m) = psi(theta m) and w_n(theta m) for each m."""
    return psi_weight_batch(theta, ms, b, n)


@dataclass
class AlmostHomReport:
    checked: int
    sigma_size: int
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


def almost_hom_check(theta, b: int, n: int, quads: Sequence[tuple]) -> AlmostHomReport:
    """pi(m1) + pi(m2) - pi(m3) - pi(m4) lies in Sigma whenever m1+m2 = m3+m4."""
    sigma = CarrySet.build(b, n)
    flat = []
    for qd in quads:
        m1, m2, m3, m4 = (int(v) for v in qd)
        if m1 + m2 != m3 + m4:
            raise ValueError(f"not an additive quadruple: {qd}")
        flat.extend((m1, m2, m3, m4))
    psis, _ = pi_map(theta, b, n, flat)
    failures = []
    for i in range(0, len(flat), 4):
        diff = int(psis[i]) + int(psis[i + 1]) - int(psis[i + 2]) - int(psis[i + 3])
        if diff not in sigma:
            failures.append((tuple(flat[i:i + 4]), diff))
    return AlmostHomReport(len(flat) // 4, len(sigma), failures)


# -- digit to diophantine ------------------------------------------------------

@dataclass(frozen=True)
class DigitalHypothesis:
    theta: Fraction
    b: int
    M: int
    n: int
    r: int
    eta: Fraction | None = None  # None: take the exact census density

    @property
    def N(self) -> int:
        return self.b**self.n

    @property
    def asymptotic_regime(self) -> bool:
        """M, N >= b^(20r) eta^-2: true only far beyond desk scale."""
        if self.eta is None:
            return False
        need = Fraction(self.b ** (20 * self.r)) / (as_exact(self.eta) ** 2)
        return self.M >= need and self.N >= need


def fiber_class(size: int, M: int) -> int:
    """j with 2^(-j-1) M < size <= 2^(-j) M. Fibres live in [-M, M] and can
    exceed M, in which case j = -1."""
    if size <= 0:
        raise ValueError("empty fibre")
    if size > M:
        return -1
    j = 0
    while size * 2 ** (j + 1) <= M:
        j += 1
    return j


@dataclass
class DiophantineOutcome:
    status: str  # "ok" or "stalled"
    q: int | None
    dist: Fraction | None  # ||theta q||
    trace: dict

    def to_json(self) -> dict:
        d = {"status": self.status, "q": self.q,
             "dist": None if self.dist is None else str(self.dist)}
        d.update(self.trace)
        return d


def default_parameters(b: int, n: int, r: int, eta: Fraction, M: int) -> dict:
    N = b**n
    return {
        "L": 2 * M,
        "delta1": Fraction(2 * b, N),
        "delta2": Fraction(1, 2 ** (4 * r + 22) * b ** (4 * r + 1)) * eta**2,
        "min_fiber": Fraction(M, 2 ** (4 * r + 20) * b ** (4 * r + 1)) * eta**2,
    }


def digital_to_diophantine(hyp: DigitalHypothesis, overrides: dict | None = None) -> DiophantineOutcome:
    """Run the fibre argument and return q with an exact ||theta q||.

    ``overrides`` may set delta1, delta2 (a value, or "auto" for |S|/L) and
    min_fiber. Without them the asymptotic constants are used, which stall at
    desk scale. A stalled run carries, for reference only, a plain Dirichlet
    approximation at Q = 2M in its trace; that q is not a pipeline output.
    """
    theta = unit_angle(hyp.theta)
    b, M, n, r = check_base(hyp.b), int(hyp.M), int(hyp.n), int(hyp.r)
    if M < 1 or n < 1:
        raise HypothesisViolated("M,N>=1")
    trace: dict = {"hypothesis": {"theta": str(theta), "b": b, "M": M, "n": n, "r": r,
                                  "eta": None if hyp.eta is None else str(hyp.eta)}}
    if theta == 0:
        trace["note"] = "theta = 0"
        return DiophantineOutcome("ok", 1, Fraction(0), trace)

    ms = list(range(-M, M + 1))
    psis, ws = pi_map(theta, b, n, ms)
    census = [(m, int(p)) for m, p, w in zip(ms, psis, ws) if w <= r]
    trace["census"] = len(census)
    eta = as_exact(hyp.eta) if hyp.eta is not None else Fraction(len(census), M)
    trace["eta_used"] = str(eta)
    if eta <= 0 or eta > Fraction(2 * M + 1, M):
        raise HypothesisViolated("eta in (0,1]", f"eta={eta}")
    if len(census) < eta * M:
        raise HypothesisViolated("census>=eta*M", f"{len(census)} < {eta * M}")

    fibers = defaultdict(list)
    for m, a in census:
        fibers[a].append(m)
    table = sorted(((fiber_class(len(X), M), -len(X), a) for a, X in fibers.items()))
    trace["fibers"] = [{"a": a, "size": -s, "j": j} for j, s, a in table]

    params = default_parameters(b, n, r, eta, M)
    ov = dict(overrides or {})
    min_fiber = as_exact(ov.get("min_fiber", params["min_fiber"]))
    j, neg_size, a = table[0]
    X = sorted(fibers[a])
    trace["chosen"] = {"a": a, "size": len(X), "j": j, "min_fiber": str(min_fiber)}
    if len(X) < max(2, min_fiber):
        fb = dirichlet_approx(theta, 2 * M)
        trace["stalled"] = "largest fibre below cutoff"
        trace["fallback_dirichlet"] = {"a": fb.a, "q": fb.q, "dist": str(dist_to_int(theta * fb.q))}
        return DiophantineOutcome("stalled", None, None, trace)

    m0 = X[0]
    shifted = [m - m0 for m in X]
    pos = sum(1 for v in shifted if v > 0)
    neg = sum(1 for v in shifted if v < 0)
    sign = 1 if pos >= neg else -1
    S = sorted(sign * v for v in shifted if sign * v > 0)
    L = 2 * M
    delta1 = as_exact(ov.get("delta1", params["delta1"]))
    d2raw = ov.get("delta2", params["delta2"])
    delta2 = Fraction(len(S), L) if d2raw == "auto" else as_exact(d2raw)
    trace["refine"] = {"m0": m0, "sign": sign, "S_size": len(S), "L": L,
                       "delta1": str(delta1), "delta2": str(delta2)}
    try:
        cert = vinogradov_refine(theta, L, delta1, delta2, S)
    except HypothesisViolated as exc:
        exc.trace = trace
        raise
    trace["certificate"] = {"q": cert.q, "dist": str(cert.dist),
                            "q_bound": str(cert.q_bound), "dist_bound": str(cert.dist_bound),
                            "divides_all": cert.divides_all}
    return DiophantineOutcome("ok", cert.q, cert.dist, trace)


def planted_vinogradov_instance(rng, max_q: int = 30):
    """A random (alpha, L, delta1, delta2, S) meeting every hypothesis.

    alpha = a/q + tiny offset; S = multiples of q in [1, L] whose offset
    error stays under delta1.
    """
    q = rng.integer(1, max_q)
    a = rng.below(q)
    while q > 1 and math.gcd(a, q) != 1:
        a = rng.below(q)
    L = rng.integer(32 * q, 64 * q + 2000)
    delta2 = Fraction(1, 2 * q)
    delta1 = delta2 / rng.integer(32, 64)
    # |offset| * L <= delta1 keeps every multiple of q in [1, L] inside S
    offset = Fraction(rng.integer(-10**6, 10**6), 10**6) * delta1 / L
    alpha = (Fraction(a, q) + offset) % 1
    S = [n for n in range(q, L + 1, q) if dist_to_int(alpha * n) <= delta1]
    return alpha, L, delta1, delta2, S
