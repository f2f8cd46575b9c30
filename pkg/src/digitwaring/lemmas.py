"""Randomised verification suites, one per checkable statement.

Every suite takes (trials, rng) and returns a dict with at least ``ok``,
``checked`` and ``failures`` (the first few counterexamples). Suites are pure
and deterministic given the generator state.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import additive, diophantine, expsums, growth, radix
from .ellipsephic import (EllipsephicParams, RangeBitset, find_progression_in_iterated_sumset,
                          interval_sum_cover, sumset)
from .errors import HypothesisViolated, NotFound
from .rng import SplitMix64

MAX_FAILURES = 10


@dataclass(frozen=True)
class Lemma:
    name: str
    reference: str
    run: Callable[[int, SplitMix64], dict]
    default_trials: int


REGISTRY: dict[str, Lemma] = {}


def lemma(name: str, reference: str, default_trials: int = 1000):
    def deco(fn):
        REGISTRY[name] = Lemma(name, reference, fn, default_trials)
        return fn
    return deco


def _result(checked: int, failures: list, **extra) -> dict:
    out = {"ok": not failures, "checked": checked, "failure_count": len(failures),
           "failures": failures[:MAX_FAILURES]}
    out.update(extra)
    return out


def random_angle(rng: SplitMix64, b: int, n: int) -> Fraction:
    den = rng.integer(1, b ** (n + 2))
    return Fraction(rng.below(den), den)


@lemma("ww-tilde", "digit count versus sum of squared distances: w_n <= 16 b^2 w~_n, "
       "w~_n <= K_b (w_n + 1)", 10_000)
def ww_tilde(trials, rng):
    """The upper bound and the run-length lower bound. The literal
    w~_n <= w_n is counted separately: it fails when a nonzero digit sits
    just past position n."""
    fails, literal = [], 0
    for _ in range(trials):
        b = rng.choice((3, 5, 10))
        n = rng.integer(1, 40)
        a = random_angle(rng, b, n)
        w = radix.w_n(a, b, n)
        wt = radix.w_tilde_n(a, b, n)
        if wt > w:
            literal += 1
        if w > 16 * b * b * wt or wt > radix.hamming_weight_ball_bound(b) * (w + 1):
            fails.append({"alpha": str(a), "b": b, "n": n, "w": w, "w_tilde": str(wt)})
    return _result(trials, fails, literal_lower_violations=literal)


@lemma("multisection", "L_b(x) = sum_j b^j L_{b^k}(x^(j))", 10_000)
def multisection(trials, rng):
    fails = []
    for _ in range(trials):
        b, k = rng.integer(2, 10), rng.integer(1, 4)
        x = [rng.below(2) for _ in range(k * rng.integer(1, 8))]
        try:
            expsums.multisection_split(x, k, b)
        except AssertionError as exc:
            fails.append({"x": x, "k": k, "b": b, "error": str(exc)})
    return _result(trials, fails)


@lemma("linear-product", "E_y e(alpha L_d(y)) factorises over digits; "
       "|1 + e(t)| <= 2 exp(-||t||^2)", 300)
def linear_product(trials, rng):
    fails = []
    for _ in range(trials):
        d, m = rng.integer(2, 10), rng.integer(1, 8)
        alpha = rng.fraction(500)
        direct, prod_ = expsums.linear_sum_group_ring(alpha, m, d)
        val, bound = expsums.linear_product_magnitude(alpha, m, d)
        if not np.array_equal(direct, prod_) or val > bound + 1e-12:
            fails.append({"alpha": str(alpha), "d": d, "m": m})
    m1, m2 = expsums.cos_exp_inequalities()
    if m1 < -1e-12 or m2 < -1e-12:
        fails.append({"cos_exp_margins": [m1, m2]})
    return _result(trials, fails)


@lemma("moment-parseval", "2t-th moment equals normalised count of t-fold coincidences", 8)
def moment_parseval(trials, rng):
    fails = []
    for _ in range(trials):
        p = EllipsephicParams(3, 2, rng.integer(1, 3), 1, 2)
        t = rng.integer(1, 2)
        ex = expsums.moment_2t_exact(p, t)
        qd = expsums.moment_2t_quadrature(p, t)
        if abs(float(ex) - qd.value) > 1e-6:
            fails.append({"n": p.n, "t": t, "exact": str(ex), "quadrature": qd.value})
    return _result(trials, fails)


@lemma("large-values", "very large |mu_hat| forces a major-arc approximation", 1)
def large_values(trials, rng):
    fails, reports = [], []
    for i in range(trials):
        n = 2 + i % 3
        rep = expsums.large_value_structure_check(EllipsephicParams(3, 2, n, 1, 2), 1 << 16)
        reports.append({"n": n, "large_points": rep.large_points, "max_off_arc": rep.max_off_arc})
        fails += [{"n": n, "theta": str(t), "magnitude": m} for t, m in rep.violations]
    return _result(trials, fails, runs=reports)


@lemma("decoupling", "|mu_hat|^(2^k) bounded by the box average and the shifted products", 20)
def decoupling(trials, rng):
    fails = []
    for _ in range(trials):
        p = EllipsephicParams(3, 2, 2 * rng.integer(1, 2), 1, 2)
        theta = rng.fraction(200)
        rep = expsums.decoupling_bound_check(p, theta)
        if not rep.ok:
            fails.append({"theta": str(theta), "n": p.n})
    return _result(trials, fails)


@lemma("bilinear", "at least eps^7 UV integers u1 v1 + u2 v2", 200)
def bilinear(trials, rng):
    fails = []
    for _ in range(trials):
        U, V = rng.integer(1, 12), rng.integer(1, 12)
        grid = [(u, v) for u in range(-U, U + 1) for v in range(-V, V + 1)]
        omega = rng.sample(grid, rng.integer(1, len(grid)))
        rep = growth.bilinear_bound_check(omega, U, V)
        if not rep.ok:
            fails.append({"U": U, "V": V, "omega": omega, "count": rep.count})
    return _result(trials, fails)


@lemma("common-differences", "|cap (S_i - S_i)| >= (eta/5)^t X", 200)
def common_differences(trials, rng):
    fails = []
    for _ in range(trials):
        X, t = rng.integer(2, 30), rng.integer(1, 3)
        sets = [rng.sample(range(-X, X + 1), rng.integer(1, 2 * X + 1)) for _ in range(t)]
        rep = growth.common_difference_bound_check(sets, X)
        if not rep.ok:
            fails.append({"X": X, "sets": sets, "size": rep.size})
    return _result(trials, fails)


@lemma("product-expansion", "+- sums of at most (4d)^r products phi_1 ... phi_r", 20)
def product_expansion(trials, rng):
    fails, empty = [], 0
    for _ in range(trials):
        d, r, m = rng.integer(2, 3), rng.integer(1, 2), rng.integer(1, 3)
        cells = list(np.ndindex(*([2**m] * r)))
        A = rng.subset(cells, 0.5) or [cells[0]]
        shifts = [rng.integer(-(d**m), d**m) for _ in range(r)]
        ex = growth.product_expansion(d, r, m, A, shifts)
        if ex.status != "ok":
            empty += 1
            continue
        audit = growth.audit_expansion(ex, A)
        if not audit.ok:
            fails.append({"d": d, "r": r, "m": m, "failures": audit.failures[:3]})
    return _result(trials, fails, empty_fiber=empty)


@lemma("energy-ball", "E(A) <= (2b)^(4r) |A|^2 in a digital Hamming ball", 200)
def energy_ball(trials, rng):
    fails = []
    for _ in range(trials):
        r, m = rng.integer(0, 3), rng.integer(1, 6)
        ball = additive.hamming_ball(3, r, m)
        A = rng.subset(ball) or [0]
        rep = additive.energy_bound_check(A, 3, r)
        if not rep.ok:
            fails.append({"r": r, "m": m, "A": A, "E": rep.value})
    return _result(trials, fails)


@lemma("quadripartite", "a1 + a2 = a3 + a4 + e count bounded by (2b)^(sum r) prod |A_i|^(1/2)", 200)
def quadripartite(trials, rng):
    fails = []
    for _ in range(trials):
        rs = [rng.integer(0, 2) for _ in range(4)]
        As = [rng.subset(additive.hamming_ball(3, r, 4)) or [0] for r in rs]
        for e in range(-2, 3):
            rep = additive.quadripartite_bound_check(As, rs, e, 3)
            if not rep.ok:
                fails.append({"rs": rs, "e": e, "count": rep.value})
    return _result(trials, fails)


@lemma("almost-hom", "pi(m1) + pi(m2) - pi(m3) - pi(m4) in Sigma", 100_000)
def almost_hom(trials, rng):
    fails, done = [], 0
    per = 1000
    while done < trials:
        b = rng.choice((3, 5, 10))
        n = rng.integer(1, 12)
        theta = random_angle(rng, b, n)
        quads = []
        for _ in range(min(per, trials - done)):
            m1, m2, m3 = (rng.integer(-10**6, 10**6) for _ in range(3))
            quads.append((m1, m2, m3, m1 + m2 - m3))
        rep = diophantine.almost_hom_check(theta, b, n, quads)
        if rep.sigma_size > 7 * (6 * b + 1):
            fails.append({"b": b, "sigma": rep.sigma_size})
        fails += [{"theta": str(theta), "b": b, "n": n, "quad": q, "diff": d} for q, d in rep.failures]
        done += len(quads)
    return _result(done, fails)


@lemma("digital-dioph", "many m with few digits in theta m force small ||theta q||", 30)
def digital_dioph(trials, rng):
    fails, stalled, refused = [], 0, 0
    for _ in range(trials):
        q = rng.integer(2, 12)
        theta = Fraction(rng.integer(1, q - 1), q)
        hyp = diophantine.DigitalHypothesis(theta, 3, 200, 8, 2)
        try:
            out = diophantine.digital_to_diophantine(hyp, {"delta2": "auto"})
        except HypothesisViolated:
            refused += 1
            continue
        if out.status != "ok":
            stalled += 1
            continue
        if out.q > 2 * hyp.M or out.dist > Fraction(q, hyp.N):
            fails.append({"theta": str(theta), "q": out.q, "dist": str(out.dist)})
    return _result(trials, fails, stalled=stalled, hypothesis_refused=refused)


@lemma("box-cs", "|E prod Psi_i f| <= ||f||_box for 1-bounded Psi_i free of x_i", 500)
def box_cs(trials, rng):
    fails = []
    gen = np.random.default_rng(rng.next_u64())
    for _ in range(trials):
        D = rng.integer(1, 3)
        shape = tuple(rng.integer(1, 4) for _ in range(D))
        f = gen.normal(size=shape) + 1j * gen.normal(size=shape)
        psis = []
        for i in range(D):
            sh = list(shape)
            sh[i] = 1
            ph = np.exp(2j * np.pi * gen.random(sh)) * gen.random(sh)
            psis.append(ph)
        rep = additive.box_cs_check(additive.BoxFunction(f), psis)
        if not rep.ok:
            fails.append({"shape": shape, "lhs": rep.lhs, "norm": rep.norm})
    return _result(trials, fails)


@lemma("density-cube", "|A_1 + ... + A_r| >= (alpha_1 ... alpha_r)^gamma (r+1)^n", 2000)
def density_cube(trials, rng):
    fails = []
    for _ in range(trials):
        n, r = rng.integer(1, 8), rng.integer(1, 4)
        sets = []
        for _ in range(r):
            p = rng.random()
            mem = rng.subset(range(2**n), p) or [rng.below(2**n)]
            sets.append(growth.CubeSet(n, frozenset(mem)))
        rep = growth.cube_sumset_density_check(sets)
        if not rep.ok:
            fails.append({"n": n, "sets": [sorted(s.members) for s in sets], "margin": rep.margin})
    ex = growth.exhaustive_pair_check(3)
    if not ex.ok:
        fails.append({"exhaustive_violations": ex.violations})
    return _result(trials, fails, exhaustive_pairs=ex.pairs)


@lemma("real-var", "sum_j (x_1..x_j (1-x_{j+1})..(1-x_r))^gamma >= 1 on the ordered simplex", 5)
def real_var(trials, rng):
    fails, mins = [], {}
    for r in range(1, min(trials, 5) + 1):
        res = growth.real_var_inequality_scan(r, step=0.05 if r == 5 else 0.02)
        mins[r] = res.minimum
        if res.minimum < 1 - 1e-9:
            fails.append({"r": r, "minimum": res.minimum, "argmin": res.argmin})
    return _result(len(mins), fails, minima=mins)


@lemma("tensorization", "sumset sizes multiply over product sets", 200)
def tensorization(trials, rng):
    fails = []
    for _ in range(trials):
        r = rng.integer(1, 3)
        nA, nB = rng.integer(1, 3), rng.integer(1, 3)
        As = [growth.CubeSet(nA, frozenset(rng.subset(range(2**nA)) or [0])) for _ in range(r)]
        Bs = [growth.CubeSet(nB, frozenset(rng.subset(range(2**nB)) or [0])) for _ in range(r)]
        if not growth.tensor_factorizes(As, Bs):
            fails.append({"A": [sorted(a.members) for a in As], "B": [sorted(b.members) for b in Bs]})
    return _result(trials, fails)


@lemma("vinogradov", "q <= 16/delta2 with ||alpha q|| <= delta1 / (delta2 L)", 10_000)
def vinogradov(trials, rng):
    fails = []
    for _ in range(trials):
        alpha, L, d1, d2, S = diophantine.planted_vinogradov_instance(rng)
        cert = diophantine.vinogradov_refine(alpha, L, d1, d2, S)
        if not cert.ok:
            fails.append({"alpha": str(alpha), "L": L, "q": cert.q})
    return _result(trials, fails)


@lemma("interval-sums", "union of jI, j <= 2K/eta^2, covers [4X/eta, KX/eta]", 500)
def interval_sums(trials, rng):
    fails = []
    for _ in range(trials):
        X = rng.integer(2, 10**6)
        lo = rng.integer(0, X - 2)
        hi = rng.integer(lo + 1, X - 1)
        K = rng.integer(4, 50)
        rep = interval_sum_cover((lo, hi), X, K)
        if not rep.ok:
            fails.append({"I": [lo, hi], "X": X, "K": K})
    return _result(trials, fails)


@lemma("progression", "4r-fold sumset of a dense A contains a long progression with small step", 200)
def progression(trials, rng):
    fails = []
    for _ in range(trials):
        X, r = rng.integer(8, 300), rng.integer(2, 5)
        need = 1 + -(-X // r)
        A = rng.sample(range(1, X + 1), rng.integer(need, X))
        try:
            find_progression_in_iterated_sumset(A, X, r)
        except NotFound as exc:
            fails.append({"X": X, "r": r, "A": sorted(A), "error": str(exc)})
    return _result(trials, fails)


@lemma("sumset-oracle", "bitset sumset equals pairwise brute force", 500)
def sumset_oracle(trials, rng):
    fails = []
    for _ in range(trials):
        A = rng.sample(range(-50, 200), rng.integer(1, 60))
        B = rng.sample(range(-80, 80), rng.integer(1, 60))
        got = set(int(v) for v in sumset(RangeBitset.from_values(A), RangeBitset.from_values(B)).members())
        if got != {a + b for a in A for b in B}:
            fails.append({"A": sorted(A), "B": sorted(B)})
    return _result(trials, fails)


def names() -> list[str]:
    return sorted(REGISTRY)


def run(name: str, trials: int | None = None, seed: int = 0) -> dict:
    if name not in REGISTRY:
        raise KeyError(name)
    lem = REGISTRY[name]
    t = lem.default_trials if trials is None else int(trials)
    out = lem.run(t, SplitMix64(seed))
    out.update({"lemma": name, "reference": lem.reference, "trials": t, "seed": seed})
    return out
