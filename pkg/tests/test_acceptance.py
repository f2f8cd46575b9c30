"""Acceptance criteria 1-12, each at its stated scale and tolerance.

Every test prints one ``PASS criterion N: ...`` or ``FAIL criterion N: ...``
line (also collected into the terminal summary), then asserts. Run alone
with ``pytest tests/test_acceptance.py -v -s``.
"""
import time
from fractions import Fraction as F

import numpy as np
import pytest

import oracles
from digitwaring.additive import (EPS_BOX, BoxFunction, additive_energy, box_cs_check,
                                  energy_bound_check, hamming_ball, quadripartite_bound_check)
from digitwaring.diophantine import (almost_hom_check, planted_vinogradov_instance,
                                     vinogradov_refine)
from digitwaring.ellipsephic import (EllipsephicParams, RangeBitset, min_basis_order, power_set,
                                     sumset, verify_certificate)
from digitwaring.expsums import (large_value_structure_check, linear_sum_group_ring,
                                 moment_2t_exact, moment_2t_quadrature, multisection_split)
from digitwaring.growth import exhaustive_pair_check, realvar_f, real_var_inequality_scan
from digitwaring.radix import centered_digits_int, w_n, w_tilde_n
from digitwaring.rng import SplitMix64

RESULTS = []


@pytest.fixture
def report(capsys):
    def _report(n, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
        RESULTS.append(line)
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
    return _report


def test_criterion_01_centred_digits(report):
    got = centered_digits_int(6277, 10).digits
    times = []
    for _ in range(20):
        t0 = time.perf_counter()
        centered_digits_int(6277, 10)
        times.append(time.perf_counter() - t0)
    best = min(times)
    report(1, got == (-3, -2, 3, -4, 1) and best < 1e-3,
           f"digits {list(got)}, runtime {best * 1e6:.1f} us")


def test_criterion_02_sandwich(report):
    # Expected to fail: the lower inequality is false as literally stated
    # (alpha = b^-(n+1) has w_n = 0 < w_tilde_n). Checked exactly anyway.
    rng = SplitMix64(2)
    t0 = time.perf_counter()
    lower = upper = 0
    first = None
    for _ in range(10_000):
        b = rng.choice([3, 5, 10])
        n = rng.integer(1, 40)
        alpha = rng.fraction(10**12)
        w, wt = w_n(alpha, b, n), w_tilde_n(alpha, b, n)
        if wt > w:
            lower += 1
            first = first or (alpha, b, n, w, wt)
        if w > 16 * b * b * wt:
            upper += 1
    dt = time.perf_counter() - t0
    detail = f"{lower} lower / {upper} upper violations in 10^4 samples, {dt:.1f} s"
    if first:
        a, b, n, w, wt = first
        detail += f"; e.g. alpha={a}, b={b}, n={n}: w_n={w}, w_tilde_n={float(wt):.3g}"
    report(2, lower == 0 and upper == 0 and dt < 30, detail)


def test_criterion_03_large_values(report):
    t0 = time.perf_counter()
    rep = large_value_structure_check(EllipsephicParams(3, 2, 4, 1, 2), 1 << 20)
    dt = time.perf_counter() - t0
    off = f"{rep.max_off_arc:.9f}" if rep.max_off_arc else "none"
    report(3, rep.ok and dt < 600,
           f"grid 2^20, {len(rep.violations)} violations, {rep.large_points} points above "
           f"1-(1/4)3^-12, off-arc points within 1e-3 of the level: {off}, {dt:.1f} s")


def test_criterion_04_parseval(report):
    worst = 0.0
    for n, t in [(1, 1), (1, 2), (2, 1), (2, 2)]:
        p = EllipsephicParams(3, 2, n, 1, 2)
        worst = max(worst, abs(float(moment_2t_exact(p, t)) - moment_2t_quadrature(p, t).value))
    exact = moment_2t_exact(EllipsephicParams(3, 2, 1, 1, 2), 1)
    report(4, worst <= 1e-6 and exact == F(1, 2),
           f"max |exact - quadrature| = {worst:.2e}, (n,t)=(1,1) exact {exact}")


def test_criterion_05_energy(report):
    rng = SplitMix64(5)
    t0 = time.perf_counter()
    bad = checked = 0
    for r in range(4):
        for m in range(1, 7):
            ball = hamming_ball(3, r, m)
            for _ in range(200):
                A = rng.subset(ball) or [rng.choice(ball)]
                checked += 1
                bad += not energy_bound_check(A, 3, r).ok
    quad = 0
    for e in range(-2, 3):
        for _ in range(40):
            rs = [rng.integer(0, 2) for _ in range(4)]
            As = [rng.subset(hamming_ball(3, ri, 4)) or [0] for ri in rs]
            quad += 1
            bad += not quadripartite_bound_check(As, rs, e, 3).ok
    dt = time.perf_counter() - t0
    report(5, bad == 0 and dt < 60,
           f"{checked} energy + {quad} quadripartite instances, {bad} violations, {dt:.1f} s")


def test_criterion_06_density_exhaustive(report):
    t0 = time.perf_counter()
    rep = exhaustive_pair_check(3)
    dt = time.perf_counter() - t0
    report(6, rep.pairs == 65025 and rep.ok and dt < 60,
           f"{rep.pairs} pairs, {rep.violations} violations, min log-margin {rep.min_margin:.3g}, {dt:.1f} s")


def test_criterion_07_realvar(report):
    mins = {r: real_var_inequality_scan(r, step=0.01 if r < 4 else 0.02).minimum for r in (2, 3, 4)}
    half = realvar_f([0.5, 0.5])
    ok = all(v >= 1 - 1e-9 for v in mins.values()) and abs(half - 1) <= 1e-12
    report(7, ok, f"minima {', '.join(f'r={r}: {v:.12f}' for r, v in mins.items())}; "
                  f"f(1/2,1/2) - 1 = {half - 1:.1e}")


def test_criterion_08_vinogradov(report):
    rng = SplitMix64(8)
    fails = 0
    for _ in range(10_000):
        alpha, L, d1, d2, S = planted_vinogradov_instance(rng)
        cert = vinogradov_refine(alpha, L, d1, d2, S)
        exact = oracles.dist(alpha * cert.q)
        fails += not (cert.q <= 16 / d2 and exact == cert.dist and exact <= d1 / (d2 * L))
    report(8, fails == 0, f"10^4 planted instances, {fails} failures")


def test_criterion_09_almost_hom(report):
    rng = SplitMix64(9)
    total = fails = 0
    sizes = {}
    for i in range(100):
        b = (3, 5, 10)[i % 3]
        n = rng.integer(1, 12)
        theta = rng.fraction(10**6)
        quads = []
        for _ in range(1000):
            m1, m2, m3 = (rng.integer(-10**6, 10**6) for _ in range(3))
            quads.append((m1, m2, m3, m1 + m2 - m3))
        rep = almost_hom_check(theta, b, n, quads)
        total += rep.checked
        fails += len(rep.failures)
        sizes[b] = max(sizes.get(b, 0), rep.sigma_size)
    ok = fails == 0 and total == 10**5 and all(s <= 7 * (6 * b + 1) for b, s in sizes.items())
    report(9, ok, f"{total} quadruples, {fails} outside Sigma, |Sigma| max {sizes}")


def test_criterion_10_oracles(report):
    rng = SplitMix64(10)
    mism = []
    for _ in range(200):
        A = [rng.integer(-500, 500) for _ in range(rng.integer(0, 80))]
        B = [rng.integer(-500, 500) for _ in range(rng.integer(0, 80))]
        got = set(sumset(RangeBitset.from_values(A), RangeBitset.from_values(B)).members().tolist())
        if got != oracles.sumset(A, B):
            mism.append("sumset")
    for size in [1, 2, 5, 10, 20, 40, 60, 60]:
        A = rng.sample(range(-200, 201), size)
        if additive_energy(A) != oracles.energy_loop(A):
            mism.append("energy")
    for _ in range(300):
        m, d = rng.integer(1, 12), rng.integer(2, 10)
        q = rng.integer(1, 500)
        direct, prod_ = linear_sum_group_ring(F(rng.below(q), q), m, d)
        if not np.array_equal(direct, prod_):
            mism.append("linear")
    for _ in range(10_000):
        k, b = rng.integer(1, 4), rng.integer(3, 10)
        x = [rng.below(2) for _ in range(k * rng.integer(1, 8))]
        parts = multisection_split(x, k, b)
        if oracles.L(x, b) != sum(b**j * oracles.L(p, b**k) for j, p in enumerate(parts)):
            mism.append("multisection")
    report(10, not mism, f"sumset/energy/linear/multisection mismatches: {len(mism)} {sorted(set(mism))}")


def test_criterion_11_box_cs(report):
    rng = np.random.default_rng(11)
    bad = 0
    worst = -np.inf
    for _ in range(500):
        D = int(rng.integers(1, 4))
        shape = tuple(int(s) for s in rng.integers(1, 5, size=D))
        f = rng.normal(size=shape) + 1j * rng.normal(size=shape)
        psis = []
        for i in range(D):
            sh = list(shape)
            sh[i] = 1
            psis.append(rng.random(sh) * np.exp(2j * np.pi * rng.random(sh)))
        rep = box_cs_check(BoxFunction(f), psis)
        bad += not rep.ok
        worst = max(worst, rep.lhs - rep.norm)
    report(11, bad == 0, f"500 instances, {bad} violations, max lhs - norm {worst:.3g} "
                         f"(guard {EPS_BOX:.1e})")


def test_criterion_12_basis_certificate(report):
    p = EllipsephicParams(3, 2, 1, 1, 2)
    lo, hi = 50, 2000
    cert = min_basis_order(p, (lo, hi), 64)
    # independent recheck with plain Python sets
    powers = sorted(power_set(p, hi))
    layers = [{0}]
    for _ in range(cert.s):
        layers.append({x + y for x in layers[-1] for y in powers if x + y <= hi})
    # 0 is a power, so layer j holds every sum of at most j powers
    covered = all(x in layers[cert.s] for x in range(lo, hi + 1))
    witness_ok = lo <= cert.witness <= hi and cert.witness not in layers[cert.s - 1]
    ok = verify_certificate(p, cert) and covered and witness_ok
    report(12, ok, f"s={cert.s} on [{lo}, {hi}], witness {cert.witness} needs s summands, "
                   f"coverage and witness rechecked")
