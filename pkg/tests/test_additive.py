import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from digitwaring.additive import (BoxFunction, additive_energy, box_cs_check, box_norm,
                                  energy4, energy4_with_carry, energy_bound_check,
                                  gowers_cs_energy, hamming_ball, in_ball,
                                  quadripartite_bound_check, quadruple_lower_bound)
from digitwaring.errors import HypothesisViolated
from digitwaring.radix import digit_count_db

small_sets = st.lists(st.integers(-40, 40), min_size=1, max_size=25)


@pytest.mark.parametrize("A,E", [([7], 1), ([0, 1], 6), ([0, 1, 2], 19)])
def test_energy_examples(A, E):
    assert additive_energy(A) == E


@given(st.lists(st.integers(-10**4, 10**4), min_size=1, max_size=60))
def test_energy_matches_quadruple_loop(A):
    if len(set(A)) > 30:
        A = sorted(set(A))[:30]
    assert additive_energy(A) == oracles.energy_loop(A)


def test_energy_sparse_path_matches_loop():
    A = [0, 10**9, 3 * 10**9, 7, 10**12]
    assert additive_energy(A) == oracles.energy_loop(A)


@given(small_sets, small_sets, small_sets, small_sets, st.integers(-3, 3))
def test_energy4_matches_loop(A1, A2, A3, A4, e):
    assert energy4(A1, A2, A3, A4, e) == oracles.energy4_loop(A1, A2, A3, A4, e)


def test_energy4_examples():
    A = [0, 1, 5]
    assert energy4_with_carry(A, A, A, A, 0, 3) == additive_energy(A)
    assert energy4_with_carry([0], [0], [0], [0], 1, 3) == 0
    # a1 + 1 = a3 + a4 over A1={0,3}, A3={0,1}, A4={0,3}: (0,0,1) and (3,1,3)
    assert energy4_with_carry([0, 3], [1], [0, 1], [0, 3], 0, 3) == 2


def test_carry_out_of_range():
    with pytest.raises(HypothesisViolated) as exc:
        energy4_with_carry([0], [0], [0], [0], 3, 3)
    assert exc.value.clause == "|e|<b"


@pytest.mark.parametrize("b,r,m,want", [
    (3, 0, 5, [0]),
    (3, 1, 2, [-3, -1, 0, 1, 3]),
])
def test_ball_examples(b, r, m, want):
    assert hamming_ball(b, r, m) == want


def test_ball_size():
    assert len(hamming_ball(3, 1, 3)) == 7


@pytest.mark.parametrize("b,r,m", [(3, 2, 4), (4, 2, 3), (5, 1, 3), (10, 2, 2)])
def test_ball_against_exhaustive_digits(b, r, m):
    want = sorted({oracles.int_value(ds, b) for ds in oracles.all_centred_strings(b, m)
                   if sum(1 for d in ds if d) <= r})
    assert hamming_ball(b, r, m) == want
    assert all(digit_count_db(x, b) <= r for x in want)


def test_ball_window():
    assert hamming_ball(3, 1, 3, window=(0, 5)) == [0, 1, 3]


def test_energy_bound_examples():
    assert energy_bound_check([0], 3, 0).ok
    rep = energy_bound_check(hamming_ball(3, 1, 2), 3, 1)
    assert rep.ok and rep.value == oracles.energy_loop(hamming_ball(3, 1, 2))
    assert rep.bound_sq == (6**4 * 25) ** 2


def test_energy_bound_membership():
    assert not in_ball([4], 3, 1)
    with pytest.raises(HypothesisViolated):
        energy_bound_check([4], 3, 1)


@given(st.integers(0, 3), st.integers(1, 6), st.randoms(use_true_random=False))
def test_energy_bound_random_subsets(r, m, rnd):
    ball = hamming_ball(3, r, m)
    A = [x for x in ball if rnd.random() < 0.5] or [0]
    assert energy_bound_check(A, 3, r).ok


@given(st.lists(st.integers(0, 2), min_size=4, max_size=4), st.randoms(use_true_random=False),
       st.integers(-2, 2))
def test_quadripartite_random(rs, rnd, e):
    As = [[x for x in hamming_ball(3, r, 4) if rnd.random() < 0.6] or [0] for r in rs]
    assert quadripartite_bound_check(As, rs, e, 3).ok


@given(small_sets, small_sets, small_sets, small_sets, st.integers(-50, 50))
def test_gowers_cs_energy(S1, S2, S3, S4, sigma):
    assert gowers_cs_energy(S1, S2, S3, S4).ok
    assert additive_energy([s + sigma for s in S1]) == additive_energy(S1)


def test_gowers_cs_equal_sets():
    rep = gowers_cs_energy([0, 1, 3], [0, 1, 3], [0, 1, 3], [0, 1, 3])
    assert rep.joint**4 == np.prod(rep.energies)


@given(st.integers(1, 60), st.data())
def test_quadruple_bounds(M, data):
    S = data.draw(st.lists(st.integers(-M, M), min_size=1, max_size=M, unique=True))
    rep = quadruple_lower_bound(S, M)
    assert rep.cauchy_schwarz_ok
    assert rep.quarter_ok  # |S| <= M here


def test_quarter_bound_fails_beyond_M():
    # |S| > M breaks the eps^4 M^3 / 4 form: 19 < 81 / 4
    rep = quadruple_lower_bound([-1, 0, 1], 1)
    assert rep.energy == 19 and not rep.quarter_ok and rep.cauchy_schwarz_ok


def test_box_norm_examples():
    assert abs(box_norm(BoxFunction(np.ones((3, 2)))).value - 1) < 1e-12
    assert box_norm(BoxFunction(np.array([1.0, -1.0]))).value < 1e-7
    g = np.exp(2j * np.pi * np.array([0.1, 0.7, 0.3]))
    h = np.exp(2j * np.pi * np.array([0.5, 0.2]))
    assert abs(box_norm(BoxFunction(np.outer(g, h))).value - 1) < 1e-12


def test_box_norm_one_axis_is_mean():
    f = np.array([0.3 + 0.1j, -1.0, 2.0j])
    assert abs(box_norm(BoxFunction(f)).value - abs(f.mean())) < 1e-12


def test_box_norm_matches_definition():
    rng = np.random.default_rng(3)
    f = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
    total = 0
    for x0 in range(2):
        for x1 in range(2):
            for y0 in range(3):
                for y1 in range(3):
                    total += f[x0, y0] * np.conj(f[x0, y1]) * np.conj(f[x1, y0]) * f[x1, y1]
    want = (total.real / 36) ** 0.25
    assert abs(box_norm(BoxFunction(f)).value - want) < 1e-12


@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_box_cs_random(D, seed):
    rng = np.random.default_rng(seed)
    shape = tuple(int(v) for v in rng.integers(1, 5, size=D))
    f = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    psis = []
    for i in range(D):
        sh = list(shape)
        sh[i] = 1
        psis.append(np.exp(2j * np.pi * rng.random(sh)))
    assert box_cs_check(BoxFunction(f), psis).ok


def test_box_norm_dominates_mean():
    rng = np.random.default_rng(5)
    for _ in range(50):
        f = rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4))
        assert abs(f.mean()) <= box_norm(BoxFunction(f)).value + 1e-12


def test_box_cs_edge_cases():
    rep = box_cs_check(BoxFunction(np.ones((2, 2))), [np.ones((1, 2)), np.ones((2, 1))])
    assert abs(rep.lhs - 1) < 1e-15 and rep.ok
    rep = box_cs_check(BoxFunction(np.zeros((2, 2))), [np.ones((1, 2)), np.ones((2, 1))])
    assert rep.lhs == 0 and rep.norm == 0 and rep.ok


def test_box_cs_rejects_bad_factors():
    f = BoxFunction(np.ones((2, 2)))
    with pytest.raises(HypothesisViolated):
        box_cs_check(f, [np.array([[1.0, 0.5], [0.2, 1.0]]), np.ones((2, 1))])
    with pytest.raises(HypothesisViolated):
        box_cs_check(f, [np.full((1, 2), 2.0), np.ones((2, 1))])
