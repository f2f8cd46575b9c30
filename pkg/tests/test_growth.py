import math
from fractions import Fraction as F
from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from digitwaring.errors import HypothesisViolated
from digitwaring.growth import (CubeSet, audit_expansion, bilinear_bound_check,
                                bilinear_rep_count, common_difference_bound_check,
                                common_differences, cube_sumset, cube_sumset_density_check,
                                exhaustive_pair_check, gamma, product_expansion, realvar_f,
                                real_var_inequality_scan, tensor_factorizes)


def cube_sumset_oracle(sets):
    # coordinatewise integer sums of explicit 0/1 tuples
    n = sets[0].n
    vecs = [[tuple((v >> i) & 1 for i in range(n)) for v in A.members] for A in sets]
    return {tuple(map(sum, zip(*combo))) for combo in product(*vecs)}


def cube_sets(n, min_size=1):
    return st.frozensets(st.integers(0, 2**n - 1), min_size=min_size).map(lambda m: CubeSet(n, m))


def test_gamma():
    assert gamma(1) == 1
    assert abs(gamma(2) - math.log2(3) / 2) < 1e-15


def test_density_base_cases():
    full = CubeSet(1, frozenset({0, 1}))
    rep = cube_sumset_density_check([full, full])
    assert rep.size == 3 and abs(rep.margin) < 1e-12 and rep.ok
    zero = CubeSet(1, frozenset({0}))
    rep = cube_sumset_density_check([zero, zero])
    assert rep.size == 1 and abs(rep.margin) < 1e-12 and rep.ok


def test_density_requires_nonempty():
    with pytest.raises(HypothesisViolated):
        cube_sumset_density_check([CubeSet(2, frozenset()), CubeSet(2, frozenset({1}))])


def test_cube_member_range():
    with pytest.raises(ValueError):
        CubeSet(2, frozenset({4}))


@given(st.integers(1, 4).flatmap(lambda n: st.lists(cube_sets(n), min_size=1, max_size=3)))
def test_cube_sumset_matches_oracle(sets):
    assert cube_sumset(sets).count == len(cube_sumset_oracle(sets))
    assert cube_sumset_density_check(sets).ok


def test_exhaustive_pairs_n3():
    rep = exhaustive_pair_check(3)
    assert rep.pairs == 255**2 and rep.ok


@given(st.integers(1, 8).flatmap(lambda n: st.lists(cube_sets(n), min_size=2, max_size=4)))
def test_density_random(sets):
    assert cube_sumset_density_check(sets).ok


@given(st.integers(1, 3).flatmap(lambda n: st.lists(cube_sets(n), min_size=2, max_size=3)),
       st.integers(1, 3).flatmap(lambda n: st.lists(cube_sets(n), min_size=3, max_size=3)))
def test_tensorization(As, Bs):
    k = min(len(As), len(Bs))
    assert tensor_factorizes(As[:k], Bs[:k])


@pytest.mark.parametrize("r", [1, 2, 3, 4, 5])
def test_realvar_minimum(r):
    step = 0.01 if r <= 3 else 0.05
    res = real_var_inequality_scan(r, step=step)
    assert res.minimum >= 1 - 1e-9
    assert abs(realvar_f(res.argmin) - res.minimum) < 1e-12


def test_realvar_equality_points():
    assert abs(realvar_f([0.5, 0.5]) - 1) < 1e-12
    for x in (0.0, 0.3, 1.0):
        assert abs(realvar_f([x]) - 1) < 1e-15


@given(st.lists(st.floats(0, 1), min_size=1, max_size=5))
def test_realvar_pointwise(xs):
    xs = sorted(xs, reverse=True)
    assert realvar_f(xs) >= 1 - 1e-9


@pytest.mark.parametrize("omega,count", [([(1, 1)], 1), ([(1, 1), (1, 2)], 3)])
def test_bilinear_examples(omega, count):
    assert bilinear_rep_count(omega) == count


def test_bilinear_full_grid_against_double_loop():
    omega = [(u, v) for u in range(1, 6) for v in range(1, 6)]
    want = {u1 * v1 + u2 * v2 for u1, v1 in omega for u2, v2 in omega}
    assert bilinear_rep_count(omega) == len(want)


@given(st.integers(1, 12), st.integers(1, 12), st.data())
def test_bilinear_bound_random(U, V, data):
    omega = data.draw(st.sets(st.tuples(st.integers(-U, U), st.integers(-V, V)), min_size=1, max_size=40))
    rep = bilinear_bound_check(omega, U, V)
    assert rep.ok
    assert rep.eps <= F(1, 2**44)


def test_bilinear_box_hypothesis():
    with pytest.raises(HypothesisViolated):
        bilinear_bound_check([(3, 1)], 2, 2)


def test_common_differences_examples():
    assert common_differences([[0, 1]]).values == [-1, 0, 1]
    assert common_differences([[0, 2, 4], [0, 2, 4]]).values == [-4, -2, 0, 2, 4]


@given(st.integers(4, 30), st.integers(1, 3), st.data())
def test_common_differences_bound(X, t, data):
    sets = [data.draw(st.sets(st.integers(-X, X), min_size=1, max_size=2 * X + 1)) for _ in range(t)]
    want = None
    for S in sets:
        d = {a - b for a in S for b in S}
        want = d if want is None else want & d
    rep = common_difference_bound_check(sets, X)
    assert rep.size == len(want)
    assert rep.ok


def test_common_differences_witness():
    cd = common_differences([[0, 1, 2, 5], [10, 11, 12]], witness=True, X=12)
    core_diffs = {a - b for a in cd.core for b in cd.core}
    assert core_diffs <= set(cd.values)
    assert len(cd.core) == 3


def test_expansion_r1_full_set():
    m = 4
    ex = product_expansion(2, 1, m, [(y,) for y in range(2**m)], [0])
    assert set(range(2**m)) <= set(ex.values)


def test_expansion_r1_d3():
    ex = product_expansion(3, 1, 2, [(0,), (1,), (2,), (3,)], [0])
    assert ex.values == list(range(9))
    assert audit_expansion(ex, [(0,), (1,), (2,), (3,)]).ok


@pytest.mark.parametrize("seed", range(5))
def test_expansion_r2_audit(seed):
    rng = np.random.default_rng(seed)
    m = 3
    A = [t for t in product(range(8), repeat=2) if rng.random() < 0.5]
    ex = product_expansion(2, 2, m, A, [0, 0])
    aud = audit_expansion(ex, A)
    assert aud.ok
    assert aud.max_depth <= 16
    if ex.status == "ok":
        assert aud.checked == len(ex.values) > 0


def test_expansion_r3_shifted_audit():
    rng = np.random.default_rng(11)
    A = [t for t in product(range(4), repeat=3) if rng.random() < 0.7]
    ex = product_expansion(2, 3, 2, A, [1, -2, 3])
    aud = audit_expansion(ex, A)
    assert aud.ok and aud.max_depth <= ex.depth_bound()


def test_expansion_empty_fiber_is_reported():
    ex = product_expansion(2, 2, 2, [(0, 1)], [0, 0], cutoff=F(1, 2))
    assert ex.status == "empty-fiber" and ex.notes
    assert product_expansion(2, 1, 2, [], [0]).status == "empty-fiber"


def test_expansion_hypotheses():
    with pytest.raises(HypothesisViolated) as exc:
        product_expansion(1, 1, 2, [(0,)], [0])
    assert exc.value.clause == "d>=2"
    with pytest.raises(HypothesisViolated) as exc:
        product_expansion(2, 1, 2, [(0,)], [5])
    assert exc.value.clause == "|t_j|<=N"


def test_audit_catches_forgery():
    A = [(0,), (1,)]
    ex = product_expansion(3, 1, 1, A, [0])
    x = ex.values[-1]
    ex.reps[x + 1] = ex.reps[x]
    assert not audit_expansion(ex, A).ok
