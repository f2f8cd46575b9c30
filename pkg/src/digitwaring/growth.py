"""Sumset growth: subsets of {0,1}^n, the gamma-inequality, and the
product-expansion recursion built from bilinear sums and common differences.

A vector in {0,...,r}^n is encoded as sum_i v_i (r+1)^i. Adding r encoded
0/1-vectors never carries, so cube sumsets become integer sumsets and reuse
the bitset engine.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .config import check_bits, check_pairs
from .ellipsephic import RangeBitset, eval_L
from .errors import BudgetExceeded, HypothesisViolated

LOG_SLACK = 1e-9


def gamma(r: int) -> float:
    return math.log2(r + 1) / r


@dataclass(frozen=True)
class CubeSet:
    """Subset of {0,1}^n; members are bitmasks (bit i = coordinate i)."""

    n: int
    members: frozenset

    def __post_init__(self):
        mem = frozenset(int(v) for v in self.members)
        if any(v < 0 or v >> self.n for v in mem):
            raise ValueError("member outside {0,1}^n")
        object.__setattr__(self, "members", mem)

    @property
    def density(self) -> Fraction:
        return Fraction(len(self.members), 2**self.n)

    def encoded(self, radix: int) -> list[int]:
        return sorted(eval_L([(v >> i) & 1 for i in range(self.n)], radix) for v in self.members)

    def __len__(self) -> int:
        return len(self.members)


def cube_sumset(sets: Sequence[CubeSet]) -> RangeBitset:
    """A_1 + ... + A_r as a bitset over the base-(r+1) codes of {0..r}^n.

    Each step ORs one shifted copy of the running sum per member of the next
    set; no code ever leaves [0, (r+1)^n) because coordinates never carry.
    """
    if not sets:
        raise ValueError("need at least one set")
    n = sets[0].n
    if any(A.n != n for A in sets):
        raise ValueError("dimension mismatch")
    radix = len(sets) + 1
    size = radix**n
    check_bits(size, "cube sumset")
    check_pairs(sum(len(A) for A in sets) * size // 64 + 1, "cube sumset")
    acc = np.zeros(size, dtype=bool)
    acc[sets[0].encoded(radix)] = True
    hi = max(sets[0].encoded(radix))
    for A in sets[1:]:
        codes = A.encoded(radix)
        nxt = np.zeros(size, dtype=bool)
        for c in codes:
            nxt[c:c + hi + 1] |= acc[:hi + 1]
        hi += codes[-1]
        acc = nxt
    return RangeBitset(0, acc)


@dataclass(frozen=True)
class DensityReport:
    r: int
    n: int
    size: int
    log_bound: float  # log of (prod alpha)^gamma (r+1)^n
    margin: float  # log(size) - log_bound

    @property
    def ok(self) -> bool:
        return self.margin >= -LOG_SLACK


def density_log_bound(alphas: Sequence[Fraction], r: int, n: int) -> float:
    return gamma(r) * sum(math.log(a.numerator) - math.log(a.denominator) for a in alphas) \
        + n * math.log(r + 1)


def cube_sumset_density_check(sets: Sequence[CubeSet]) -> DensityReport:
    """|A_1 + ... + A_r| >= (alpha_1 ... alpha_r)^gamma (r+1)^n, compared in logs."""
    if any(len(A) == 0 for A in sets):
        raise HypothesisViolated("non-empty", "every A_i must be non-empty")
    r, n = len(sets), sets[0].n
    size = cube_sumset(sets).count
    lb = density_log_bound([A.density for A in sets], r, n)
    return DensityReport(r, n, size, lb, math.log(size) - lb)


def _nonempty_subsets_encoded(n: int, radix: int) -> list[list[int]]:
    codes = [eval_L([(v >> i) & 1 for i in range(n)], radix) for v in range(2**n)]
    out = []
    for mask in range(1, 2 ** (2**n)):
        out.append([codes[v] for v in range(2**n) if mask >> v & 1])
    return out


@dataclass(frozen=True)
class ExhaustiveReport:
    pairs: int
    violations: int
    min_margin: float

    @property
    def ok(self) -> bool:
        return self.violations == 0


def exhaustive_pair_check(n: int = 3) -> ExhaustiveReport:
    """All pairs of non-empty A_1, A_2 in {0,1}^n with r = 2, via the pair kernel."""
    if 2**n > 8:
        raise BudgetExceeded("exhaustive pair check is limited to n <= 3")
    radix = 3
    subsets = _nonempty_subsets_encoded(n, radix)
    cnt = len(subsets)
    width = max(len(s) for s in subsets)
    pad = np.full((cnt, width), -1, dtype=np.int64)
    lens = np.array([len(s) for s in subsets], dtype=np.int64)
    for i, s in enumerate(subsets):
        pad[i, :len(s)] = s
    sizes = kernels.pair_sumset_sizes(pad, lens, pad, lens, radix**n)
    g = gamma(2)
    logd = np.log(lens / 2**n)
    bound = g * (logd[:, None] + logd[None, :]) + n * math.log(radix)
    margin = np.log(sizes) - bound
    return ExhaustiveReport(cnt * cnt, int(np.count_nonzero(margin < -LOG_SLACK)), float(margin.min()))


def tensor_product(A: CubeSet, B: CubeSet) -> CubeSet:
    """A x B in {0,1}^(nA + nB): A in the low coordinates."""
    return CubeSet(A.n + B.n, frozenset(a | (b << A.n) for a in A.members for b in B.members))


def tensor_factorizes(As: Sequence[CubeSet], Bs: Sequence[CubeSet]) -> bool:
    """|sum (A_i x B_i)| = |sum A_i| * |sum B_i|."""
    whole = cube_sumset([tensor_product(a, b) for a, b in zip(As, Bs)]).count
    return whole == cube_sumset(As).count * cube_sumset(Bs).count


# -- the real-variable inequality ----------------------------------------------

def realvar_f(x: Sequence[float]) -> float:
    x = np.asarray(x, dtype=np.float64)
    return float(kernels.realvar_values(x[None, :], gamma(len(x)))[0])


@dataclass(frozen=True)
class RealVarResult:
    r: int
    minimum: float
    argmin: tuple
    grid: int


def _coordinate_descent(x: np.ndarray, iters: int) -> tuple[float, np.ndarray]:
    r = x.size
    g = gamma(r)
    best = float(kernels.realvar_values(x[None, :], g)[0])
    for it in range(iters):
        improved = False
        for i in range(r):
            hi = 1.0 if i == 0 else x[i - 1]
            lo = 0.0 if i == r - 1 else x[i + 1]
            ts = np.linspace(lo, hi, 65)
            trial = np.repeat(x[None, :], ts.size, axis=0)
            trial[:, i] = ts
            vals = kernels.realvar_values(trial, g)
            k = int(np.argmin(vals))
            if vals[k] < best - 1e-16:
                best = float(vals[k])
                x = trial[k].copy()
                improved = True
        if not improved:
            break
    return best, x


def real_var_inequality_scan(r: int, step: float = 0.01, refine_iterations: int = 50) -> RealVarResult:
    """Minimise f over 1 >= x_1 >= ... >= x_r >= 0: ordered grid, then
    coordinate descent from the grid minimiser."""
    if r < 1:
        raise ValueError("r must be >= 1")
    G = max(1, round(1 / step))
    count = math.comb(G + r, r)
    check_pairs(count * r, "real-variable grid")
    best, arg = kernels.realvar_grid_min(r, G, gamma(r))
    x = np.asarray(arg, dtype=np.float64) / G
    val, x = _coordinate_descent(x, refine_iterations)
    return RealVarResult(r, min(best, val), tuple(float(v) for v in x), G)


# -- bilinear representations and common differences ---------------------------

def bilinear_values(omega: Iterable[tuple[int, int]]) -> set[int]:
    """{u1 v1 + u2 v2 : (u1, v1), (u2, v2) in omega}."""
    prods = np.unique(np.array([u * v for u, v in omega], dtype=object))
    check_pairs(prods.size**2, "bilinear sums")
    return {int(a) + int(b) for a in prods for b in prods}


def bilinear_rep_count(omega: Iterable[tuple[int, int]]) -> int:
    return len(bilinear_values(list(omega)))


EPS_BILINEAR_MAX = Fraction(1, 2**44)


@dataclass(frozen=True)
class BilinearReport:
    count: int
    density: Fraction  # |Omega| / UV
    eps: Fraction  # density capped at the lemma's 2^-44
    bound: Fraction  # eps^7 U V
    size_hypothesis: bool  # U, V >= 64 / eps

    @property
    def ok(self) -> bool:
        return self.count >= self.bound


def bilinear_bound_check(omega, U: int, V: int) -> BilinearReport:
    """Count n in [-2UV, 2UV] of the form u1 v1 + u2 v2 against eps^7 UV.

    The statement needs eps <= 2^-44; a larger density still gives a valid
    instance at the capped eps, since |Omega| >= eps UV keeps holding. The
    companion size condition U, V >= 64/eps is recorded, not enforced.
    """
    omega = list(set((int(u), int(v)) for u, v in omega))
    if not omega:
        raise HypothesisViolated("Omega non-empty")
    if any(abs(u) > U or abs(v) > V for u, v in omega):
        raise HypothesisViolated("Omega in box")
    dens = Fraction(len(omega), U * V)
    eps = min(dens, EPS_BILINEAR_MAX)
    vals = bilinear_values(omega)
    inside = sum(1 for x in vals if abs(x) <= 2 * U * V)
    return BilinearReport(inside, dens, eps, eps**7 * U * V, min(U, V) >= 64 / eps)


@dataclass
class CommonDifferences:
    values: list[int]
    shifts: tuple | None = None  # h_2..h_t
    core: list[int] | None = None  # S_1 cap (S_2 - h_2) cap ...
    exhaustive: bool = True


def _diffs(S: Sequence[int]) -> set[int]:
    return {a - b for a in S for b in S}


def common_differences(sets: Sequence[Iterable[int]], witness: bool = False, X: int | None = None):
    """Exact intersection of the difference sets S_i - S_i.

    With ``witness``, also find shifts h_2..h_t maximising
    |S_1 cap (S_2 - h_2) cap ... cap (S_t - h_t)| (exhaustively over
    [-2X, 2X] when affordable, greedily otherwise); the core's own
    difference set then lies inside the intersection.
    """
    sets = [sorted(set(int(v) for v in S)) for S in sets]
    if not sets or any(not S for S in sets):
        raise ValueError("need non-empty sets")
    check_pairs(sum(len(S) ** 2 for S in sets), "difference sets")
    inter = _diffs(sets[0])
    for S in sets[1:]:
        inter &= _diffs(S)
    out = CommonDifferences(sorted(inter))
    if not witness or len(sets) == 1:
        if witness:
            out.shifts, out.core = (), sets[0]
        return out
    if X is None:
        X = max(max(abs(S[0]), abs(S[-1])) for S in sets)
    lo = -X
    width = 2 * X + 1
    bits = []
    for S in sets:
        v = np.zeros(width, dtype=bool)
        v[np.array(S) - lo] = True
        bits.append(v)
    H = range(-2 * X, 2 * X + 1)

    def shifted(v, h):
        # (S - h) as a mask over [-X, X]
        w = np.zeros(width, dtype=bool)
        if h >= 0:
            w[:width - h] = v[h:]
        else:
            w[-h:] = v[:width + h]
        return w

    t = len(sets)
    total = (4 * X + 1) ** (t - 1)
    best = (-1, None, None)
    if total * width <= (1 << 26):
        for hs in product(H, repeat=t - 1):
            core = bits[0].copy()
            for v, h in zip(bits[1:], hs):
                core &= shifted(v, h)
            c = int(core.sum())
            if c > best[0]:
                best = (c, hs, core)
    else:
        out.exhaustive = False
        core = bits[0].copy()
        hs = []
        for v in bits[1:]:
            cand = max(H, key=lambda h: int((core & shifted(v, h)).sum()))
            hs.append(cand)
            core &= shifted(v, cand)
        best = (int(core.sum()), tuple(hs), core)
    out.shifts = tuple(best[1])
    out.core = [int(i) + lo for i in np.flatnonzero(best[2])]
    return out


@dataclass(frozen=True)
class DifferenceReport:
    size: int
    bound: Fraction  # (eta/5)^t X
    core_size: int | None
    core_bound_ok: bool | None

    @property
    def ok(self) -> bool:
        return self.size >= self.bound and self.core_bound_ok is not False


def common_difference_bound_check(sets, X: int) -> DifferenceReport:
    """|cap (S_i - S_i)| >= (eta/5)^t X, eta = min |S_i| / X, plus the
    witness core meeting the same bound when it was found exhaustively."""
    sets = [sorted(set(int(v) for v in S)) for S in sets]
    if any(S[0] < -X or S[-1] > X for S in sets):
        raise HypothesisViolated("S_i in [-X,X]")
    eta = Fraction(min(len(S) for S in sets), X)
    t = len(sets)
    bound = (eta / 5) ** t * X
    cd = common_differences(sets, witness=True, X=X)
    core_ok = None
    if cd.core is not None:
        inside = _diffs(cd.core) <= set(cd.values)
        core_ok = inside and (len(cd.core) >= bound if cd.exhaustive else True)
    return DifferenceReport(len(cd.values), bound, None if cd.core is None else len(cd.core), core_ok)


# -- product expansion -----------------------------------------------------------

Term = tuple  # (sign, (y_1, ..., y_r))


@dataclass
class Expansion:
    """Integers produced by the recursion, each with one recorded +-combination
    of products phi_1(y_1) ... phi_r(y_r), (y_1..y_r) in A."""

    d: int
    r: int
    m: int
    shifts: tuple
    reps: dict = field(default_factory=dict)  # value -> tuple of Terms
    status: str = "ok"
    notes: list = field(default_factory=list)

    @property
    def values(self) -> list[int]:
        return sorted(self.reps)

    def depth_bound(self) -> int:
        return (4 * self.d) ** self.r


def _phi(y: int, m: int, d: int, t: int) -> int:
    return eval_L([(y >> i) & 1 for i in range(m)], d) + t


def _negate(rep):
    return tuple((-s, ys) for s, ys in rep)


def _extend(rep, y):
    return tuple((s, ys + (y,)) for s, ys in rep)


def product_expansion(d: int, r: int, m: int, A: Iterable[tuple], shifts: Sequence[int],
                      cutoff: Fraction | None = None) -> Expansion:
    """Run the induction on r constructively.

    r = 1: (d-1)-fold sums of phi_1(y). r > 1: keep the y_r whose fibre
    A(y_r) has density >= cutoff (default alpha/2), expand each fibre, and for
    every z in (d-1) phi_r(Y) (lexicographically least representation) form
    S(z) = cap_i (B(y^(i)) - B(y^(i))); the output is all u1 v1 + u2 v2 over
    Omega = {(s, z) : s in S(z)}.
    """
    if d < 2:
        raise HypothesisViolated("d>=2")
    N = d**m
    check_bits(N, "product expansion")
    shifts = tuple(int(t) for t in shifts)
    if len(shifts) != r:
        raise ValueError(f"need {r} shifts")
    if any(abs(t) > N for t in shifts):
        raise HypothesisViolated("|t_j|<=N")
    A = sorted(set(tuple(int(y) for y in tup) for tup in A))
    if any(len(tup) != r or any(y < 0 or y >> m for y in tup) for tup in A):
        raise ValueError("A must hold r-tuples of m-bit words")
    ex = Expansion(d, r, m, shifts)
    if not A:
        ex.status = "empty-fiber"
        ex.notes.append("A is empty")
        return ex
    alpha = Fraction(len(A), 2 ** (m * r))
    cut = alpha / 2 if cutoff is None else Fraction(cutoff)

    if r == 1:
        Y = sorted(tup[0] for tup in A)
        ex.reps = _fold_sums(Y, d - 1, m, d, shifts[0])
        return ex

    fib = defaultdict(list)
    for tup in A:
        fib[tup[-1]].append(tup[:-1])
    Y = [y for y in sorted(fib) if Fraction(len(fib[y]), 2 ** (m * (r - 1))) >= cut]
    B = {}
    for y in Y:
        sub = product_expansion(d, r - 1, m, fib[y], shifts[:-1], cutoff)
        if sub.status != "ok" or not sub.reps:
            ex.notes.append(f"fibre {y} dropped: {sub.status}")
            continue
        B[y] = sub.reps
    if not B:
        ex.status = "empty-fiber"
        ex.notes.append(f"no fibre reaches density {cut}")
        return ex
    Ykeep = sorted(B)
    phi_r = {y: _phi(y, m, d, shifts[-1]) for y in Ykeep}
    # least representation of each z as a sum of d-1 values phi_r(y), y ascending
    zrep = {}
    for ys in _nondecreasing(Ykeep, d - 1):
        z = sum(phi_r[y] for y in ys)
        zrep.setdefault(z, ys)
    omega = {}  # (s, z) -> rep of s*z
    for z, ys in sorted(zrep.items()):
        S = None
        diff_reps = []
        for y in ys:
            dm = _diff_reps(B[y])
            diff_reps.append(dm)
            S = set(dm) if S is None else S & set(dm)
        check_pairs(len(omega) + len(S), "Omega")
        for s in sorted(S):
            rep = ()
            for y, dm in zip(ys, diff_reps):
                rep += _extend(dm[s], y)
            omega[(s, z)] = rep
    items = sorted(omega.items())
    check_pairs(len(items) ** 2, "bilinear combination")
    reps = {}
    for (u1, v1), r1 in items:
        for (u2, v2), r2 in items:
            x = u1 * v1 + u2 * v2
            if x not in reps:
                reps[x] = r1 + r2
    ex.reps = reps
    return ex


def _nondecreasing(Y: Sequence[int], k: int):
    """All nondecreasing k-tuples from sorted Y, in lexicographic order."""
    if k == 0:
        yield ()
        return
    for i in range(len(Y)):
        for rest in _nondecreasing(Y[i:], k - 1):
            yield (Y[i],) + rest


def _fold_sums(Y: Sequence[int], k: int, m: int, d: int, t: int) -> dict:
    phis = {y: _phi(y, m, d, t) for y in Y}
    out = {}
    for ys in _nondecreasing(sorted(Y), k):
        x = sum(phis[y] for y in ys)
        if x not in out:
            out[x] = tuple((1, (y,)) for y in ys)
    return out


def _diff_reps(reps: dict) -> dict:
    """b1 - b2 for b1, b2 in B, with the first-found representation."""
    keys = sorted(reps)
    out = {}
    for b1 in keys:
        for b2 in keys:
            s = b1 - b2
            if s not in out:
                out[s] = reps[b1] + _negate(reps[b2])
    return out


@dataclass(frozen=True)
class ExpansionAudit:
    checked: int
    max_depth: int
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


def audit_expansion(ex: Expansion, A: Iterable[tuple]) -> ExpansionAudit:
    """Re-evaluate every recorded combination with exact integers."""
    Aset = set(tuple(int(y) for y in tup) for tup in A)
    failures = []
    max_depth = 0
    limit = ex.depth_bound()
    for x, rep in ex.reps.items():
        max_depth = max(max_depth, len(rep))
        total = 0
        for s, ys in rep:
            if ys not in Aset:
                failures.append((x, "tuple not in A", ys))
                break
            p = 1
            for j, y in enumerate(ys):
                p *= _phi(y, ex.m, ex.d, ex.shifts[j])
            total += s * p
        else:
            if total != x:
                failures.append((x, "value mismatch", total))
            elif len(rep) > limit:
                failures.append((x, "too deep", len(rep)))
    return ExpansionAudit(len(ex.reps), max_depth, failures)
