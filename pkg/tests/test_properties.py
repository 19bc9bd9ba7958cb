"""Randomized invariants, 1000 examples per suite."""

from __future__ import annotations

import math
from fractions import Fraction

from hypothesis import assume, event, given, settings
from hypothesis import strategies as st

from lgspin.charclass import (bernoulli, correlator3, correlator3_closed_form, eps_expansion,
                              gamma_numbers, s_l)
from lgspin.givental import M_product, zpower_formula
from lgspin.poly import FIVE_CHAIN, chain, loop, parse_polynomial
from lgspin.series import GradedPoly
from lgspin.spincomb import (D_R_floor, D_R_sum, ch0_identity_holds, lambda_assignment, numerics,
                             omega_last)
from lgspin.statespace import BasisState, degree, state
from lgspin.symmetry import aut_group, grading_element

N = 1000
W5 = parse_polynomial(FIVE_CHAIN)

chains = st.builds(lambda body, tail: chain(*body, tail),
                   st.lists(st.integers(2, 4), min_size=0, max_size=3), st.integers(1, 4))
loops = st.lists(st.integers(2, 4), min_size=2, max_size=3).map(lambda a: loop(*a))
fermat_sums = st.lists(st.integers(1, 5), min_size=1, max_size=3).map(
    lambda a: parse_polynomial(" + ".join(f"x{i + 1}^{e + 1}" for i, e in enumerate(a))))
polys = st.one_of(chains, loops, fermat_sums)


def _elem(w, i):
    G = aut_group(w).elements()
    return G[i % len(G)]


def _tuple(w, idx):
    return [_elem(w, i) for i in idx]


indices = st.lists(st.integers(0, 10 ** 6), min_size=1, max_size=5)


@settings(max_examples=N)
@given(polys, st.integers(0, 10 ** 6))
def test_degree_duality(w, i):
    g = _elem(w, i)
    e = BasisState(g, frozenset(), True)
    f = BasisState(g.inverse(), frozenset(), True)
    assert degree(w, e) + degree(w, f) == 2 * w.central_charge


@settings(max_examples=N)
@given(st.one_of(chains, st.just(W5)), indices)
def test_D_R_two_forms_agree(w, idx):
    gs = _tuple(w, idx)
    assert D_R_sum(w, gs) == D_R_floor(w, gs)


@settings(max_examples=N)
@given(st.one_of(chains, st.just(W5)), indices)
def test_ch0_identity(w, idx):
    gs = _tuple(w, idx)
    last = omega_last(w, gs).inverse()
    states = [state(w, g) for g in gs + [last]]
    assert ch0_identity_holds(w, states)


@settings(max_examples=N)
@given(st.one_of(chains, st.just(W5)), indices)
def test_degco(w, idx):
    D = D_R_sum(w, _tuple(w, idx))
    for j in range(w.n - 1):
        if D[j] <= -1:
            assert D[j + 1] >= 1


@settings(max_examples=N)
@given(st.lists(st.tuples(st.integers(-2, 3), st.sampled_from([1, -2, 3, 6, -30])), min_size=1, max_size=2),
       st.integers(0, 2), st.integers(0, 3))
def test_eps_valuation_bound(data, k_max, mask):
    exps = [e for e, _ in data]
    ks = [k for _, k in data]
    chern = {}
    for j in range(len(data)):
        for l in range(1, k_max + 1):
            if mask >> (l - 1) & 1 or l == 1:
                chern[(j, l)] = GradedPoly.symbol(f"c{j}{l}", l, k_max)
    exp = eps_expansion(exps, ks, chern, k_max, eps_prec=sum(abs(e) for e in exps) + 2 * k_max + 3)
    for k in range(k_max + 1):
        assert exp.valuation(k) >= exp.degvir - k


@settings(max_examples=N)
@given(st.one_of(chains, st.just(W5)), st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_correlator3_vanishes_iff_degvir_positive(w, i1, i2):
    g1, g2 = _elem(w, i1), _elem(w, i2)
    g3 = grading_element(w) * (g1 * g2).inverse()
    trio = [state(w, g) for g in (g1, g2, g3)]
    assume(not any(e.is_zero for e in trio))
    num = numerics(w, trio, with_D=False)
    assume(num.degvir >= 0)
    event(f"degvir > 0: {num.degvir > 0}")
    value = correlator3(w, *trio)
    assert (value == 0) == (num.degvir > 0)
    assert value == correlator3_closed_form(num, lambda_assignment(w, trio))


@settings(max_examples=N)
@given(st.one_of(chains, st.just(W5)), indices)
def test_zpower_bookkeeping(w, idx):
    gs = _tuple(w, idx)
    states = [state(w, g) for g in gs]
    assume(not any(e.is_zero for e in states))
    m = M_product(w, gs)
    assume(not state(w, m.omega).is_zero)
    assert 1 - len(gs) + m.z_power == zpower_formula(w, states)


# truncated power series in y, as coefficient lists

L = 10


def _mul(a, b):
    return [sum((a[i] * b[n - i] for i in range(n + 1)), Fraction(0)) for n in range(L + 1)]


def _exp(a):
    # f = exp(a) with a[0] = 0: n f_n = sum k a_k f_{n-k}
    f = [Fraction(1)] + [Fraction(0)] * L
    for n in range(1, L + 1):
        f[n] = sum((k * a[k] * f[n - k] for k in range(1, n + 1)), Fraction(0)) / n
    return f


def _egf(c):
    return [Fraction(0)] + [c(l) / math.factorial(l) for l in range(1, L + 1)]


EXP_Y = [Fraction(1, math.factorial(n)) for n in range(L + 1)]
EXP_MY = [Fraction((-1) ** n, math.factorial(n)) for n in range(L + 1)]
# y / (1 - e^{-y}) as the inverse of (1 - e^{-y}) / y
_q = [Fraction((-1) ** n, math.factorial(n + 1)) for n in range(L + 1)]
TODD = [Fraction(1)] + [Fraction(0)] * L
for _n in range(1, L + 1):
    TODD[_n] = -sum((_q[k] * TODD[_n - k] for k in range(1, _n + 1)), Fraction(0))

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=30).filter(lambda x: x != 1)


@settings(max_examples=N)
@given(st.one_of(st.sampled_from([Fraction(1, 3), Fraction(-1), Fraction(2)]), rationals))
def test_formaldev_identities(x):
    X = x / (1 - x)
    partial = _egf(lambda l: sum((math.factorial(k - 1) * X ** k * gamma_numbers(l, k)
                                  for k in range(1, l + 1)), Fraction(0)))
    # 1 - x e^y = (1 - x) exp(-sum_l sum_k (k-1)! X^k gamma(l,k) y^l / l!)
    lhs = [(1 if n == 0 else 0) - x * EXP_Y[n] for n in range(L + 1)]
    rhs = [(1 - x) * c for c in _exp([-c for c in partial])]
    assert lhs == rhs
    # y / (1 - e^{-y}) = exp(-sum B_l / l y^l / l!)
    assert TODD == _exp(_egf(lambda l: -bernoulli(l) / l))
    # together: exp(sum s_l y^l / l!) (1 - x e^{-y}) y / (1 - e^{-y}) = 1 - x
    S = _exp(_egf(lambda l: s_l(x, l)))
    one_minus = [(1 if n == 0 else 0) - x * EXP_MY[n] for n in range(L + 1)]
    assert _mul(_mul(S, one_minus), TODD) == [1 - x] + [Fraction(0)] * L
