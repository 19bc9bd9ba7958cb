from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy

from lgspin.givental import (M_product, SeriesShapeError, ZSeries, big_I, big_I_terms,
                             extract_correlators, mirror_map_and_J, pf_check, perturb,
                             restrict_big_I, small_I, small_J_relation, split_I, twisted_factor_at,
                             twisted_I_oracle, zpower_formula)
from lgspin.poly import loop
from lgspin.series import GradedPoly
from lgspin.spincomb import D_R, TheoremInapplicable
from lgspin.statespace import degree, state
from lgspin.symmetry import aut_group, grading_element

from _sampling import pole_tuples

z = sympy.symbols("z")


def _params(w, ks):
    jj = grading_element(w)
    return {f"j^{k}": state(w, jj ** k) for k in ks}


def test_M_product_matches_oracle(five_chain):
    rng = random.Random(7)
    G = aut_group(five_chain).elements()
    for _ in range(15):
        gs = [rng.choice(G) for _ in range(rng.randint(0, 3))]
        assert twisted_I_oracle(five_chain, gs).coeff == M_product(five_chain, gs).coeff


def test_paired_pole_case(five_chain):
    # omega^R_j = 1 with D^R_j <= -1 pairs with the next variable and gives -a_j
    for gs in pole_tuples(five_chain, random.Random(3), 8):
        assert twisted_I_oracle(five_chain, gs).coeff == M_product(five_chain, gs).coeff


@pytest.mark.parametrize("c,lam", [(Fraction(1, 3), Fraction(1, 2)), (Fraction(-2), Fraction(3)),
                                   (Fraction(5, 4), Fraction(-1, 5))])
def test_twisted_factor_at_fixed_lambda(c, lam):
    ser = twisted_factor_at(c, lam, 8)
    cs, ls = sympy.Rational(str(c)), sympy.Rational(str(lam))
    ref = sympy.series(cs * z + (1 - ls) * cs * z / (sympy.exp(cs * z) - 1), z, 0, 8).removeO()
    for k in range(8):
        assert ser.coefficient(k) == Fraction(str(ref.coeff(z, k)))


def test_small_I_first_terms(five_chain):
    I = small_I(five_chain, 5)
    jj = grading_element(five_chain)
    assert I.coefficient(1, state(five_chain, jj)).coefficient((("t", 1),)) == -1
    two = I.coefficient(0, state(five_chain, jj ** 2))
    assert two.coefficient((("t", 2),)) == -1
    # the z-power at k = 2 is the one predicted by the degree count
    assert zpower_formula(five_chain, [state(five_chain, jj ** 2)]) == 0


def test_small_I_broad_coefficients_vanish(five_chain):
    I = small_I(five_chain, 30)
    for _, s, _ in I.items():
        assert not s.broad


def test_pf_check(five_chain):
    I = small_I(five_chain, 25)
    assert pf_check(five_chain, I, 25)
    assert pf_check(five_chain, ZSeries(), 25)
    jj = grading_element(five_chain)
    bad = perturb(I, 0, state(five_chain, jj ** 3), 3)
    assert not pf_check(five_chain, bad, 25)


def test_restriction_identity(five_chain):
    params = _params(five_chain, [2])
    big = big_I(five_chain, params, 12)
    assert restrict_big_I(five_chain, big, "j^2", 13) == small_I(five_chain, 13)


def test_literal_b_bounds_break_restriction(five_chain):
    params = _params(five_chain, [2])
    big = big_I(five_chain, params, 12)
    lit = small_I(five_chain, 13, literal_bounds=True)
    assert restrict_big_I(five_chain, big, "j^2", 13) != lit
    # ... although the literal series still satisfies the differential equation
    assert pf_check(five_chain, lit, 13)


def test_big_I_unit_term(five_chain):
    big = big_I(five_chain, _params(five_chain, [2, 3]), 2)
    jj = state(five_chain, grading_element(five_chain))
    assert big.coefficient(1, jj).constant_term() == -1


def test_big_I_z_powers(five_chain):
    ps = _params(five_chain, [2, 3, 4, 6])
    for term in big_I_terms(five_chain, ps, 4):
        states = [ps[n] for n in term.multiset]
        assert term.z_power == zpower_formula(five_chain, states)


def test_split_shape(five_chain):
    I = small_I(five_chain, 30)
    pcs = split_I(five_chain, I)
    w0 = pcs.omega0
    assert w0.coefficient((("t", 1),)) == 1
    assert all(e == 1 or e >= 12 for m in w0.terms for _, e in m)
    assert all(degree(five_chain, s) == 2 for s in pcs.omegas[0].terms)
    assert len(pcs.omegas) <= five_chain.n - 2


def test_mirror_map_leading_sign(five_chain):
    # tau = -t e_{j^2} + O(t^2) with I(t) = t I^big(-t e_{j^2})
    J = mirror_map_and_J(five_chain, small_I(five_chain, 12))
    jj = grading_element(five_chain)
    lead = J.tau.coefficient(state(five_chain, jj ** 2)).coefficient((("t", 1),))
    assert lead == -1


def test_extracted_correlators(five_chain):
    params = _params(five_chain, [2, 3, 4, 6])
    e6 = params["j^6"]
    vals = extract_correlators(five_chain, params,
                               [(["j^2"] * 4, e6), (["j^2", "j^2", "j^3"], e6), (["j^2", "j^4"], e6),
                                (["j^3", "j^3"], e6)], n_max=6)
    assert vals == [Fraction(-2, 121), Fraction(-4, 11), Fraction(1), Fraction(-2)]


def test_relation_from_small_J(five_chain):
    e6 = state(five_chain, grading_element(five_chain) ** 6)
    rel, value = small_J_relation(five_chain, e6, 4)
    scale = 1 / rel[("j^3", "j^3")] / 4
    assert {k: v * scale for k, v in rel.items()} == {
        ("j^2", "j^2", "j^2", "j^2"): Fraction(121, 12), ("j^2", "j^2", "j^3"): Fraction(-11, 2),
        ("j^2", "j^4"): Fraction(5, 3), ("j^3", "j^3"): Fraction(1, 4)}
    assert value * scale == 3


def test_needs_chain(loop2323):
    with pytest.raises(TheoremInapplicable):
        small_I(loop2323, 3)


def test_excluded_monomials_rejected():
    from lgspin.poly import chain
    w = chain(3, 1)
    with pytest.raises(TheoremInapplicable, match="x\\^a y"):
        extract_correlators(w, {}, [], 2)


def test_mirror_map_outside_span(five_chain):
    params = _params(five_chain, [2])
    with pytest.raises(SeriesShapeError):
        extract_correlators(five_chain, params, [(["j^2"] * 4, params["j^2"])], 6)
