from __future__ import annotations

from fractions import Fraction

import pytest
import sympy

from lgspin.poly import (InvertiblePolynomial, PolynomialError, chain, central_charge, decompose, is_calabi_yau, loop,
                         mirror, parse_polynomial, weight_system)


def test_parse_five_chain(five_chain):
    assert five_chain.matrix == ((2, 1, 0, 0, 0), (0, 3, 1, 0, 0), (0, 0, 5, 1, 0),
                                 (0, 0, 0, 10, 1), (0, 0, 0, 0, 11))


def test_parse_single_fermat():
    assert parse_polynomial("x^3").matrix == ((3,),)


def test_parse_d5(d5):
    assert d5.matrix == ((2, 1), (0, 4))


def test_parse_reorders_monomials():
    w = parse_polynomial("x2^4 + x1^2*x2")
    assert w.matrix == ((2, 1), (0, 4))


@pytest.mark.parametrize("text", [
    "", "x1^2*x2", "x1*x2 + x2^3", "x1^2*x2*x3 + x2^2 + x3^2", "x1^2 + x1^3",
    "x1^2*x2 + x2^2*x1 + x1^3", "2*x^2", "x1^2 + y^2", "x1^2 +", "x1^^2",
])
def test_parse_rejects(text):
    with pytest.raises(PolynomialError):
        parse_polynomial(text)


@pytest.mark.parametrize("matrix", [
    (), ((2, 1),), ((1,),), ((2, 2), (0, 3)), ((2, 1, 1), (0, 2, 0), (0, 0, 2)),
    ((2, 1, 0), (0, 2, 0), (0, 1, 2)),
])
def test_bad_matrices_rejected(matrix):
    with pytest.raises(PolynomialError):
        InvertiblePolynomial(matrix)


def test_weights(five_chain, d5):
    assert weight_system(five_chain) == ((4, 3, 2, 1, 1), 11)
    assert weight_system(d5) == ((3, 2), 8)
    assert weight_system(parse_polynomial("x^5")) == ((1,), 5)


def test_charges_solve_system(five_chain):
    # independent solve with sympy
    sol = sympy.Matrix(five_chain.matrix).solve(sympy.ones(5, 1))
    assert [Fraction(int(v.p), int(v.q)) for v in sol] == list(five_chain.charges)


def test_decompose():
    assert [str(c) for c in decompose(parse_polynomial("x1^2*x2 + x2^3*x3 + x3^5*x4 + x4^10*x5 + x5^11"))] \
        == ["Chain(2,3,5,10,10)"]
    assert [str(c) for c in decompose(parse_polynomial("x^3 + y^4"))] == ["Fermat(2)", "Fermat(3)"]
    assert [str(c) for c in decompose(parse_polynomial("x1^2*x2 + x2^2*x1"))] == ["Loop(2,2)"]


def test_loop_2_2_is_nondegenerate():
    # the only critical point of x^2 y + y^2 x is the origin
    x, y = sympy.symbols("x y")
    f = x**2 * y + y**2 * x
    sols = sympy.solve([sympy.diff(f, x), sympy.diff(f, y)], [x, y], dict=True)
    assert sols == [{x: 0, y: 0}]


def test_t_and_s_maps(five_chain, loop2323):
    assert five_chain.t == (1, 2, 3, 4, 4)
    assert five_chain.s == (None, 0, 1, 2, 3)
    assert loop2323.t == (1, 2, 3, 0)
    for w in (five_chain, loop2323):
        assert all(w.s[w.t[j]] == j for j in range(w.n) if w.t[j] != j)


def test_mirror(five_chain, d5):
    assert mirror(five_chain).matrix == tuple(zip(*five_chain.matrix))
    assert mirror(loop(2, 2)).matrix == loop(2, 2).matrix
    assert mirror(d5).matrix == ((2, 0), (1, 4))


def test_calabi_yau_and_central_charge(five_chain, d5):
    assert is_calabi_yau(five_chain)
    assert central_charge(five_chain) == 3
    assert not is_calabi_yau(parse_polynomial("x^3"))
    assert not is_calabi_yau(d5)


def test_chain_and_loop_builders(five_chain, loop2323):
    assert chain(2, 3, 5, 10, 10) == five_chain
    assert loop(2, 3, 2, 3) == loop2323
    assert chain(2, 3, 5, 10, 10).is_chain
    assert not loop2323.is_chain


def test_row_form_reproduces_matrix(five_chain, loop2323):
    for w in (five_chain, loop2323, parse_polynomial("x^3 + y^4")):
        for j in range(w.n):
            row = [0] * w.n
            row[j] += w.a[j]
            row[w.t[j]] += 1
            assert tuple(row) == w.matrix[j]


def test_excluded_monomials():
    assert chain(3, 1).has_excluded_monomials
    assert loop(2, 3).has_excluded_monomials
    assert not chain(2, 3, 5, 10, 10).has_excluded_monomials


def test_to_text_roundtrip(five_chain):
    assert parse_polynomial(five_chain.to_text()) == five_chain
