from __future__ import annotations

from fractions import Fraction

import pytest

from lgspin.poly import chain, loop, parse_polynomial
from lgspin.statespace import (StateError, StateVector, basis, chain_dual, decorations, degree, dual,
                               gram_matrix, is_admissible, pairing, parse_insertion, state,
                               vector_pairing)
from lgspin.symmetry import DiagonalSymmetry, aut_group, grading_element


def test_broad_sets(five_chain, d5):
    jj = grading_element(five_chain)
    assert (jj ** 2).broad_set() == frozenset()
    assert DiagonalSymmetry.identity(5).broad_set() == frozenset(range(5))
    assert DiagonalSymmetry.identity(2).broad_set() == frozenset({0, 1})


def test_chain_has_unique_decoration(five_chain):
    for g in aut_group(five_chain).elements()[::37]:
        assert len(decorations(five_chain, g)) == 1


def test_d5_identity_decoration(d5):
    decs = decorations(d5, DiagonalSymmetry.identity(2))
    assert [(sorted(d.crossed), d.balanced) for d in decs] == [([1], True)]
    # exhaustive check of the four subsets
    broad = frozenset({0, 1})
    ok = [set(c) for c in ([], [0], [1], [0, 1]) if is_admissible(d5, broad, frozenset(c))]
    assert ok == [{1}]


def test_five_chain_identity_is_zero(five_chain):
    e = state(five_chain, DiagonalSymmetry.identity(5))
    assert e.crossed == frozenset({0, 2, 4})
    assert e.is_zero


def test_loop_identity_has_two_states(loop2323):
    decs = decorations(loop2323, DiagonalSymmetry.identity(4))
    assert sorted(sorted(d.crossed) for d in decs) == [[0, 2], [1, 3]]
    assert all(d.balanced for d in decs)
    with pytest.raises(StateError):
        state(loop2323, DiagonalSymmetry.identity(4))


def test_degree(five_chain):
    jj = grading_element(five_chain)
    assert degree(five_chain, state(five_chain, jj ** 2)) == 2
    assert degree(five_chain, state(five_chain, jj)) == 0


def test_pairing(five_chain, d5):
    jj = grading_element(five_chain)
    e, f = state(five_chain, jj ** 3), state(five_chain, jj ** 8)
    assert pairing(five_chain, e, f) == 1
    assert pairing(five_chain, e, e) == 0
    one = state(d5, DiagonalSymmetry.identity(2))
    assert pairing(d5, one, one) == -2


def test_dual(five_chain, d5):
    one = state(d5, DiagonalSymmetry.identity(2))
    v = dual(d5, one)
    assert v == StateVector({one: Fraction(-1, 2)})
    assert vector_pairing(d5, v, StateVector({one: Fraction(1)})) == 1
    jj = grading_element(five_chain)
    e = state(five_chain, jj ** 3)
    assert dual(five_chain, e) == StateVector({state(five_chain, jj ** 8): Fraction(1)})


def test_dual_normalization_everywhere(five_chain, d5, loop2323):
    for w in (d5, loop2323, chain(2, 3, 2)):
        for e in basis(w):
            assert vector_pairing(w, dual(w, e), StateVector({e: Fraction(1)})) == 1
            for f in basis(w):
                if f != e:
                    assert vector_pairing(w, dual(w, e), StateVector({f: Fraction(1)})) == 0


def test_chain_dual_matches_general(five_chain):
    for e in basis(five_chain)[::11]:
        assert chain_dual(five_chain, e) == dual(five_chain, e)


def test_gram_matrix_symmetric(loop2323):
    b = basis(loop2323)
    g = gram_matrix(loop2323, b)
    assert all(g[i][j] == g[j][i] for i in range(len(b)) for j in range(len(b)))


def test_parse_insertion(five_chain, loop2323):
    jj = grading_element(five_chain)
    assert parse_insertion(five_chain, "j^3").gamma == jj ** 3
    assert parse_insertion(five_chain, "j").gamma == jj
    assert parse_insertion(five_chain, "(4/11,3/11,2/11,1/11,1/11)").gamma == jj
    e = parse_insertion(loop2323, "1[2,4]")
    assert e.crossed == frozenset({1, 3})
    for bad in ("k^2", "(1/2,1/2)", "(1/2,1/2,1/2,1/2,1/2)", "j^x"):
        with pytest.raises(StateError):
            parse_insertion(five_chain, bad)


def test_basis_excludes_zero_states(five_chain):
    b = basis(five_chain)
    assert all(not e.is_zero for e in b)
    assert len(b) == sum(1 for g in aut_group(five_chain) if not state(five_chain, g).is_zero)
