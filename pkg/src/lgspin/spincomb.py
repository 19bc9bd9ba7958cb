"""Genus-zero combinatorics of W-spin insertion tuples.

Tuples are sequences of ``BasisState`` (a symmetry plus its decoration).  For
a tuple of n insertions:

* ``omega_last`` gives the symmetry omega such that adding omega^{-1} as an
  extra point satisfies the selection rule;
* ``numerics`` evaluates ranks of R pi_* L_j for the n-pointed curve, the
  crossing counts r_j and the virtual degree;
* ``D_R`` evaluates the integers D^R_j of an n-tuple viewed as the first n
  points of an (n+1)-pointed curve (chains only).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .poly import InvertiblePolynomial
from .statespace import BasisState
from .symmetry import DiagonalSymmetry


class TheoremInapplicable(ValueError):
    """The hypotheses needed for the limit formula do not hold."""


class SelectionRuleError(ValueError):
    pass


def _require_chain(w: InvertiblePolynomial) -> None:
    if not w.is_chain:
        raise TheoremInapplicable("this operation needs a chain polynomial x1^a1*x2 + ... + xN^(aN+1)")


def gamma_R(w: InvertiblePolynomial, j: int, g: DiagonalSymmetry) -> Fraction:
    """Gamma^R_j: 1 when N-j is even and Gamma_j = 0, else Gamma_j (chains)."""
    if (w.n - 1 - j) % 2 == 0 and g[j] == 0:
        return Fraction(1)
    return g[j]


def gamma_R_decorated(e: BasisState, j: int) -> Fraction:
    """Same quantity read from the decoration: 1 when x_j is crossed."""
    return Fraction(1) if j in e.crossed else e.gamma[j]


def omega_last(w: InvertiblePolynomial, gammas: Sequence[DiagonalSymmetry]) -> DiagonalSymmetry:
    n = len(gammas)
    return DiagonalSymmetry(tuple(sum((g[j] for g in gammas), Fraction(0)) + q * (1 - n)
                                  for j, q in enumerate(w.charges)))


def omega_R(w: InvertiblePolynomial, j: int, omega: DiagonalSymmetry) -> Fraction:
    return gamma_R(w, j, omega)


def selection_ok(w: InvertiblePolynomial, gammas: Sequence[DiagonalSymmetry], genus: int = 0) -> bool:
    n = len(gammas)
    k = 2 * genus - 2 + n
    return all((sum((g[j] for g in gammas), Fraction(0)) - k * q).denominator == 1
               for j, q in enumerate(w.charges))


def D_R_sum(w: InvertiblePolynomial, gammas: Sequence[DiagonalSymmetry]) -> tuple[int, ...]:
    """D^R_j = q_j + sum_i (Gamma^R_j(i) - q_j) - omega^R_j, as a sum."""
    _require_chain(w)
    om = omega_last(w, gammas)
    out = []
    for j, q in enumerate(w.charges):
        x = q + sum((gamma_R(w, j, g) - q for g in gammas), Fraction(0)) - omega_R(w, j, om)
        if x.denominator != 1:
            raise AssertionError("D^R is not an integer")
        out.append(int(x))
    return tuple(out)


def D_R_floor(w: InvertiblePolynomial, gammas: Sequence[DiagonalSymmetry]) -> tuple[int, ...]:
    """The same integers written as a difference of floors."""
    _require_chain(w)
    om = omega_last(w, gammas)
    return tuple(
        math.floor(q + sum((gamma_R(w, j, g) - q for g in gammas), Fraction(0)))
        - math.floor(omega_R(w, j, om))
        for j, q in enumerate(w.charges))


def D_R(w: InvertiblePolynomial, gammas: Sequence[DiagonalSymmetry]) -> tuple[int, ...]:
    a, b = D_R_sum(w, gammas), D_R_floor(w, gammas)
    if a != b:
        raise AssertionError(f"the two forms of D^R disagree: {a} vs {b}")
    return a


def minus_ch0(w: InvertiblePolynomial, gammas: Sequence[DiagonalSymmetry]) -> tuple[int, ...]:
    """-Ch_0(R pi_* L_j) on an n-pointed genus-zero curve."""
    n = len(gammas)
    out = []
    for j, q in enumerate(w.charges):
        x = sum((g[j] for g in gammas), Fraction(0)) - q * (n - 2) - 1
        if x.denominator != 1:
            raise SelectionRuleError("selection rule violated")
        out.append(int(x))
    return tuple(out)


@dataclass(frozen=True)
class SpinNumerics:
    """Numbers attached to an n-point insertion tuple (all indices 0-based)."""

    gamma_R: tuple[tuple[Fraction, ...], ...]  # [i][j]
    minus_ch0: tuple[int, ...]                 # -Ch_0(R pi_* L_j)
    r: tuple[int, ...]                         # number of points where x_j is crossed
    minus_ch0_R: tuple[int, ...]               # -Ch_0(R pi_* L^R_j)
    degvir: int
    omega: DiagonalSymmetry | None = None      # from the first n-1 points (chains)
    omega_R: tuple[Fraction, ...] | None = None
    D_R: tuple[int, ...] | None = None

    def to_json(self) -> dict:
        out = {"minus_ch0": list(self.minus_ch0), "r": list(self.r),
               "minus_ch0_R": list(self.minus_ch0_R), "degvir": self.degvir}
        if self.D_R is not None:
            out["DR"] = list(self.D_R)
            out["omega"] = [str(p) for p in self.omega.phases]
            out["omegaR"] = [str(p) for p in self.omega_R]
        return out


def _minus_ch0_R(w: InvertiblePolynomial, states: Sequence[BasisState]) -> tuple[tuple[int, ...], ...]:
    gammas = [e.gamma for e in states]
    if not selection_ok(w, gammas):
        raise SelectionRuleError("selection rule violated: product of the insertions "
                                 f"is not j^{len(gammas) - 2}")
    m0 = minus_ch0(w, gammas)
    r = tuple(sum(1 for e in states if j in e.crossed) for j in range(w.n))
    return m0, r, tuple(a + b for a, b in zip(m0, r))


def numerics(w: InvertiblePolynomial, states: Sequence[BasisState],
             with_D: bool = True) -> SpinNumerics:
    m0, r, m0r = _minus_ch0_R(w, states)
    grs = tuple(tuple(gamma_R_decorated(e, j) for j in range(w.n)) for e in states)
    om = omr = dr = None
    if with_D and w.is_chain and states:
        gammas = [e.gamma for e in states]
        first = gammas[:-1]
        om = omega_last(w, first)
        omr = tuple(omega_R(w, j, om) for j in range(w.n))
        dr = D_R(w, first)
    return SpinNumerics(grs, m0, r, m0r, sum(m0r), om, omr, dr)


def ch0_identity_holds(w: InvertiblePolynomial, states: Sequence[BasisState]) -> bool:
    """-Ch_0(R pi_* L^R_j) = D^R_j + (-1)^{N-j} [omega_j = 1] for every j."""
    num = numerics(w, states)
    for j in range(w.n):
        delta = 1 if num.omega[j] == 0 else 0
        if num.minus_ch0_R[j] != num.D_R[j] + (-1) ** (w.n - 1 - j) * delta:
            return False
    return True


def concave(w: InvertiblePolynomial, j: int, states: Sequence[BasisState],
            exact_three_point: bool = True, _m0r: Sequence[int] | None = None) -> bool:
    """Sufficient concavity test: w_j | d and every broad point crossed for x_j.

    With three points the curve is a smooth P^1, where H^0 of L^R_j vanishes
    exactly when its Euler characteristic is non-positive; that test is
    added when ``exact_three_point`` is set.
    """
    weights, d = w.weight_system
    if d % weights[j] == 0 and all(j in e.crossed for e in states if e.gamma[j] == 0):
        return True
    if exact_three_point and len(states) == 3:
        m0r = _m0r if _m0r is not None else _minus_ch0_R(w, states)[2]
        return m0r[j] >= 0
    return False


def lambda_assignment(w: InvertiblePolynomial, states: Sequence[BasisState],
                      exact_three_point: bool = True) -> tuple[int, ...]:
    """Exponents k_j with lambda_j = lambda^{k_j}.

    Arrows leaving concave variables are erased; each remaining line starts
    at exponent 1 and k_{t(j)} = -a_j k_j along non-concave j.
    """
    m0r = _minus_ch0_R(w, states)[2] if exact_three_point and len(states) == 3 else None
    conc = [concave(w, j, states, exact_three_point, m0r) for j in range(w.n)]
    for comp in w.decomposition:
        if not any(conc[v] for v in comp.variables):
            raise TheoremInapplicable(
                f"component {comp} has no concave variable for this decoration")
    k: list[int | None] = [None] * w.n

    def solve(v: int) -> int:
        if k[v] is None:
            p = w.s[v]
            k[v] = 1 if p is None or conc[p] else -w.a[p] * solve(p)
        return k[v]

    return tuple(solve(v) for v in range(w.n))


def chain_lambda_exponents(w: InvertiblePolynomial) -> tuple[int, ...]:
    """k_j = (-a_1)...(-a_{j-1}): the assignment when only x_N is treated as concave."""
    _require_chain(w)
    out, k = [], 1
    for j in range(w.n):
        out.append(k)
        k *= -w.a[j]
    return tuple(out)

