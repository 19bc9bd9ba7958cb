"""Givental-side series for chain polynomials: I-functions, mirror map, J-function.

Series in z are stored as ``ZSeries``: a map from the exponent of z to a
``StateVector`` whose coefficients are ``GradedPoly`` values in the formal
parameters (one symbol per parameter state, or the single symbol ``t``).

The I-function is written as I(h, -z); ``split_I`` re-expands it in powers
of y = -z, which is the variable the J-function is naturally written in.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Any, Iterable, Mapping, Sequence

from .charclass import bernoulli, one_minus_lambda_power
from .poly import InvertiblePolynomial
from .series import GradedPoly, LaurentSeries, is_zero
from .spincomb import D_R, TheoremInapplicable, chain_lambda_exponents, omega_R, omega_last
from .statespace import BasisState, StateVector, degree, state, vector_pairing, dual
from .symmetry import DiagonalSymmetry, grading_element


class SeriesShapeError(ValueError):
    pass


def _require_chain(w: InvertiblePolynomial) -> None:
    if not w.is_chain:
        raise TheoremInapplicable("I-functions are implemented for chain polynomials only")


# closed-form M_j factors

@dataclass(frozen=True)
class MProduct:
    coeff: Fraction
    z_power: int
    D: tuple[int, ...]
    omega: DiagonalSymmetry


def M_product(w: InvertiblePolynomial, gammas: Sequence[DiagonalSymmetry]) -> MProduct:
    """M_1 ... M_N for a tuple, as coeff * z^{z_power}."""
    _require_chain(w)
    D = D_R(w, gammas)
    om = omega_last(w, gammas)
    omr = [omega_R(w, j, om) for j in range(w.n)]
    coeff = Fraction(1)
    skip_first: set[int] = set()
    for j in range(w.n):
        d, o = D[j], omr[j]
        if d >= 1:
            ms = range(1 if j in skip_first else 0, d)
            for m in ms:
                coeff *= o + m
        elif d <= -1:
            for m in range(1, -d + 1):
                if o == 1 and m == 1:
                    # 1/((omega_j - 1) z) pairs with the (omega_{j+1} + 0) z factor of x_{j+1}
                    if j + 1 >= w.n or omr[j + 1] != 0 or D[j + 1] < 1:
                        raise ArithmeticError("unpaired zero factor in the I-function")
                    coeff *= -w.a[j]
                    skip_first.add(j + 1)
                else:
                    coeff /= o - m
    return MProduct(coeff, sum(D), D, om)


# the lambda-oracle: twisted factors exp(-s(c z, lambda_j)) as eps-series of z-series

def _g_series(c: Fraction, zprec: int) -> LaurentSeries:
    """g(cz) = cz / (e^{cz} - 1) = sum B_n c^n z^n / n!."""
    return LaurentSeries({n: bernoulli(n) * c ** n / math.factorial(n) for n in range(zprec)}, zprec)


def _twisted_factor(c: Fraction, k: int, eps_prec: int, zprec: int) -> LaurentSeries:
    """exp(-s(cz, lambda^k)) = cz + (1 - lambda^k) g(cz), or 1 - lambda^k when c = 0."""
    u = one_minus_lambda_power(k, eps_prec)
    if c == 0:
        return u
    g = _g_series(c, zprec)
    coeffs = {i: g * ui for i, ui in u.coeffs.items()}
    lead = LaurentSeries({1: c})
    coeffs[0] = coeffs[0] + lead if 0 in coeffs else lead
    return LaurentSeries(coeffs, u.prec)


def twisted_factor_at(c: Fraction, lam: Fraction, zprec: int) -> LaurentSeries:
    """The same factor at a fixed rational lambda != 1, as a z-series."""
    if lam == 1:
        raise ValueError("lambda = 1 is the limit, not a value")
    u = 1 - Fraction(lam)
    if c == 0:
        return LaurentSeries({0: u})
    return LaurentSeries({1: c}) + _g_series(c, zprec) * u


def twisted_I_oracle(w: InvertiblePolynomial, gammas: Sequence[DiagonalSymmetry],
                     eps_prec: int | None = None, zprec: int | None = None) -> MProduct:
    """lambda -> 1 limit of the twisted coefficient, by exact eps-expansion.

    lambda_j = lambda^{(-a_1)...(-a_{j-1})} and lambda = (1+eps)^{-1}; the
    eps^0 coefficient must be a single monomial in z.
    """
    _require_chain(w)
    D = D_R(w, gammas)
    om = omega_last(w, gammas)
    omr = [omega_R(w, j, om) for j in range(w.n)]
    ks = chain_lambda_exponents(w)
    nfac = sum(abs(d) for d in D)
    ep = eps_prec or 4 + 2 * nfac
    zp = zprec or abs(sum(D)) + 2 * nfac + 6
    for _ in range(6):
        total = LaurentSeries({0: LaurentSeries({0: Fraction(1)})})
        for j in range(w.n):
            if D[j] >= 0:
                for m in range(D[j]):
                    total = total * _twisted_factor(omr[j] + m, ks[j], ep, zp)
            else:
                for m in range(1, -D[j] + 1):
                    total = total * _twisted_factor(omr[j] - m, ks[j], ep, zp).inverse()
        if total.valuation() < 0:
            raise ArithmeticError("the twisted coefficient diverges as lambda -> 1")
        if total.prec > 0:
            c0 = total.coefficient(0)
            if not isinstance(c0, LaurentSeries):
                c0 = LaurentSeries({0: Fraction(c0)})
            if c0.prec > sum(D):
                c0 = c0.truncate(sum(D) + 1)
                if any(k != sum(D) for k in c0.coeffs):
                    raise ArithmeticError("eps^0 coefficient is not a monomial in z")
                return MProduct(Fraction(c0.coeffs.get(sum(D), 0)), sum(D), D, om)
        ep, zp = 2 * ep, 2 * zp
    raise ArithmeticError("precision overflow in the twisted oracle")


# z-series of state vectors

class ZSeries:
    """Map z-exponent -> StateVector (coefficients are GradedPoly or Fractions)."""

    def __init__(self, terms: Mapping[int, StateVector] | None = None):
        self.terms: dict[int, StateVector] = {k: v for k, v in (terms or {}).items() if len(v)}

    def add_term(self, zexp: int, s: BasisState, c: Any) -> None:
        v = StateVector({s: c})
        if not len(v):
            return
        cur = self.terms.get(zexp)
        new = v if cur is None else cur + v
        if len(new):
            self.terms[zexp] = new
        else:
            self.terms.pop(zexp, None)

    def z_exponents(self) -> list[int]:
        return sorted(self.terms, reverse=True)

    def coefficient(self, zexp: int, s: BasisState) -> Any:
        v = self.terms.get(zexp)
        return v.coefficient(s) if v is not None else Fraction(0)

    def items(self):
        for z in self.z_exponents():
            for s, c in self.terms[z].items():
                yield z, s, c

    def map_coefficients(self, f) -> "ZSeries":
        return ZSeries({z: v.map_coefficients(f) for z, v in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ZSeries):
            return NotImplemented
        zs = set(self.terms) | set(other.terms)
        empty = StateVector()
        return all(self.terms.get(z, empty) == other.terms.get(z, empty) for z in zs)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return " + ".join(f"z^{z}*[{self.terms[z]}]" for z in self.z_exponents()) or "0"


@dataclass(frozen=True)
class BigITerm:
    multiset: tuple[str, ...]
    z_power: int
    coeff: Fraction
    target: BasisState


def _params(w: InvertiblePolynomial, params) -> list[tuple[str, BasisState]]:
    if isinstance(params, Mapping):
        return list(params.items())
    out = []
    for i, p in enumerate(params):
        if isinstance(p, tuple):
            out.append(p)
        else:
            out.append((f"h{i + 1}", p))
    return out


def big_I_terms(w: InvertiblePolynomial, params, n_max: int) -> list[BigITerm]:
    """Non-zero terms of I(h, -z), one per multiset of parameters."""
    _require_chain(w)
    ps = _params(w, params)
    names = [n for n, _ in ps]
    states = dict(ps)
    out = []
    for n in range(n_max + 1):
        for combo in combinations_with_replacement(names, n):
            gammas = [states[c].gamma for c in combo]
            mp = M_product(w, gammas)
            if mp.coeff == 0:
                continue
            target = state(w, mp.omega)
            if target.is_zero:
                continue
            mult = math.prod(math.factorial(v) for v in Counter(combo).values())
            coeff = (-1) ** (n + 1) * mp.coeff / mult
            out.append(BigITerm(combo, 1 - n + mp.z_power, coeff, target))
    return out


def big_I(w: InvertiblePolynomial, params, n_max: int) -> ZSeries:
    """I(h, -z) summed over all tuples of at most n_max parameter states.

    ``params`` is a mapping name -> BasisState (or a list of states, named
    h1, h2, ...).  Coefficients are polynomials in the names, of degree 1
    each, truncated at n_max.
    """
    ps = _params(w, params)
    degrees = {n: 1 for n, _ in ps}
    out = ZSeries()
    for term in big_I_terms(w, ps, n_max):
        mono = tuple(sorted(Counter(term.multiset).items()))
        out.add_term(term.z_power, term.target, GradedPoly({mono: term.coeff}, degrees, n_max))
    return out


def zpower_formula(w: InvertiblePolynomial, states: Sequence[BasisState]) -> Fraction:
    """1 - n - N + 2 sum q + (1/2) sum deg(e_i) + (1/2) deg(e_{omega^{-1}})."""
    n = len(states)
    om = omega_last(w, [e.gamma for e in states])
    last = state(w, om.inverse())
    return (1 - n - w.n + 2 * sum(w.charges, Fraction(0))
            + Fraction(1, 2) * sum((degree(w, e) for e in states), Fraction(0))
            + Fraction(1, 2) * degree(w, last))


def _small_b_values(q: Fraction, k: int, delta: int, literal: bool) -> list[Fraction]:
    top = q * k
    frac = top - math.floor(top)
    lower = Fraction(delta) if literal or frac == 0 else max(Fraction(delta), frac - 1)
    vals = []
    b = top - 1
    while b > lower:
        vals.append(b)
        b -= 1
    return vals


def small_I(w: InvertiblePolynomial, t_order: int, literal_bounds: bool = False) -> ZSeries:
    """I(t, -z) = -z sum_k t^k prod_j prod_b (b z) / prod_{0<b<k} (b z) e_{j^k}.

    For each j, b runs over numbers congruent to q_j k mod 1 with
    delta_j < b < q_j k, where delta_j = -1 when N-j is odd and 0 otherwise.
    When q_j k is not an integer we also require b > 0, matching the product
    of M_j factors obtained by restricting the big I-function; set
    ``literal_bounds`` to drop that requirement.
    """
    _require_chain(w)
    jj = grading_element(w)
    out = ZSeries()
    deg = {"t": 1}
    for k in range(1, t_order + 1):
        coeff = Fraction(1)
        zcount = 0
        for j, q in enumerate(w.charges):
            delta = -1 if (w.n - 1 - j) % 2 == 1 else 0
            for b in _small_b_values(q, k, delta, literal_bounds):
                coeff *= b
                zcount += 1
        if coeff == 0:
            continue
        target = state(w, jj ** k)
        if target.is_zero:
            continue
        coeff /= math.factorial(k - 1)
        zexp = 1 + zcount - (k - 1)
        out.add_term(zexp, target, GradedPoly({(("t", k),): -coeff}, deg, t_order))
    return out


def restrict_big_I(w: InvertiblePolynomial, big: ZSeries, name: str, t_order: int) -> ZSeries:
    """t * I^big(-t e) for a one-parameter big I-function in the symbol ``name``."""
    t = GradedPoly.symbol("t", 1, t_order)
    sub = {name: -t}

    def f(c):
        v = c.substitute(sub) if isinstance(c, GradedPoly) else c
        return (v * t).truncate(t_order) if isinstance(v, GradedPoly) else t * v
    return big.map_coefficients(f)


# Picard-Fuchs operator

def pf_check(w: InvertiblePolynomial, series: ZSeries, order_T: int, var: str = "t") -> bool:
    """Apply t^d prod_j prod_{c<w_j} (q_j D + c) - prod_{c=1}^d (D - c), D = t d/dt,
    to every (z, state) component and test vanishing through t^order_T."""
    weights, d = w.weight_system
    qs = w.charges

    def P(m: int) -> Fraction:
        out = Fraction(1)
        for wj, q in zip(weights, qs):
            for c in range(wj):
                out *= q * m + c
        return out

    def Q(k: int) -> Fraction:
        return Fraction(math.prod(k - c for c in range(1, d + 1)))

    for z, s, c in series.items():
        coeffs: dict[int, Fraction] = {}
        if isinstance(c, GradedPoly):
            for m, v in c.terms.items():
                if any(sym != var for sym, _ in m):
                    raise SeriesShapeError(f"series depends on symbols other than {var}")
                coeffs[sum(e for _, e in m)] = v
        else:
            coeffs[0] = c
        for k in range(order_T + 1):
            lhs = P(k - d) * coeffs.get(k - d, 0) - Q(k) * coeffs.get(k, 0)
            if lhs != 0:
                return False
    return True


def perturb(series: ZSeries, zexp: int, s: BasisState, power: int, delta: Fraction = Fraction(1),
            var: str = "t") -> ZSeries:
    """Copy of a one-variable series with delta added to one t^power coefficient."""
    out = ZSeries(dict(series.terms))
    out.add_term(zexp, s, GradedPoly({((var, power),): delta}, {var: 1}))
    return out


# splitting, mirror map and J-function

@dataclass
class IPieces:
    omega0: GradedPoly
    omegas: list  # omegas[k] is a StateVector, k >= 1


def split_I(w: InvertiblePolynomial, I: ZSeries) -> IPieces:
    """I = omega_0 e_j y + omega_1 + omega_2 / y + ...  with y = -z."""
    jj = state(w, grading_element(w))
    zs = I.z_exponents()
    if zs and zs[0] > 1:
        raise SeriesShapeError(f"unexpected power z^{zs[0]}")
    top = I.terms.get(1, StateVector())
    if any(s != jj for s in top.terms):
        raise SeriesShapeError("the z^1 part is not along the unit")
    omega0 = -top.coefficient(jj)
    lowest = min(zs) if zs else 1
    omegas: list[StateVector] = []
    for k in range(1, 2 - lowest):
        v = I.terms.get(1 - k, StateVector())
        omegas.append(v.scale(Fraction((-1) ** (1 - k))))
    return IPieces(omega0, omegas)


def _common_monomial(polys: Iterable[GradedPoly]) -> tuple:
    common = None
    for p in polys:
        for m in p.terms:
            d = dict(m)
            if common is None:
                common = d
            else:
                common = {s: min(e, d.get(s, 0)) for s, e in common.items() if s in d}
    return tuple(sorted((s, e) for s, e in (common or {}).items() if e))


def _divide_monomial(p: GradedPoly, mono: tuple) -> GradedPoly:
    md = dict(mono)
    deg = sum(p.degrees[s] * e for s, e in mono)
    out = {}
    for m, c in p.terms.items():
        d = dict(m)
        for s, e in md.items():
            d[s] -= e
        out[tuple(sorted((s, e) for s, e in d.items() if e))] = c
    return GradedPoly(out, p.degrees, None if p.max_degree is None else p.max_degree - deg)


@dataclass
class JFunction:
    tau: StateVector          # mirror map, coefficients in the I-function parameters
    pieces: list              # pieces[k] = omega_{k+1}/omega_0, coefficient of y^{-k}
    omega0: GradedPoly


def mirror_map_and_J(w: InvertiblePolynomial, I: ZSeries) -> JFunction:
    """tau = omega_1/omega_0 and the J-function pieces omega_k/omega_0."""
    pcs = split_I(w, I)
    w0 = pcs.omega0
    if not isinstance(w0, GradedPoly):
        w0 = GradedPoly.constant(Fraction(w0))
    vectors = [v for v in pcs.omegas]
    if is_zero(w0.constant_term()):
        polys = [w0] + [c for v in vectors for c in v.terms.values()]
        mono = _common_monomial(polys)
        if not mono:
            raise ZeroDivisionError("omega_0 has no invertible leading term")
        w0 = _divide_monomial(w0, mono)
        vectors = [v.map_coefficients(lambda c: _divide_monomial(c, mono)) for v in vectors]
    if is_zero(w0.constant_term()):
        raise ZeroDivisionError("omega_0 has no invertible leading term")
    inv = w0.inverse()
    pieces = [v.map_coefficients(lambda c: c * inv) for v in vectors]
    tau = pieces[0] if pieces else StateVector()
    return JFunction(tau, pieces, w0)


def invert_mirror_map(tau: StateVector, params: Sequence[tuple[str, BasisState]], n_max: int,
                      new_names: Mapping[str, str] | None = None) -> dict[str, GradedPoly]:
    """Solve tau(s) = sum_gamma u_gamma e_gamma for s as series in u.

    Requires tau to lie in the span of the parameter states with identity
    linear part; iterates s <- u - (tau(s) - s).
    """
    names = [n for n, _ in params]
    new_names = dict(new_names or {n: f"u_{n}" for n in names})
    degrees = {n: 1 for n in names}
    span = {s: n for n, s in params}
    for s in tau.terms:
        if s not in span:
            raise SeriesShapeError(f"mirror map leaves the parameter span along {s}")
    coords = {n: tau.coefficient(s) for s, n in span.items()}
    for n in names:
        c = coords[n]
        if not isinstance(c, GradedPoly):
            c = GradedPoly.constant(Fraction(c), degrees, n_max)
        lin = c.homogeneous(1)
        if lin.constant_term() != 0 or c.constant_term() != 0:
            raise SeriesShapeError("mirror map has a constant term")
        for m, v in lin.terms.items():
            if m != ((n, 1),) and v != 0:
                raise SeriesShapeError("linear part of the mirror map is not the identity")
        if lin.coefficient(((n, 1),)) != 1:
            raise SeriesShapeError("linear part of the mirror map is singular or not normalized")
        coords[n] = c
    u = {n: GradedPoly.symbol(new_names[n], 1, n_max) for n in names}
    s = dict(u)
    for _ in range(n_max):
        new = {}
        for n in names:
            val = coords[n].substitute(s)
            new[n] = (u[n] - (val - s[n])).truncate(n_max)
        s = new
    return s


def extract_correlators(w: InvertiblePolynomial, params: Mapping[str, BasisState],
                        targets: Sequence[tuple[Sequence[str], BasisState]],
                        n_max: int = 6) -> list[Fraction]:
    """Genus-zero correlators <e_{g1} ... e_{gn}, e_last> from the J-function.

    ``targets`` lists (parameter names with repetition, last insertion).
    """
    _require_chain(w)
    if w.has_excluded_monomials:
        raise TheoremInapplicable("polynomial contains a piece x^a y + y^2 or x^a y + y^2 x")
    ps = list(params.items())
    for name, s in ps:
        if s.broad or degree(w, s) != 2:
            raise TheoremInapplicable(f"parameter {name} must be a narrow state of degree 2")
    I = big_I(w, ps, n_max)
    J = mirror_map_and_J(w, I)
    if len(J.pieces) < 2:
        return [Fraction(0) for _ in targets]
    u_names = {n: f"u:{n}" for n, _ in ps}
    s_of_u = invert_mirror_map(J.tau, ps, n_max, u_names)
    ymin1 = J.pieces[1].map_coefficients(lambda c: c.substitute(s_of_u).truncate(n_max))
    results = []
    for names, last in targets:
        paired = vector_pairing(w, ymin1, StateVector({last: Fraction(1)}))
        cnt = Counter(names)
        mono = tuple(sorted((u_names[n], e) for n, e in cnt.items()))
        c = paired.coefficient(mono) if isinstance(paired, GradedPoly) else Fraction(0)
        results.append(c * math.prod(math.factorial(e) for e in cnt.values()))
    return results


def small_J_relation(w: InvertiblePolynomial, last: BasisState, t_power: int
                     ) -> tuple[dict[tuple[str, ...], Fraction], Fraction]:
    """Linear relation among correlators read off the small J-function.

    The y^{-1} part of J(tau(t)) paired with ``last`` equals
    sum_n 1/n! <tau(t), ..., tau(t), e_last>; its t^{t_power} coefficient
    expands into correlators of the components of tau.  Returns
    ({names of insertions: coefficient}, value), names being "j^k".
    """
    _require_chain(w)
    J = mirror_map_and_J(w, small_I(w, t_power + 1))
    jj = grading_element(w)
    comps: list[tuple[str, int, Fraction]] = []   # (name, t-exponent, coefficient)
    for s, c in J.tau.items():
        k = next((k for k in range(1, jj.order + 1) if state(w, jj ** k) == s), None)
        if k is None:
            raise SeriesShapeError(f"mirror map component {s} is not a power of j")
        for m, v in c.terms.items():
            comps.append((f"j^{k}", sum(e for _, e in m), v))
    rel: dict[tuple[str, ...], Fraction] = {}

    def rec(i: int, left: int, chosen: list[int]):
        if left == 0:
            if not chosen:
                return
            cnt = Counter(chosen)
            coeff = Fraction(1, math.prod(math.factorial(v) for v in cnt.values()))
            for idx, v in cnt.items():
                coeff *= comps[idx][2] ** v
            key = tuple(sorted((comps[idx][0] for idx in chosen), key=lambda n: int(n[2:])))
            rel[key] = rel.get(key, Fraction(0)) + coeff
            return
        for idx in range(i, len(comps)):
            if comps[idx][1] <= left:
                rec(idx, left - comps[idx][1], chosen + [idx])

    rec(0, t_power, [])
    paired = vector_pairing(w, J.pieces[1], StateVector({last: Fraction(1)})) if len(J.pieces) > 1 else 0
    value = paired.coefficient((("t", t_power),)) if isinstance(paired, GradedPoly) else Fraction(0)
    return {k: v for k, v in sorted(rel.items()) if v}, value
