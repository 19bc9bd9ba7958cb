"""Characteristic classes and their lambda -> 1 limits.

The virtual class of a genus-zero tuple is the limit, as lambda -> 1, of

    prod_j (1 - lambda_j)^{e_j} * exp( sum_j sum_{l>=1} s_l(lambda_j) Ch_l(R pi_* L_j) )

with e_j = -Ch_0(R pi_* L^R_j) and lambda_j = lambda^{k_j}.  We put
lambda = (1 + eps)^{-1} and expand everything as exact Laurent series in eps;
the limit is the eps^0 coefficient of each cohomological degree.

Chern characters are supplied by the caller as ``GradedPoly`` values (symbols
of degree l for Ch_l) or as plain Fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Any, Mapping, Sequence

from .poly import InvertiblePolynomial
from .series import INF, GradedPoly, LaurentSeries, binomial_series
from .spincomb import SpinNumerics, TheoremInapplicable, lambda_assignment, numerics
from .statespace import BasisState


class NegativeValuationError(ArithmeticError):
    """The eps-expansion has a pole, so the lambda -> 1 limit does not exist."""


@lru_cache(maxsize=None)
def bernoulli(l: int) -> Fraction:
    """B_l(0), with B_1 = -1/2."""
    if l < 0:
        raise ValueError("l must be non-negative")
    if l == 0:
        return Fraction(1)
    return -sum((math.comb(l + 1, k) * bernoulli(k) for k in range(l)), Fraction(0)) / (l + 1)


@lru_cache(maxsize=None)
def gamma_numbers(l: int, k: int) -> int:
    """Coefficient of z^l/l! in (e^z - 1)^k / k!  (Stirling numbers of the second kind)."""
    if l < 0 or k < 0:
        raise ValueError("indices must be non-negative")
    if l == 0 and k == 0:
        return 1
    if l == 0 or k == 0 or k > l:
        return 0
    return k * gamma_numbers(l - 1, k) + gamma_numbers(l - 1, k - 1)


def s_tilde(X: Any, l: int) -> Any:
    """B_l(0)/l + (-1)^l sum_k (k-1)! X^k gamma(l,k), for any ring element X."""
    if l < 1:
        raise ValueError("s_tilde is defined for l >= 1")
    acc: Any = bernoulli(l) / l
    power: Any = Fraction(1)
    sign = (-1) ** l
    for k in range(1, l + 1):
        power = power * X
        acc = acc + power * (sign * math.factorial(k - 1) * gamma_numbers(l, k))
    return acc


def s_l(x: Fraction, l: int) -> Fraction:
    x = Fraction(x)
    if x == 1:
        raise ZeroDivisionError("s_l has a pole at x = 1")
    if l == 0:
        raise ValueError("s_0 = -log(1-x) is used multiplicatively as (1-x)^(...)")
    return s_tilde(x / (1 - x), l)


def F_class(x: Any, chern: Mapping[int, Any], k_max: int) -> Any:
    """(1-x)^{-ch_0} exp(sum_{l>=1} s_l(x) ch_l), truncated at degree k_max.

    ``chern[0]`` is an integer rank; ``chern[l]`` for l >= 1 are GradedPoly
    values of degree l (missing entries are zero).  ``x`` is a Fraction or a
    series in which 1 - x is invertible.
    """
    ch0 = int(chern.get(0, 0))
    one_minus = 1 - x
    X = x * (one_minus ** -1) if not isinstance(x, (int, Fraction)) else Fraction(x) / one_minus
    arg: Any = None
    for l in range(1, k_max + 1):
        c = chern.get(l)
        if c is None:
            continue
        term = c * s_tilde(X, l)
        arg = term if arg is None else arg + term
    pref = one_minus ** (-ch0)
    if arg is None:
        return pref
    if not isinstance(arg, GradedPoly):
        raise TypeError("Chern characters of positive degree must be GradedPoly values")
    return arg.truncate(k_max).exp() * pref


# eps-series for lambda^k = (1 + eps)^{-k}

def one_minus_lambda_power(k: int, prec: int) -> LaurentSeries:
    """1 - (1+eps)^{-k} to O(eps^prec)."""
    return (1 - binomial_series(-k, prec)).truncate(prec)


def lambda_ratio(k: int, prec: int) -> LaurentSeries:
    """X = lambda^k / (1 - lambda^k) = 1 / ((1+eps)^k - 1), valuation -1."""
    return (binomial_series(k, prec + 2) - 1).inverse(prec)


@dataclass(frozen=True)
class EpsExpansion:
    """Per-degree eps-series; degree k maps to a GradedPoly whose
    coefficients are LaurentSeries in eps."""

    parts: dict
    degvir: int

    def valuation(self, k: int) -> float:
        part = self.parts.get(k)
        if part is None or not part.terms:
            return INF
        return min(c.valuation() if isinstance(c, LaurentSeries) else (0 if c else INF)
                   for c in part.terms.values())


def _series(c: Any) -> LaurentSeries:
    return c if isinstance(c, LaurentSeries) else LaurentSeries({0: Fraction(c)})


def eps_expansion(exponents: Sequence[int], lambda_exps: Sequence[int],
                  chern: Mapping[tuple[int, int], Any], k_max: int,
                  eps_prec: int | None = None) -> EpsExpansion:
    """Expand prod (1-lambda_j)^{e_j} exp(sum s_l(lambda_j) Ch_l) in eps, per degree."""
    degvir = sum(exponents)
    prec = eps_prec if eps_prec is not None else max(degvir, 0) + k_max + 4
    pref = LaurentSeries({0: Fraction(1)})
    for e, k in zip(exponents, lambda_exps):
        if e:
            pref = pref * one_minus_lambda_power(k, prec + abs(e) + 2) ** e
    arg = None
    for (j, l), c in chern.items():
        if l < 1 or l > k_max:
            continue
        X = lambda_ratio(lambda_exps[j], prec + 2 * k_max + 2)
        s = s_tilde(X, l)
        if isinstance(c, GradedPoly):
            term = c * s
        else:
            term = GradedPoly.constant(s * Fraction(c))
        arg = term if arg is None else arg + term
    if arg is None:
        total = GradedPoly.constant(pref, max_degree=k_max)
    else:
        total = arg.truncate(k_max).exp() * pref
    parts: dict[int, GradedPoly] = {}
    for m, c in total.terms.items():
        d = total.monomial_degree(m)
        parts.setdefault(d, GradedPoly({}, total.degrees, k_max))
        parts[d].terms[m] = _series(c)
    return EpsExpansion(parts, degvir)


@dataclass(frozen=True)
class LimitClass:
    parts: dict          # degree k -> GradedPoly over Fractions
    valuations: dict     # degree k -> eps-valuation of that part
    degvir: int

    def scalar(self) -> Fraction:
        part = self.parts.get(0)
        return part.constant_term() if part is not None else Fraction(0)


def limit_class(exponents: Sequence[int], lambda_exps: Sequence[int],
                chern: Mapping[tuple[int, int], Any] | None = None, k_max: int = 0,
                eps_prec: int | None = None) -> LimitClass:
    """The lambda -> 1 limit, degree by degree.

    ``exponents[j]`` is -Ch_0(R pi_* L^R_j), ``lambda_exps[j]`` is k_j and
    ``chern[(j, l)]`` is Ch_l(R pi_* L_j) for l >= 1 (0-based j).
    """
    chern = chern or {}
    prec = eps_prec if eps_prec is not None else max(sum(exponents), 0) + k_max + 4
    for _ in range(6):
        exp = eps_expansion(exponents, lambda_exps, chern, k_max, prec)
        parts, vals, short = {}, {}, False
        for k in range(k_max + 1):
            part = exp.parts.get(k)
            vals[k] = exp.valuation(k)
            if part is None:
                parts[k] = GradedPoly({}, max_degree=k_max)
                continue
            out = {}
            for m, c in part.terms.items():
                v = c.valuation()
                if v < 0:
                    raise NegativeValuationError(
                        f"degree-{k} part has a pole of order {-v} in eps; "
                        "the supplied Chern data is inconsistent with polynomiality")
                if c.prec <= 0:
                    short = True
                    break
                out[m] = c.coefficient(0)
            if short:
                break
            parts[k] = GradedPoly(out, part.degrees, k_max)
        if not short:
            return LimitClass(parts, vals, exp.degvir)
        prec *= 2
    raise ArithmeticError("eps precision overflow")


def correlator3(w: InvertiblePolynomial, e1: BasisState, e2: BasisState, e3: BasisState,
                exact_three_point: bool = True) -> Fraction:
    """Genus-zero three-point number: the degree-0 limit scalar."""
    states = (e1, e2, e3)
    if any(e.is_zero for e in states):
        return Fraction(0)
    num = numerics(w, states, with_D=False)
    if num.degvir < 0:
        raise ArithmeticError("negative virtual degree")
    ks = lambda_assignment(w, states, exact_three_point)
    return limit_class(num.minus_ch0_R, ks).scalar()


def correlator3_closed_form(num: SpinNumerics, ks: Sequence[int]) -> Fraction:
    """prod k_j^{e_j} when degvir = 0, else 0 (leading coefficients of 1 - lambda^k)."""
    if num.degvir > 0:
        return Fraction(0)
    out = Fraction(1)
    for e, k in zip(num.minus_ch0_R, ks):
        out *= Fraction(k) ** e
    return out


# structural predicates on the polytope of multi-degrees

def _coef(a: Sequence[int], j: int, k: int) -> int:
    """(-a_j)(-a_{j+1})...(-a_{k-1})."""
    c = 1
    for i in range(j, k):
        c *= -a[i]
    return c


def polytope_member(p: Sequence[int], q: Sequence[int], R: Sequence[int], a: Sequence[int],
                    ranks_B: Sequence[int]) -> bool:
    n = len(R)
    if any(v < 0 for v in p) or any(v < 0 for v in q):
        return False
    if any(qj > rb for qj, rb in zip(q, ranks_B)):
        return False
    z = [pj + qj for pj, qj in zip(p, q)]
    return all(z[j] + sum(_coef(a, j, k) * z[k] for k in range(j + 1, n)) <= R[j]
               for j in range(n))


def domain_of_sum(R: Sequence[int], a: Sequence[int], start: int = 0) -> list[tuple[int, ...]]:
    """All (z_start, ..., z_N) in N^{N-start} with the chain inequalities."""
    n = len(R)
    out: list[tuple[int, ...]] = []

    def rec(j: int, tail: tuple[int, ...]):
        if j < start:
            out.append(tail)
            return
        rest = sum(_coef(a, j, j + 1 + i) * z for i, z in enumerate(tail))
        top = R[j] - rest
        for zj in range(0, top + 1):
            rec(j - 1, (zj,) + tail)

    rec(n - 1, ())
    return sorted(out)


def enumerate_polytope(R: Sequence[int], a: Sequence[int], ranks_B: Sequence[int],
                       ranks_A: Sequence[int] | None = None) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Points (p, q) of the polytope; p_j is forced to 0 where rank A_j = 0."""
    out = []
    for z in domain_of_sum(R, a):
        choices = []
        for j, zj in enumerate(z):
            opts = []
            for qj in range(0, min(zj, ranks_B[j]) + 1):
                pj = zj - qj
                if ranks_A is not None and ranks_A[j] == 0 and pj > 0:
                    continue
                opts.append((pj, qj))
            choices.append(opts)
        for combo in product(*choices):
            out.append((tuple(c[0] for c in combo), tuple(c[1] for c in combo)))
    return out


def _exp_root(root: GradedPoly, sign: int, k_max: int) -> GradedPoly:
    return (root * sign).truncate(k_max).exp()


def _todd(roots: Sequence[GradedPoly], k_max: int) -> GradedPoly:
    """prod alpha / (1 - e^{-alpha}), via the inverse of (1 - e^{-alpha}) / alpha."""
    out = GradedPoly.constant(Fraction(1), max_degree=k_max)
    for r in roots:
        r = r.truncate(k_max)
        ser = GradedPoly.constant(Fraction(1), max_degree=k_max)
        power = GradedPoly.constant(Fraction(1), max_degree=k_max)
        for n in range(1, k_max + 1):
            power = power * r
            ser = ser + power * Fraction((-1) ** n, math.factorial(n + 1))
        out = out * ser.inverse()
    return out


def _elementary(values: Sequence[GradedPoly], q: int, k_max: int) -> GradedPoly:
    acc = [GradedPoly.constant(Fraction(1), max_degree=k_max)] + \
          [GradedPoly({}, max_degree=k_max) for _ in range(q)]
    for v in values:
        for i in range(q, 0, -1):
            acc[i] = acc[i] + acc[i - 1] * v
    return acc[q]


def _complete(values: Sequence[GradedPoly], p: int, k_max: int) -> GradedPoly:
    acc = [GradedPoly.constant(Fraction(1), max_degree=k_max)] + \
          [GradedPoly({}, max_degree=k_max) for _ in range(p)]
    for v in values:
        for i in range(1, p + 1):
            acc[i] = acc[i] + acc[i - 1] * v
    return acc[p]


def dual_sym_power(A_roots: Sequence[GradedPoly], B_roots: Sequence[GradedPoly], z: int,
                   k_max: int) -> GradedPoly:
    """Ch^vee of S^z[A -> B] = sum_{p+q=z} (-1)^q Ch(S^p A^vee) Ch(Lambda^q B^vee)."""
    ea = [_exp_root(r, -1, k_max) for r in A_roots]
    eb = [_exp_root(r, -1, k_max) for r in B_roots]
    out = GradedPoly({}, max_degree=k_max)
    for q in range(0, min(z, len(B_roots)) + 1):
        p = z - q
        if p and not A_roots:
            continue
        out = out + _complete(ea, p, k_max) * _elementary(eb, q, k_max) * ((-1) ** q)
    return out


def G_truncation(j: int, R: Sequence[int], a: Sequence[int],
                 A_roots: Sequence[Sequence[GradedPoly]], B_roots: Sequence[Sequence[GradedPoly]],
                 k_max: int) -> GradedPoly:
    """Finite sum over the domain of prod_{k>=j} Ch^vee(S^{z_k} AB_k) x_k^{z_k} / Td(AB_k).

    The x_k are degree-0 symbols named ``x1``, ``x2``, ... (1-based).
    """
    n = len(R)
    inv_td = []
    for k in range(j, n):
        inv_td.append(_todd(B_roots[k], k_max) * _todd(A_roots[k], k_max).inverse())
    cache: dict[tuple[int, int], GradedPoly] = {}
    total = GradedPoly({}, max_degree=k_max)
    for z in domain_of_sum(R, a, j):
        term = GradedPoly.constant(Fraction(1), max_degree=k_max)
        for i, zk in enumerate(z):
            k = j + i
            key = (k, zk)
            if key not in cache:
                cache[key] = dual_sym_power(A_roots[k], B_roots[k], zk, k_max) * inv_td[i]
            term = term * cache[key]
            if zk:
                term = term * GradedPoly({((f"x{k + 1}", zk),): Fraction(1)}, {f"x{k + 1}": 0})
        total = total + term
    return total


# broad rescaling for an even loop

def loop_uv(w: InvertiblePolynomial) -> tuple:
    """The two narrow symmetries u, v used to probe the broad states of an even loop."""
    from .symmetry import DiagonalSymmetry

    comps = w.decomposition
    if len(comps) != 1 or comps[0].kind != "loop" or w.n % 2:
        raise TheoremInapplicable("needs a single loop with an even number of variables")
    a = list(w.a)
    den = math.prod(a) - 1
    n = w.n
    u = [Fraction(_coef(a, 0, j), den) for j in range(n)]
    v = [Fraction(_coef(a, 1, n), den), Fraction(1, den)] + \
        [Fraction(_coef(a, 1, j), den) for j in range(2, n)]
    return DiagonalSymmetry(tuple(u)), DiagonalSymmetry(tuple(v))


def loop_B_matrix(w: InvertiblePolynomial) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
    """Three-point numbers <e_pm, e_u, e_{j u^-1}> and <e_pm, e_v, e_{j v^-1}>.

    e_- crosses x_1, x_3, ... counting from zero (x2, x4, ... in 1-based
    names), e_+ crosses the others.
    """
    from .statespace import state
    from .symmetry import DiagonalSymmetry, grading_element

    u, v = loop_uv(w)
    jj = grading_element(w)
    one = DiagonalSymmetry.identity(w.n)
    minus = state(w, one, [j for j in range(w.n) if j % 2 == 1])
    plus = state(w, one, [j for j in range(w.n) if j % 2 == 0])
    rows = []
    for e in (minus, plus):
        rows.append(tuple(correlator3(w, e, state(w, g), state(w, jj * g.inverse())) for g in (u, v)))
    return rows[0], rows[1]
