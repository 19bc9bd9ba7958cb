"""Exact truncated series and graded polynomials.

Two containers are used throughout the package:

``LaurentSeries``
    sum of c_k x^k for k >= valuation, known up to O(x^prec).  Coefficients
    may be Fractions or any ring element implementing ``+ - *`` (for
    instance another ``LaurentSeries``), which gives nested series such as
    epsilon-series whose coefficients are z-series.

``GradedPoly``
    sparse commutative polynomial in named symbols, each carrying an integer
    degree, truncated above a maximal total degree.  Used for Chern-character
    symbols and for the formal parameters of the I-function.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping

INF = math.inf


def is_zero(c: Any) -> bool:
    """Exact-zero test that works for Fractions and series coefficients."""
    if isinstance(c, (int, Fraction)):
        return c == 0
    return c.is_exact_zero()


def _inverse(c: Any) -> Any:
    if isinstance(c, (int, Fraction)):
        if c == 0:
            raise ZeroDivisionError("leading coefficient is zero")
        return Fraction(1) / c
    return c.inverse()


class LaurentSeries:
    """Truncated Laurent series  sum_k c_k x^k + O(x^prec)."""

    __slots__ = ("coeffs", "prec")

    def __init__(self, coeffs: Mapping[int, Any] | None = None, prec: float = INF):
        self.prec = prec
        self.coeffs: dict[int, Any] = {}
        if coeffs:
            for k, c in coeffs.items():
                if k < prec and not is_zero(c):
                    self.coeffs[k] = c

    # construction helpers
    @classmethod
    def monomial(cls, c: Any, k: int = 0, prec: float = INF) -> "LaurentSeries":
        return cls({k: c}, prec)

    @classmethod
    def from_function(cls, f: Callable[[int], Any], start: int, prec: int) -> "LaurentSeries":
        return cls({k: f(k) for k in range(start, prec)}, prec)

    # inspection
    def valuation(self) -> float:
        return min(self.coeffs) if self.coeffs else self.prec

    def coefficient(self, k: int) -> Any:
        if k >= self.prec:
            raise ValueError(f"coefficient x^{k} is beyond the known precision {self.prec}")
        return self.coeffs.get(k, Fraction(0))

    def is_exact_zero(self) -> bool:
        return not self.coeffs and self.prec == INF

    def truncate(self, prec: float) -> "LaurentSeries":
        return LaurentSeries(self.coeffs, min(prec, self.prec))

    def map_coefficients(self, f: Callable[[Any], Any]) -> "LaurentSeries":
        return LaurentSeries({k: f(c) for k, c in self.coeffs.items()}, self.prec)

    def shift(self, n: int) -> "LaurentSeries":
        """Multiply by x^n."""
        return LaurentSeries({k + n: c for k, c in self.coeffs.items()}, self.prec + n)

    # arithmetic
    @staticmethod
    def _coerce(other: Any) -> "LaurentSeries":
        if isinstance(other, LaurentSeries):
            return other
        return LaurentSeries({0: other})

    def __add__(self, other: Any) -> "LaurentSeries":
        o = self._coerce(other)
        prec = min(self.prec, o.prec)
        out = {k: c for k, c in self.coeffs.items() if k < prec}
        for k, c in o.coeffs.items():
            if k < prec:
                out[k] = out[k] + c if k in out else c
        return LaurentSeries(out, prec)

    __radd__ = __add__

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries({k: -c for k, c in self.coeffs.items()}, self.prec)

    def __sub__(self, other: Any) -> "LaurentSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> "LaurentSeries":
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            if isinstance(other, (int, Fraction)) and other == 0:
                return LaurentSeries(prec=INF)
            return LaurentSeries({k: c * other for k, c in self.coeffs.items()}, self.prec)
        va, vb = self.valuation(), other.valuation()
        prec = min(self.prec + vb, other.prec + va)
        out: dict[int, Any] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                k = i + j
                if k < prec:
                    p = a * b
                    out[k] = out[k] + p if k in out else p
        return LaurentSeries(out, prec)

    def __rmul__(self, other: Any) -> "LaurentSeries":
        if isinstance(other, (int, Fraction)) and other == 0:
            return LaurentSeries(prec=INF)
        return LaurentSeries({k: other * c for k, c in self.coeffs.items()}, self.prec)

    def inverse(self, prec: int | None = None) -> "LaurentSeries":
        """Multiplicative inverse.

        The leading coefficient must itself be invertible.  An exact input
        needs an explicit absolute ``prec`` for the result.
        """
        if not self.coeffs:
            raise ZeroDivisionError("series has no known non-zero coefficient")
        v = min(self.coeffs)
        rel = self.prec - v
        if rel == INF:
            if len(self.coeffs) == 1:
                return LaurentSeries({-v: _inverse(self.coeffs[v])})
            if prec is None:
                raise ValueError("inverse of a non-monomial exact series needs prec")
            rel = prec + v
        if prec is not None:
            rel = min(rel, prec + v)
        rel = int(rel)
        a = [self.coeffs.get(v + i, Fraction(0)) for i in range(rel)]
        b0 = _inverse(a[0])
        b = [b0]
        for n in range(1, rel):
            acc = None
            for k in range(1, n + 1):
                if is_zero(a[k]):
                    continue
                t = a[k] * b[n - k]
                acc = t if acc is None else acc + t
            b.append(Fraction(0) if acc is None else -(acc * b0))
        return LaurentSeries({i - v: c for i, c in enumerate(b)}, rel - v)

    def __truediv__(self, other: Any) -> "LaurentSeries":
        if isinstance(other, LaurentSeries):
            return self * other.inverse()
        return self * _inverse(other)

    def __pow__(self, n: int) -> "LaurentSeries":
        if n < 0:
            return self.inverse() ** (-n)
        result = LaurentSeries({0: Fraction(1)})
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentSeries):
            if isinstance(other, (int, Fraction)):
                other = LaurentSeries({0: other})
            else:
                return NotImplemented
        prec = min(self.prec, other.prec)
        keys = {k for k in self.coeffs if k < prec} | {k for k in other.coeffs if k < prec}
        zero = Fraction(0)
        return all(self.coeffs.get(k, zero) == other.coeffs.get(k, zero) for k in keys)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        terms = " + ".join(f"({c})*x^{k}" for k, c in sorted(self.coeffs.items())) or "0"
        return terms if self.prec == INF else f"{terms} + O(x^{self.prec})"


def binomial_series(m: int, prec: int) -> LaurentSeries:
    """(1 + x)^m to O(x^prec) for any integer m."""
    coeffs = {}
    c = Fraction(1)
    for i in range(prec):
        coeffs[i] = c
        c = c * (m - i) / (i + 1)
    exact = m >= 0 and m < prec
    return LaurentSeries(coeffs, INF if exact else prec)


Monomial = tuple  # sorted tuple of (symbol, exponent) pairs


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for s, e in b:
        d[s] = d.get(s, 0) + e
    return tuple(sorted(d.items()))


class GradedPoly:
    """Sparse polynomial in graded symbols, truncated above ``max_degree``.

    ``degrees`` maps symbol names to their (non-negative) degree.  Symbols of
    degree 0 are never truncated.  ``max_degree=None`` means no truncation.
    """

    __slots__ = ("terms", "degrees", "max_degree")

    def __init__(self, terms: Mapping[Monomial, Any] | None = None,
                 degrees: Mapping[str, int] | None = None,
                 max_degree: int | None = None):
        self.degrees = dict(degrees or {})
        self.max_degree = max_degree
        self.terms: dict[Monomial, Any] = {}
        for m, c in (terms or {}).items():
            if not is_zero(c) and self._keep(m):
                self.terms[m] = c

    @classmethod
    def constant(cls, c: Any, degrees: Mapping[str, int] | None = None,
                 max_degree: int | None = None) -> "GradedPoly":
        return cls({(): c}, degrees, max_degree)

    @classmethod
    def symbol(cls, name: str, degree: int = 1, max_degree: int | None = None,
               coeff: Any = Fraction(1)) -> "GradedPoly":
        return cls({((name, 1),): coeff}, {name: degree}, max_degree)

    def monomial_degree(self, m: Monomial) -> int:
        return sum(self.degrees[s] * e for s, e in m)

    def _keep(self, m: Monomial) -> bool:
        return self.max_degree is None or self.monomial_degree(m) <= self.max_degree

    def _merge(self, other: "GradedPoly") -> tuple[dict, int | None]:
        degrees = dict(self.degrees)
        for s, d in other.degrees.items():
            if degrees.setdefault(s, d) != d:
                raise ValueError(f"symbol {s} has inconsistent degrees")
        if self.max_degree is None:
            md = other.max_degree
        elif other.max_degree is None:
            md = self.max_degree
        else:
            md = min(self.max_degree, other.max_degree)
        return degrees, md

    def _coerce(self, other: Any) -> "GradedPoly":
        if isinstance(other, GradedPoly):
            return other
        return GradedPoly({(): other}, self.degrees, self.max_degree)

    # inspection
    def is_exact_zero(self) -> bool:
        return not self.terms

    def coefficient(self, mono: Monomial | Mapping[str, int] = ()) -> Any:
        if isinstance(mono, Mapping):
            mono = tuple(sorted((s, e) for s, e in mono.items() if e))
        return self.terms.get(tuple(mono), Fraction(0))

    def constant_term(self) -> Any:
        return self.terms.get((), Fraction(0))

    def homogeneous(self, k: int) -> "GradedPoly":
        return GradedPoly({m: c for m, c in self.terms.items() if self.monomial_degree(m) == k},
                          self.degrees, self.max_degree)

    def truncate(self, max_degree: int) -> "GradedPoly":
        md = max_degree if self.max_degree is None else min(max_degree, self.max_degree)
        return GradedPoly(self.terms, self.degrees, md)

    def map_coefficients(self, f: Callable[[Any], Any]) -> "GradedPoly":
        return GradedPoly({m: f(c) for m, c in self.terms.items()}, self.degrees, self.max_degree)

    def symbols(self) -> set[str]:
        return {s for m in self.terms for s, _ in m}

    # arithmetic
    def __add__(self, other: Any) -> "GradedPoly":
        o = self._coerce(other)
        degrees, md = self._merge(o)
        out = dict(self.terms)
        for m, c in o.terms.items():
            out[m] = out[m] + c if m in out else c
        return GradedPoly(out, degrees, md)

    __radd__ = __add__

    def __neg__(self) -> "GradedPoly":
        return self.map_coefficients(lambda c: -c)

    def __sub__(self, other: Any) -> "GradedPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> "GradedPoly":
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> "GradedPoly":
        if not isinstance(other, GradedPoly):
            return GradedPoly({m: c * other for m, c in self.terms.items()},
                              self.degrees, self.max_degree)
        degrees, md = self._merge(other)
        out: dict[Monomial, Any] = {}
        for ma, a in self.terms.items():
            da = sum(degrees[s] * e for s, e in ma)
            for mb, b in other.terms.items():
                if md is not None and da + sum(degrees[s] * e for s, e in mb) > md:
                    continue
                m = _mono_mul(ma, mb)
                p = a * b
                out[m] = out[m] + p if m in out else p
        return GradedPoly(out, degrees, md)

    def __rmul__(self, other: Any) -> "GradedPoly":
        return GradedPoly({m: other * c for m, c in self.terms.items()},
                          self.degrees, self.max_degree)

    def __pow__(self, n: int) -> "GradedPoly":
        if n < 0:
            return self.inverse() ** (-n)
        result = self._coerce(Fraction(1))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def _nilpotency_bound(self) -> int:
        if self.max_degree is None:
            raise ValueError("power series operations need a finite max_degree")
        nonconst = [m for m in self.terms if m]
        if any(self.monomial_degree(m) <= 0 for m in nonconst):
            raise ValueError("non-constant part must have positive degree")
        return self.max_degree

    def exp(self) -> "GradedPoly":
        """exp of an element with zero constant term."""
        if () in self.terms:
            raise ValueError("exp needs a zero constant term")
        bound = self._nilpotency_bound()
        result = self._coerce(Fraction(1))
        power = self._coerce(Fraction(1))
        for m in range(1, bound + 1):
            power = power * self * Fraction(1, m)
            if not power.terms:
                break
            result = result + power
        return result

    def inverse(self) -> "GradedPoly":
        """Inverse of an element with invertible constant term."""
        c0 = self.terms.get(())
        if c0 is None:
            raise ZeroDivisionError("constant term is zero")
        inv0 = _inverse(c0)
        bound = self._nilpotency_bound()
        n = (self - c0) * inv0
        result = self._coerce(Fraction(1))
        power = self._coerce(Fraction(1))
        for _ in range(bound):
            power = power * (-n)
            if not power.terms:
                break
            result = result + power
        return result * inv0

    def __truediv__(self, other: Any) -> "GradedPoly":
        if isinstance(other, GradedPoly):
            return self * other.inverse()
        return self * _inverse(other)

    def substitute(self, values: Mapping[str, Any]) -> Any:
        """Replace symbols by ring elements (other symbols are kept)."""
        acc: Any = None
        cache: dict[tuple[str, int], Any] = {}
        for m, c in self.terms.items():
            term: Any = c
            rest = []
            for s, e in m:
                if s in values:
                    key = (s, e)
                    if key not in cache:
                        cache[key] = values[s] ** e
                    term = cache[key] * term if isinstance(cache[key], GradedPoly) else term * cache[key]
                else:
                    rest.append((s, e))
            if rest:
                deg = {s: self.degrees[s] for s, _ in rest}
                term = GradedPoly({tuple(rest): Fraction(1)}, deg, self.max_degree) * term
            acc = term if acc is None else acc + term
        return Fraction(0) if acc is None else acc

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedPoly):
            if isinstance(other, (int, Fraction)):
                other = self._coerce(other)
            else:
                return NotImplemented
        keys = set(self.terms) | set(other.terms)
        zero = Fraction(0)
        return all(self.terms.get(m, zero) == other.terms.get(m, zero) for m in keys)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda t: (self.monomial_degree(t[0]), t[0])):
            mono = "*".join(s if e == 1 else f"{s}^{e}" for s, e in m)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def polynomial_in(symbols: Iterable[str], degrees: Mapping[str, int] | None = None,
                  max_degree: int | None = None) -> list[GradedPoly]:
    """Convenience: the symbols themselves as GradedPoly elements."""
    degrees = degrees or {}
    return [GradedPoly.symbol(s, degrees.get(s, 1), max_degree) for s in symbols]
