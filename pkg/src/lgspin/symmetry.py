"""The group Aut(W) of diagonal symmetries.

An element is stored by its phases Gamma in [0,1)^N; the matrix diag(exp(2 pi i Gamma))
preserves W iff E * Gamma is an integer vector.  Aut(W) has order |det E| and is
generated by the columns of E^{-1} taken mod 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

from .poly import InvertiblePolynomial, solve_rational

DEFAULT_CAP = 10**6


class SymmetryError(ValueError):
    pass


def _frac(x: Fraction) -> Fraction:
    return x - math.floor(x)


@dataclass(frozen=True, order=True)
class DiagonalSymmetry:
    """Phases (Gamma_1, ..., Gamma_N), each a Fraction in [0, 1)."""

    phases: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "phases", tuple(_frac(Fraction(p)) for p in self.phases))

    @classmethod
    def identity(cls, n: int) -> "DiagonalSymmetry":
        return cls((Fraction(0),) * n)

    def __len__(self) -> int:
        return len(self.phases)

    def __getitem__(self, j: int) -> Fraction:
        return self.phases[j]

    def __mul__(self, other: "DiagonalSymmetry") -> "DiagonalSymmetry":
        if len(self) != len(other):
            raise SymmetryError("symmetries act on different numbers of variables")
        return DiagonalSymmetry(tuple(a + b for a, b in zip(self.phases, other.phases)))

    def inverse(self) -> "DiagonalSymmetry":
        return DiagonalSymmetry(tuple(-p for p in self.phases))

    def __pow__(self, k: int) -> "DiagonalSymmetry":
        return DiagonalSymmetry(tuple(k * p for p in self.phases))

    @property
    def order(self) -> int:
        return math.lcm(*(p.denominator for p in self.phases))

    @property
    def is_identity(self) -> bool:
        return all(p == 0 for p in self.phases)

    def broad_set(self) -> frozenset[int]:
        return frozenset(j for j, p in enumerate(self.phases) if p == 0)

    def __str__(self) -> str:
        return "(" + ", ".join(str(p) for p in self.phases) + ")"


def mul(g: DiagonalSymmetry, h: DiagonalSymmetry) -> DiagonalSymmetry:
    return g * h


def inv(g: DiagonalSymmetry) -> DiagonalSymmetry:
    return g.inverse()


def order(g: DiagonalSymmetry) -> int:
    return g.order


def power(g: DiagonalSymmetry, k: int) -> DiagonalSymmetry:
    return g ** k


def in_aut(w: InvertiblePolynomial, g: DiagonalSymmetry) -> bool:
    if len(g) != w.n:
        return False
    return all(sum((e * p for e, p in zip(row, g.phases)), Fraction(0)).denominator == 1
               for row in w.matrix)


def check_member(w: InvertiblePolynomial, g: DiagonalSymmetry) -> None:
    if not in_aut(w, g):
        raise SymmetryError(f"{g} is not a symmetry of {w}")


def grading_element(w: InvertiblePolynomial) -> DiagonalSymmetry:
    """The exponential grading element, Gamma = (q_1, ..., q_N)."""
    return DiagonalSymmetry(w.charges)


def column_generators(w: InvertiblePolynomial) -> list[DiagonalSymmetry]:
    """Columns of E^{-1} mod 1."""
    n = w.n
    cols = []
    for k in range(n):
        e_k = [1 if i == k else 0 for i in range(n)]
        cols.append(DiagonalSymmetry(tuple(solve_rational(w.matrix, e_k))))
    return cols


def enumerate_group(generators: Sequence[DiagonalSymmetry], n: int,
                    cap: int = DEFAULT_CAP) -> list[DiagonalSymmetry]:
    """Closure of the generators, sorted lexicographically."""
    gens = [g for g in generators if not g.is_identity]
    r = math.lcm(1, *(g.order for g in gens))
    # integer phases mod r keep the closure cheap
    igens = [tuple(int(p * r) for p in g.phases) for g in gens]
    ident = (0,) * n
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in igens:
                y = tuple((a + b) % r for a, b in zip(x, g))
                if y not in seen:
                    seen.add(y)
                    if len(seen) > cap:
                        raise SymmetryError(f"group has more than {cap} elements")
                    nxt.append(y)
        frontier = nxt
    return [DiagonalSymmetry(tuple(Fraction(v, r) for v in x)) for x in sorted(seen)]


@dataclass(frozen=True)
class SymmetryGroup:
    w: InvertiblePolynomial
    cap: int = DEFAULT_CAP

    @property
    def order(self) -> int:
        return abs(self.w.determinant)

    @cached_property
    def generators(self) -> tuple[DiagonalSymmetry, ...]:
        return tuple(g for g in column_generators(self.w) if not g.is_identity)

    @cached_property
    def invariant_factors(self) -> tuple[int, ...]:
        # Aut(W) = E^{-1} Z^N / Z^N, isomorphic to Z^N / E Z^N
        from sympy import Matrix, ZZ
        from sympy.matrices.normalforms import invariant_factors

        facs = invariant_factors(Matrix(self.w.matrix), domain=ZZ)
        return tuple(int(abs(f)) for f in facs if abs(f) != 1)

    @property
    def exponent(self) -> int:
        """Least common multiple of element orders (the largest invariant factor)."""
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @cached_property
    def _elements(self) -> tuple[DiagonalSymmetry, ...]:
        if self.order > self.cap:
            raise SymmetryError(f"|Aut(W)| = {self.order} exceeds the cap {self.cap}")
        els = enumerate_group(self.generators, self.w.n, self.cap)
        if len(els) != self.order:
            raise SymmetryError("enumeration does not match |det E|")
        return tuple(els)

    def elements(self) -> tuple[DiagonalSymmetry, ...]:
        return self._elements

    def __iter__(self) -> Iterator[DiagonalSymmetry]:
        return iter(self._elements)

    def __len__(self) -> int:
        return self.order

    def __contains__(self, g: object) -> bool:
        return isinstance(g, DiagonalSymmetry) and in_aut(self.w, g)


@lru_cache(maxsize=64)
def aut_group(w: InvertiblePolynomial, cap: int = DEFAULT_CAP) -> SymmetryGroup:
    return SymmetryGroup(w, cap)


def sl_subgroup(w: InvertiblePolynomial, cap: int = DEFAULT_CAP) -> list[DiagonalSymmetry]:
    """Elements of Aut(W) with determinant 1, i.e. sum of phases integral."""
    return [g for g in aut_group(w, cap) if sum(g.phases, Fraction(0)).denominator == 1]
