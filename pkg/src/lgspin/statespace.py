"""State space basis from admissible and balanced decorations.

A basis label is a symmetry gamma together with a set of crossed broad
variables.  Decorations that are admissible but not balanced label the zero
vector; they are kept around (with ``balanced=False``) because the formulas
downstream use them to detect vanishing contributions.

All broad rescaling constants are taken to be 1, so the labels double as the
rescaled basis used when comparing with the Givental side.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Any, Iterable, Iterator, Mapping

from .poly import InvertiblePolynomial
from .series import is_zero
from .symmetry import DiagonalSymmetry, SymmetryError, aut_group, check_member, grading_element


class StateError(ValueError):
    pass


@dataclass(frozen=True)
class BasisState:
    gamma: DiagonalSymmetry
    crossed: frozenset[int]
    balanced: bool

    @property
    def is_zero(self) -> bool:
        return not self.balanced

    @property
    def broad(self) -> frozenset[int]:
        return self.gamma.broad_set()

    def sort_key(self) -> tuple:
        return (self.gamma.phases, tuple(sorted(self.crossed)))

    def label(self) -> str:
        g = ",".join(str(p) for p in self.gamma.phases)
        if not self.broad:
            return f"({g})"
        c = ",".join(str(j + 1) for j in sorted(self.crossed))
        return f"({g})[{c}]"

    def __str__(self) -> str:
        return self.label()


def broad_set(gamma: DiagonalSymmetry) -> frozenset[int]:
    return gamma.broad_set()


def is_admissible(w: InvertiblePolynomial, broad: frozenset[int], crossed: frozenset[int]) -> bool:
    t = w.t
    for j in broad:
        if j in crossed:
            if t[j] != j and t[j] in crossed:
                return False
        else:
            if t[j] == j or t[j] not in crossed:
                return False
    return True


def _broad_components(w: InvertiblePolynomial, broad: frozenset[int]) -> list[set[int]]:
    parent = {j: j for j in broad}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for j in broad:
        k = w.t[j]
        if k in broad:
            parent[find(j)] = find(k)
    comps: dict[int, set[int]] = {}
    for j in broad:
        comps.setdefault(find(j), set()).add(j)
    return list(comps.values())


def is_balanced(w: InvertiblePolynomial, broad: frozenset[int], crossed: frozenset[int]) -> bool:
    return all(2 * len(c & crossed) == len(c) for c in _broad_components(w, broad))


def decorations(w: InvertiblePolynomial, gamma: DiagonalSymmetry) -> list[BasisState]:
    """All admissible decorations of gamma, ordered by crossed-set bitmask."""
    broad = gamma.broad_set()
    found = []
    for r in range(len(broad) + 1):
        for crossed in combinations(sorted(broad), r):
            cs = frozenset(crossed)
            if is_admissible(w, broad, cs):
                found.append(BasisState(gamma, cs, is_balanced(w, broad, cs)))
    found.sort(key=lambda s: sum(1 << j for j in s.crossed))
    return found


def chain_crossed(w: InvertiblePolynomial, gamma: DiagonalSymmetry) -> frozenset[int]:
    """Crossed set of the unique decoration on a chain: broad j with N-j even."""
    n = w.n
    return frozenset(j for j in gamma.broad_set() if (n - 1 - j) % 2 == 0)


def state(w: InvertiblePolynomial, gamma: DiagonalSymmetry,
          crossed: Iterable[int] | None = None) -> BasisState:
    """The basis label for gamma; ``crossed`` (0-based) is needed when ambiguous."""
    decs = decorations(w, gamma)
    if crossed is None:
        if len(decs) != 1:
            raise StateError(f"{len(decs)} admissible decorations for {gamma}; specify the crossed set")
        return decs[0]
    cs = frozenset(crossed)
    for d in decs:
        if d.crossed == cs:
            return d
    raise StateError(f"crossed set {sorted(j + 1 for j in cs)} is not admissible for {gamma}")


def basis(w: InvertiblePolynomial) -> list[BasisState]:
    """Balanced basis states over the whole of Aut(W)."""
    out = []
    for g in aut_group(w):
        out.extend(d for d in decorations(w, g) if d.balanced)
    return out


def degree(w: InvertiblePolynomial, e: BasisState) -> Fraction:
    g = e.gamma
    return len(g.broad_set()) + 2 * sum((g[j] - q for j, q in enumerate(w.charges)), Fraction(0))


def pairing(w: InvertiblePolynomial, e: BasisState, f: BasisState) -> Fraction:
    if e.is_zero or f.is_zero:
        return Fraction(0)
    if e.gamma.inverse() != f.gamma:
        return Fraction(0)
    value = Fraction(1)
    for j in e.broad - (e.crossed | f.crossed):
        value *= -w.a[j]
    return value


def gram_matrix(w: InvertiblePolynomial, states: list[BasisState]) -> list[list[Fraction]]:
    return [[pairing(w, e, f) for f in states] for e in states]


def _solve(m: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(m)
    a = [row[:] + [b] for row, b in zip(m, rhs)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise StateError("pairing block is singular")
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [v / piv for v in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [a[r][n] for r in range(n)]


def dual(w: InvertiblePolynomial, e: BasisState) -> "StateVector":
    """The vector e^ with pairing(e^, e') = delta(e, e') on the basis."""
    if e.is_zero:
        raise StateError("an unbalanced decoration is the zero state and has no dual")
    mine = [d for d in decorations(w, e.gamma) if d.balanced]
    theirs = [d for d in decorations(w, e.gamma.inverse()) if d.balanced]
    gram = [[pairing(w, f, m) for f in theirs] for m in mine]
    rhs = [Fraction(1 if m == e else 0) for m in mine]
    coeffs = _solve(gram, rhs)
    return StateVector({f: c for f, c in zip(theirs, coeffs)})


def chain_dual(w: InvertiblePolynomial, e: BasisState) -> "StateVector":
    """Closed form of the dual on a chain: prod over broad j with N-j odd of (-1/a_j)."""
    if e.is_zero:
        raise StateError("an unbalanced decoration is the zero state and has no dual")
    c = Fraction(1)
    for j in e.broad:
        if (w.n - 1 - j) % 2 == 1:
            c *= Fraction(-1, w.a[j])
    return StateVector({state(w, e.gamma.inverse()): c})


class StateVector:
    """Finite linear combination of basis states; zero states are dropped."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[BasisState, Any] | None = None):
        self.terms: dict[BasisState, Any] = {}
        for s, c in (terms or {}).items():
            if not s.is_zero and not is_zero(c):
                self.terms[s] = self.terms[s] + c if s in self.terms else c

    @classmethod
    def basis_vector(cls, s: BasisState, c: Any = Fraction(1)) -> "StateVector":
        return cls({s: c})

    def coefficient(self, s: BasisState) -> Any:
        return self.terms.get(s, Fraction(0))

    def items(self) -> Iterator[tuple[BasisState, Any]]:
        return iter(sorted(self.terms.items(), key=lambda kv: kv[0].sort_key()))

    def is_exact_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: "StateVector") -> "StateVector":
        out = dict(self.terms)
        for s, c in other.terms.items():
            out[s] = out[s] + c if s in out else c
        return StateVector(out)

    def __neg__(self) -> "StateVector":
        return StateVector({s: -c for s, c in self.terms.items()})

    def __sub__(self, other: "StateVector") -> "StateVector":
        return self + (-other)

    def scale(self, c: Any) -> "StateVector":
        return StateVector({s: v * c for s, v in self.terms.items()})

    def map_coefficients(self, f) -> "StateVector":
        return StateVector({s: f(v) for s, v in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        zero = Fraction(0)
        return all(self.terms.get(k, zero) == other.terms.get(k, zero) for k in keys)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*e{s.label()}" for s, c in self.items())


def vector_pairing(w: InvertiblePolynomial, u: StateVector, v: StateVector) -> Any:
    acc: Any = Fraction(0)
    for s, a in u.terms.items():
        for t, b in v.terms.items():
            p = pairing(w, s, t)
            if p:
                acc = acc + a * b * p
    return acc


_INSERTION = re.compile(r"^\s*(?:j(?:\^(-?\d+))?|(1|id))\s*(?:\[([\d,\s]*)\])?\s*$")


def parse_insertion(w: InvertiblePolynomial, text: str) -> BasisState:
    """Parse ``j``, ``j^k``, ``1`` or a phase list ``(p1,...,pN)``, with an
    optional ``[i1,i2,...]`` suffix naming crossed variables (1-based)."""
    text = text.strip()
    crossed = None
    m = re.match(r"^(.*?)\s*\[([\d,\s]*)\]\s*$", text)
    if m:
        text = m.group(1)
        crossed = [int(v) - 1 for v in m.group(2).replace(" ", "").split(",") if v]
    if text.startswith("("):
        if not text.endswith(")"):
            raise StateError(f"malformed phase list {text!r}")
        try:
            phases = tuple(Fraction(p.strip()) for p in text[1:-1].split(","))
        except (ValueError, ZeroDivisionError) as exc:
            raise StateError(f"malformed phase list {text!r}") from exc
        g = DiagonalSymmetry(phases)
    else:
        m = _INSERTION.match(text)
        if not m:
            raise StateError(f"cannot parse insertion {text!r}; use j^k, 1 or (p1,...,pN)")
        if m.group(2):
            g = DiagonalSymmetry.identity(w.n)
        else:
            g = grading_element(w) ** int(m.group(1) or 1)
    if len(g) != w.n:
        raise StateError(f"insertion {text!r} has {len(g)} phases, expected {w.n}")
    try:
        check_member(w, g)
    except SymmetryError as exc:
        raise StateError(str(exc)) from exc
    return state(w, g, crossed)


def state_to_json(w: InvertiblePolynomial, e: BasisState) -> dict:
    return {"gamma": [str(p) for p in e.gamma.phases],
            "crossed": [j + 1 for j in sorted(e.crossed)],
            "balanced": e.balanced,
            "degree": str(degree(w, e))}
