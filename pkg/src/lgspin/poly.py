"""Invertible polynomials: parsing, weights, atomic decomposition.

An invertible polynomial is a sum of N monomials in N variables whose
exponent matrix E is invertible.  Every such W splits into Fermat, chain and
loop pieces, W = sum_j x_j^{a_j} x_{t(j)}.  Variables are 0-based internally;
anything user-facing (JSON, CLI) is 1-based.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence


class PolynomialError(ValueError):
    """Raised for text or matrices outside the supported class."""


_TOKEN = re.compile(r"\s*(?:(x\d+|[xyz])|(\d+)|(\^)|(\*)|(\+))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolynomialError(f"unexpected character {text[pos]!r} at position {pos}")
        kinds = ("var", "int", "^", "*", "+")
        for kind, val in zip(kinds, m.groups()):
            if val is not None:
                out.append((kind, val))
        pos = m.end()
    return out


def _parse_monomials(text: str) -> list[dict[str, int]]:
    tokens = _tokenize(text)
    if not tokens:
        raise PolynomialError("empty polynomial")
    monos: list[dict[str, int]] = []
    cur: dict[str, int] = {}
    i = 0
    expect_factor = True
    while i < len(tokens):
        kind, val = tokens[i]
        if kind == "+":
            if expect_factor:
                raise PolynomialError("dangling '+'")
            monos.append(cur)
            cur, expect_factor = {}, True
            i += 1
        elif kind == "*":
            if expect_factor:
                raise PolynomialError("dangling '*'")
            expect_factor = True
            i += 1
        elif kind == "int":
            # a bare numeral is a coefficient; only 1 is allowed
            if int(val) != 1:
                raise PolynomialError(f"non-unit coefficient {val}")
            if i + 1 < len(tokens) and tokens[i + 1][0] == "^":
                raise PolynomialError("exponent on a coefficient")
            expect_factor = False
            i += 1
        elif kind == "var":
            e = 1
            if i + 1 < len(tokens) and tokens[i + 1][0] == "^":
                if i + 2 >= len(tokens) or tokens[i + 2][0] != "int":
                    raise PolynomialError("'^' must be followed by an unsigned integer")
                e = int(tokens[i + 2][1])
                if e == 0:
                    raise PolynomialError("zero exponent")
                i += 3
            else:
                i += 1
            cur[val] = cur.get(val, 0) + e
            expect_factor = False
        else:
            raise PolynomialError("'^' without a variable")
    if expect_factor:
        raise PolynomialError("polynomial ends with an operator")
    monos.append(cur)
    for m in monos:
        if not m:
            raise PolynomialError("constant monomial")
    return monos


def _var_order(names: set[str]) -> list[str]:
    indexed = [n for n in names if n[1:].isdigit()]
    letters = [n for n in names if not n[1:].isdigit()]
    if indexed and letters:
        raise PolynomialError("mixing x<k> variables with x/y/z")
    if letters:
        return sorted(letters, key="xyz".index)
    return sorted(indexed, key=lambda n: int(n[1:]))


def _det(matrix: Sequence[Sequence[int]]) -> Fraction:
    m = [[Fraction(v) for v in row] for row in matrix]
    n, det = len(m), Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return det


def solve_rational(matrix: Sequence[Sequence[int]], rhs: Sequence) -> list[Fraction]:
    """Exact solution of matrix * x = rhs by Gauss-Jordan elimination."""
    n = len(matrix)
    m = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            raise PolynomialError("singular exponent matrix")
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [v / piv for v in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return [m[r][n] for r in range(n)]


@dataclass(frozen=True)
class AtomicType:
    kind: str  # "fermat", "chain" or "loop"
    exps: tuple[int, ...]
    variables: tuple[int, ...]  # 0-based, in chain/loop order

    def __str__(self) -> str:
        return f"{self.kind.capitalize()}({','.join(map(str, self.exps))})"

    def to_json(self) -> dict:
        return {"kind": self.kind, "exps": list(self.exps),
                "vars": [v + 1 for v in self.variables]}


@dataclass(frozen=True)
class InvertiblePolynomial:
    """Exponent matrix of W; row j is the monomial x_j^{a_j} x_{t(j)}."""

    matrix: tuple[tuple[int, ...], ...]
    names: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        n = len(self.matrix)
        if n == 0 or any(len(r) != n for r in self.matrix):
            raise PolynomialError("exponent matrix must be square and non-empty")
        for j, row in enumerate(self.matrix):
            if any(v < 0 for v in row):
                raise PolynomialError("negative exponent")
            off = [k for k in range(n) if k != j and row[k] != 0]
            if len(off) > 1 or (off and row[off[0]] != 1):
                raise PolynomialError(f"monomial {j + 1} is not of the form x_j^a x_k")
            if row[j] < 2:
                raise PolynomialError(f"diagonal entry {row[j]} < 2 in monomial {j + 1}")
        if _det(self.matrix) == 0:
            raise PolynomialError("exponent matrix is singular")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"x{j + 1}" for j in range(n)))
        self.decomposition  # reject graphs that are not unions of atomic types

    @property
    def n(self) -> int:
        return len(self.matrix)

    @cached_property
    def t(self) -> tuple[int, ...]:
        out = []
        for j, row in enumerate(self.matrix):
            off = [k for k in range(self.n) if k != j and row[k]]
            out.append(off[0] if off else j)
        return tuple(out)

    @cached_property
    def s(self) -> tuple[int | None, ...]:
        """s(k) = j with t(j) = k != j, or None (standing for minus infinity)."""
        out: list[int | None] = [None] * self.n
        for j, k in enumerate(self.t):
            if k != j:
                out[k] = j
        return tuple(out)

    @cached_property
    def a(self) -> tuple[int, ...]:
        return tuple(self.matrix[j][j] - (1 if self.t[j] == j else 0) for j in range(self.n))

    @cached_property
    def determinant(self) -> int:
        return int(_det(self.matrix))

    @cached_property
    def charges(self) -> tuple[Fraction, ...]:
        return tuple(solve_rational(self.matrix, [1] * self.n))

    @cached_property
    def weight_system(self) -> tuple[tuple[int, ...], int]:
        q = self.charges
        if any(v <= 0 for v in q):
            raise PolynomialError("weights are not positive")
        d = math.lcm(*(v.denominator for v in q))
        return tuple(int(v * d) for v in q), d

    @property
    def weights(self) -> tuple[int, ...]:
        return self.weight_system[0]

    @property
    def degree(self) -> int:
        return self.weight_system[1]

    @cached_property
    def central_charge(self) -> Fraction:
        return sum((1 - 2 * q for q in self.charges), Fraction(0))

    @property
    def is_calabi_yau(self) -> bool:
        return sum(self.weights) == self.degree

    @cached_property
    def decomposition(self) -> tuple[AtomicType, ...]:
        return _decompose(self)

    @cached_property
    def component_of(self) -> tuple[int, ...]:
        """Index into ``decomposition`` for every variable."""
        out = [0] * self.n
        for c, comp in enumerate(self.decomposition):
            for v in comp.variables:
                out[v] = c
        return tuple(out)

    @cached_property
    def is_chain(self) -> bool:
        """True when W is a single chain x_1^{a_1}x_2 + ... + x_N^{a_N+1} in index order."""
        return (len(self.decomposition) == 1 and self.decomposition[0].kind in ("chain", "fermat")
                and self.decomposition[0].variables == tuple(range(self.n)))

    @cached_property
    def has_excluded_monomials(self) -> bool:
        """Flags pieces x^a y + y^2 and x^a y + y^2 x."""
        for comp in self.decomposition:
            if comp.kind == "chain" and comp.exps[-1] == 1:
                return True
            if comp.kind == "loop" and len(comp.exps) == 2 and 2 in comp.exps:
                return True
        return False

    def mirror(self) -> "InvertiblePolynomial":
        """Berglund-Huebsch transpose."""
        return InvertiblePolynomial(tuple(zip(*self.matrix)))

    def to_text(self) -> str:
        out = []
        for row in self.matrix:
            f = [self.names[k] + (f"^{e}" if e > 1 else "") for k, e in enumerate(row) if e]
            out.append("*".join(f))
        return " + ".join(out)

    def __str__(self) -> str:
        return self.to_text()


def _decompose(w: InvertiblePolynomial) -> tuple[AtomicType, ...]:
    n, t = w.n, w.t
    preds: list[list[int]] = [[] for _ in range(n)]
    for j in range(n):
        if t[j] != j:
            preds[t[j]].append(j)
    if any(len(p) > 1 for p in preds):
        raise PolynomialError("two monomials point at the same variable; not an invertible type")
    seen: set[int] = set()
    comps: list[AtomicType] = []
    for start in range(n):
        if start in seen:
            continue
        # walk back to the head of a chain, or around a loop
        head, steps = start, 0
        while preds[head] and steps <= n:
            head = preds[head][0]
            steps += 1
            if head == start:
                break
        if preds[head] and head == start and t[start] != start:
            cyc = [start]
            k = t[start]
            while k != start:
                cyc.append(k)
                k = t[k]
            comps.append(AtomicType("loop", tuple(w.a[v] for v in cyc), tuple(cyc)))
            seen.update(cyc)
            continue
        path = [head]
        while t[path[-1]] != path[-1]:
            path.append(t[path[-1]])
        seen.update(path)
        if len(path) == 1:
            comps.append(AtomicType("fermat", (w.a[head],), (head,)))
        else:
            comps.append(AtomicType("chain", tuple(w.a[v] for v in path), tuple(path)))
    comps.sort(key=lambda c: min(c.variables))
    return tuple(comps)


def parse_polynomial(text: str) -> InvertiblePolynomial:
    """Parse text such as ``"x1^2*x2 + x2^4"`` into its exponent matrix."""
    monos = _parse_monomials(text)
    names = _var_order({v for m in monos for v in m})
    if len(monos) != len(names):
        raise PolynomialError(f"{len(monos)} monomials in {len(names)} variables")
    idx = {v: i for i, v in enumerate(names)}
    rows = []
    for m in monos:
        row = [0] * len(names)
        for v, e in m.items():
            row[idx[v]] = e
        rows.append(row)
    owners: dict[int, list[int]] = {}
    for r, row in enumerate(rows):
        big = [k for k, e in enumerate(row) if e >= 2]
        nz = [k for k, e in enumerate(row) if e]
        if len(nz) > 2:
            raise PolynomialError("monomial with more than two variables")
        if len(big) != 1:
            if len(nz) == 2 and not big:
                raise PolynomialError("diagonal entry < 2: monomial x_j*x_k")
            if not big:
                raise PolynomialError("diagonal entry < 2: linear monomial")
            raise PolynomialError("monomial is not of the form x_j^a x_k")
        owners.setdefault(big[0], []).append(r)
    if any(len(v) != 1 for v in owners.values()) or len(owners) != len(names):
        raise PolynomialError("monomials do not match variables one-to-one")
    matrix = tuple(tuple(rows[owners[j][0]]) for j in range(len(names)))
    return InvertiblePolynomial(matrix, tuple(names))


def chain(*a: int) -> InvertiblePolynomial:
    """The chain x_1^{a_1}x_2 + ... + x_{N-1}^{a_{N-1}}x_N + x_N^{a_N+1}."""
    n = len(a)
    rows = []
    for j in range(n):
        row = [0] * n
        if j < n - 1:
            row[j], row[j + 1] = a[j], 1
        else:
            row[j] = a[j] + 1
        rows.append(tuple(row))
    return InvertiblePolynomial(tuple(rows))


def loop(*a: int) -> InvertiblePolynomial:
    """The loop x_1^{a_1}x_2 + ... + x_N^{a_N}x_1."""
    n = len(a)
    rows = []
    for j in range(n):
        row = [0] * n
        row[j] = a[j]
        row[(j + 1) % n] += 1
        rows.append(tuple(row))
    return InvertiblePolynomial(tuple(rows))


def decompose(w: InvertiblePolynomial) -> tuple[AtomicType, ...]:
    return w.decomposition


def weight_system(w: InvertiblePolynomial) -> tuple[tuple[int, ...], int]:
    return w.weight_system


def mirror(w: InvertiblePolynomial) -> InvertiblePolynomial:
    return w.mirror()


def is_calabi_yau(w: InvertiblePolynomial) -> bool:
    return w.is_calabi_yau


def central_charge(w: InvertiblePolynomial) -> Fraction:
    return w.central_charge


FIVE_CHAIN = "x1^2*x2 + x2^3*x3 + x3^5*x4 + x4^10*x5 + x5^11"
D5 = "x1^2*x2 + x2^4"
LOOP_2323 = "x1^2*x2 + x2^3*x3 + x3^2*x4 + x4^3*x1"
