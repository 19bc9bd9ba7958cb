"""Broad states: the D5 pairing and the three-point matrix of an even loop."""

from __future__ import annotations

from lgspin import DiagonalSymmetry, dual, loop_B_matrix, pairing, parse_polynomial, state
from lgspin.charclass import loop_uv
from lgspin.poly import D5, LOOP_2323
from lgspin.statespace import decorations


def main() -> None:
    w = parse_polynomial(D5)
    one = state(w, DiagonalSymmetry.identity(2))
    print(f"D5: identity state {one}, pairing with itself {pairing(w, one, one)}, dual {dual(w, one)}")

    w = parse_polynomial(LOOP_2323)
    decs = decorations(w, DiagonalSymmetry.identity(4))
    print("loop identity decorations:", ", ".join(f"{d} balanced={d.balanced}" for d in decs))
    u, v = loop_uv(w)
    print(f"u = {u}, v = {v}")
    B = loop_B_matrix(w)
    print("B =")
    for row in B:
        print("  " + "  ".join(str(x) for x in row))


if __name__ == "__main__":
    main()
