"""Walk through the genus-zero data of x1^2 x2 + x2^3 x3 + x3^5 x4 + x4^10 x5 + x5^11."""

from __future__ import annotations

from lgspin import (aut_group, basis, correlator3, extract_correlators, grading_element,
                    mirror_map_and_J, parse_polynomial, pf_check, small_I, state)
from lgspin.givental import small_J_relation
from lgspin.poly import FIVE_CHAIN
from lgspin.statespace import degree


def main() -> None:
    w = parse_polynomial(FIVE_CHAIN)
    weights, d = w.weight_system
    print(f"W = {w}")
    print(f"weights {weights}, d = {d}, c_hat = {w.central_charge}, CY: {w.is_calabi_yau}")
    G = aut_group(w)
    print(f"|Aut(W)| = {G.order}, invariant factors {G.invariant_factors}")
    b = basis(w)
    narrow2 = sum(1 for e in b if not e.broad and degree(w, e) == 2)
    print(f"state space: {len(b)} basis vectors, {narrow2} narrow of degree 2")

    jj = grading_element(w)
    e = {k: state(w, jj ** k) for k in range(1, 12)}
    print(f"<j^3, j^3, j^6> = {correlator3(w, e[3], e[3], e[6])}")

    I = small_I(w, 25)
    print(f"Picard-Fuchs check through t^25: {pf_check(w, I, 25)}")
    J = mirror_map_and_J(w, small_I(w, 6))
    print(f"mirror map: tau(t) = {J.tau}")

    params = {f"j^{k}": e[k] for k in (2, 3, 4, 6)}
    targets = [(["j^2"] * 4, e[6]), (["j^2", "j^2", "j^3"], e[6]), (["j^2", "j^4"], e[6]),
               (["j^3", "j^3"], e[6])]
    c1, c2, c3, c4 = extract_correlators(w, params, targets, n_max=6)
    print(f"<j^2 j^2 j^2 j^2 j^6> = {c1}, <j^2 j^2 j^3 j^6> = {c2}, <j^2 j^4 j^6> = {c3}, "
          f"<j^3 j^3 j^6> = {c4}")
    rel, value = small_J_relation(w, e[6], 4)
    scale = 242
    print("relation from the small J-function:")
    for k, v in rel.items():
        print(f"  {v * scale} * <{' '.join(k)} j^6>")
    print(f"  = {value * scale}")


if __name__ == "__main__":
    main()
