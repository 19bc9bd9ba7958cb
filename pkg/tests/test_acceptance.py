"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v -s`` to see the lines as they are
produced; they are also repeated in the terminal summary.  Running the file
directly with python prints the same lines.
"""

from __future__ import annotations

import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

from lgspin.charclass import correlator3, loop_B_matrix
from lgspin.givental import (M_product, big_I, extract_correlators, mirror_map_and_J, pf_check,
                             restrict_big_I, small_I, small_J_relation, twisted_I_oracle)
from lgspin.poly import D5, FIVE_CHAIN, LOOP_2323, parse_polynomial
from lgspin.statespace import pairing, state
from lgspin.symmetry import aut_group, grading_element

sys.path.insert(0, str(Path(__file__).parent))
from _sampling import pole_tuples  # noqa: E402

RESULTS: list[str] = []


def report(n: int, ok: bool, what: str, elapsed: float, limit: float) -> None:
    fast = elapsed < limit
    status = "PASS" if ok and fast else "FAIL"
    line = f"ACCEPTANCE {n:2d} {status}: {what} [{elapsed:.3f}s, limit {limit:g}s]"
    if ok and not fast:
        line += " (value correct, too slow)"
    RESULTS.append(line)
    print(line)
    assert ok, line
    assert fast, line


def _j(w, k):
    return state(w, grading_element(w) ** k)


def test_1_weights():
    # each attempt parses and solves from scratch; report the best of five
    best = float("inf")
    for _ in range(5):
        t = time.perf_counter()
        w = parse_polynomial(FIVE_CHAIN)
        ws = w.weight_system
        best = min(best, time.perf_counter() - t)
    ok = ws == ((4, 3, 2, 1, 1), 11)
    report(1, ok, f"5-chain weights {ws[0]}, d = {ws[1]}", best, 1e-3)


def test_2_pairing_sweep():
    t = time.perf_counter()
    checked, bad = 0, 0
    for text in (FIVE_CHAIN, D5):
        w = parse_polynomial(text)
        unit = _j(w, 1)
        for g in aut_group(w):
            e, f = state(w, g), state(w, g.inverse())
            checked += 1
            if correlator3(w, e, f, unit) != pairing(w, e, f):
                bad += 1
    elapsed = time.perf_counter() - t
    report(2, bad == 0 and checked == 3308,
           f"<e_g, e_g^-1, e_j> = pairing on {checked} pairs, {bad} mismatches", elapsed, 10)


def test_3_three_point():
    w = parse_polynomial(FIVE_CHAIN)
    e3, e6 = _j(w, 3), _j(w, 6)
    t = time.perf_counter()
    v = correlator3(w, e3, e3, e6)
    elapsed = time.perf_counter() - t
    report(3, v == -2, f"<j^3, j^3, j^6> = {v}", elapsed, 0.1)


def test_4_loop_matrix():
    w = parse_polynomial(LOOP_2323)
    t = time.perf_counter()
    B = loop_B_matrix(w)
    elapsed = time.perf_counter() - t
    report(4, B == ((4, 1), (1, 9)), f"loop B = {[[str(x) for x in r] for r in B]}", elapsed, 1)


def test_5_picard_fuchs():
    w = parse_polynomial(FIVE_CHAIN)
    t = time.perf_counter()
    ok = pf_check(w, small_I(w, 25), 25)
    elapsed = time.perf_counter() - t
    report(5, ok, "Picard-Fuchs operator annihilates small I through t^25", elapsed, 30)


def test_6_restriction():
    w = parse_polynomial(FIVE_CHAIN)
    t = time.perf_counter()
    big = big_I(w, {"h": _j(w, 2)}, 14)
    ok = restrict_big_I(w, big, "h", 15) == small_I(w, 15)
    elapsed = time.perf_counter() - t
    report(6, ok, "t I_big(-t e_{j^2}) = I_small(t) through t^15", elapsed, 60)


def test_7_oracle():
    w = parse_polynomial(FIVE_CHAIN)
    G = aut_group(w).elements()
    rng = random.Random(20240611)
    tuples = [[rng.choice(G) for _ in range(rng.randint(0, 4))] for _ in range(200)]
    tuples += pole_tuples(w, rng, 20)
    t = time.perf_counter()
    bad = sum(1 for gs in tuples if twisted_I_oracle(w, gs).coeff != M_product(w, gs).coeff)
    elapsed = time.perf_counter() - t
    report(7, bad == 0, f"eps-limit oracle = M-product on {len(tuples)} tuples "
                        f"(20 with a paired pole), {bad} mismatches", elapsed, 60)


EXTRACTED: dict[str, Fraction] = {}


def test_8_extracted_correlators():
    w = parse_polynomial(FIVE_CHAIN)
    params = {f"j^{k}": _j(w, k) for k in (2, 3, 4, 6)}
    e6 = params["j^6"]
    targets = [(["j^2"] * 4, e6), (["j^2", "j^2", "j^3"], e6), (["j^2", "j^4"], e6), (["j^3", "j^3"], e6)]
    t = time.perf_counter()
    vals = extract_correlators(w, params, targets, n_max=6)
    elapsed = time.perf_counter() - t
    EXTRACTED.update(zip(("c1", "c2", "c3", "c4"), vals))
    ok = vals[:3] == [Fraction(-2, 121), Fraction(-4, 11), Fraction(1)]
    report(8, ok, "<j^2^4 j^6>, <j^2^2 j^3 j^6>, <j^2 j^4 j^6> = "
                  + ", ".join(str(v) for v in vals[:3]), elapsed, 300)


def test_9_relation():
    w = parse_polynomial(FIVE_CHAIN)
    t = time.perf_counter()
    if not EXTRACTED:
        test_8_extracted_correlators()
    rel, value = small_J_relation(w, _j(w, 6), 4)
    # normalize so that the <j^3 j^3 j^6> coefficient is 1/4, as in the stated form
    scale = Fraction(1, 4) / rel[("j^3", "j^3")]
    coeffs = {k: v * scale for k, v in rel.items()}
    c = {("j^2",) * 4: EXTRACTED["c1"], ("j^2", "j^2", "j^3"): EXTRACTED["c2"],
         ("j^2", "j^4"): EXTRACTED["c3"], ("j^3", "j^3"): EXTRACTED["c4"]}
    lhs = sum((coeffs[k] * c[k] for k in coeffs), Fraction(0))
    elapsed = time.perf_counter() - t
    expected = {("j^2",) * 4: Fraction(121, 12), ("j^2", "j^2", "j^3"): Fraction(-11, 2),
                ("j^2", "j^4"): Fraction(5, 3), ("j^3", "j^3"): Fraction(1, 4)}
    ok = coeffs == expected and lhs == value * scale == 3 and EXTRACTED["c4"] == -2
    report(9, ok, f"(121/12)c1 - (11/2)c2 + (5/3)c3 + (1/4)c4 = {lhs}, "
                  f"coefficients read off the small J-function", elapsed, 300)


def test_9b_mirror_map_sign_note():
    """Not a criterion: records the sign of the leading mirror-map term."""
    w = parse_polynomial(FIVE_CHAIN)
    J = mirror_map_and_J(w, small_I(w, 12))
    lead = J.tau.coefficient(_j(w, 2)).coefficient((("t", 1),))
    line = (f"NOTE: mirror map tau(t) = {lead} t e_(j^2) + O(t^2); "
            "with I(t) = t I_big(-t e_(j^2)) the leading sign is negative")
    RESULTS.append(line)
    print(line)
    assert lead == -1


def test_10_property_suites():
    """Runs the property module in a subprocess and checks the time budget."""
    import subprocess
    t = time.perf_counter()
    res = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
                          str(Path(__file__).parent / "test_properties.py")],
                         capture_output=True, text=True)
    elapsed = time.perf_counter() - t
    tail = res.stdout.strip().splitlines()[-1] if res.stdout.strip() else res.stderr[-200:]
    report(10, res.returncode == 0, f"8 property suites x 1000 cases: {tail}", elapsed, 120)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
