"""Compare the eps-expansion limit of the twisted coefficient with the closed-form product."""

from __future__ import annotations

import argparse
import random
import time

from lgspin import aut_group, parse_polynomial
from lgspin.givental import M_product, twisted_I_oracle
from lgspin.poly import FIVE_CHAIN


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--max-len", type=int, default=4)
    args = ap.parse_args()
    w = parse_polynomial(FIVE_CHAIN)
    G = aut_group(w).elements()
    rng = random.Random(args.seed)
    t = time.perf_counter()
    bad = 0
    for _ in range(args.count):
        gs = [rng.choice(G) for _ in range(rng.randint(0, args.max_len))]
        m = M_product(w, gs)
        o = twisted_I_oracle(w, gs)
        if o.coeff != m.coeff:
            bad += 1
            print(f"mismatch at D = {m.D}: {o.coeff} vs {m.coeff}")
    print(f"{args.count} tuples, {bad} mismatches, {time.perf_counter() - t:.2f}s")


if __name__ == "__main__":
    main()
