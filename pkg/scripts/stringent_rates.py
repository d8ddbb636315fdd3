"""Stringency rate of G(n, 1/2) against the union bound on non-primeness."""

from __future__ import annotations

import argparse
from fractions import Fraction

from lexboundary.randgraphs import estimate_stringent_rate, prime_failure_bound


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="8,12,16,20,25,30")
    ap.add_argument("--p", default="1/2")
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    p = Fraction(args.p)
    print("n  stringent_rate  prime_lower_bound")
    for n in (int(x) for x in args.sizes.split(",")):
        rate, _ = estimate_stringent_rate(n, p, args.trials, args.seed)
        bound = prime_failure_bound(n, p)
        print(f"{n:2d}  {float(rate):.3f}  {max(0.0, 1 - float(bound)):.6f}")


if __name__ == "__main__":
    main()
