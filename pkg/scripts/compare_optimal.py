#!/usr/bin/env python3
"""Compare heuristic synthesis against the exact optimum for small widths.

Prints, per bit-width, the floor-violation count (must be 0) and the
average heuristic/optimal Toffoli ratio.

Example:
    python scripts/compare_optimal.py --bits 7..9
"""

import argparse
from math import gcd

from modmult.circuit import circuit_cost
from modmult.numtheory import enumerate_semiprimes
from modmult.optimal import OptimalSearch
from modmult.synth import SynthesisConfig, synthesize


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bits", default="7..9")
    ap.add_argument("--lookahead", type=int, default=3)
    args = ap.parse_args()
    if ".." in args.bits:
        lo, hi = args.bits.split("..", 1)
        widths = range(int(lo), int(hi) + 1)
    else:
        widths = [int(tok) for tok in args.bits.split(",")]

    cfg = SynthesisConfig(lookahead_depth=args.lookahead)
    for n in widths:
        violations = pairs = h_sum = o_sum = 0
        for sp in enumerate_semiprimes(n):
            m = sp.value
            floor = OptimalSearch(m, cfg.cost_model).all_costs()
            for c in range(2, m):
                if gcd(c, m) != 1:
                    continue
                h = circuit_cost(synthesize(c, m, cfg), cfg.cost_model)[0]
                violations += h < floor[c]
                h_sum += h
                o_sum += floor[c]
                pairs += 1
        print(f"n={n:>2} pairs={pairs:>6} floor_violations={violations} "
              f"avg_ratio={h_sum / o_sum:.4f}")


if __name__ == "__main__":
    main()
