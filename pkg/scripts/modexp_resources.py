#!/usr/bin/env python3
"""Resource table for full modular exponentiation across bit-widths.

For each width, picks the largest prime modulus and reports Toffoli count,
depth, and qubit totals under both adder regimes.

Example:
    python scripts/modexp_resources.py --widths 16,32,64,128
"""

import argparse

from modmult.circuit import DepthModel
from modmult.modexp import build_modexp
from modmult.numtheory import nth_largest_prime


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--widths", default="16,32,64,128")
    ap.add_argument("--base", type=int, default=2)
    args = ap.parse_args()

    header = f"{'n':>4} {'regime':<9} {'toffoli':>12} {'cnot':>12} {'depth':>12} {'ancillae':>9} {'qubits':>7}"
    print(header)
    for n in (int(tok) for tok in args.widths.split(",")):
        m = int(nth_largest_prime(n, 1))
        for name, dm in (("ripple", DepthModel.ripple()), ("lookahead", DepthModel.lookahead())):
            r = build_modexp(m, args.base, depth_model=dm)
            print(f"{n:>4} {name:<9} {r.toffoli:>12} {r.cnot:>12} {r.depth:>12} "
                  f"{r.ancilla_count:>9} {r.qubit_count:>7}")


if __name__ == "__main__":
    main()
