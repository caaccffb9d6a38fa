#!/usr/bin/env python3
"""Benchmark sweep over semiprime moduli: records, summary, and ratio CSVs.

Example:
    python scripts/run_sweep.py --bits 7..10 --methods heuristic,baseline --out results/
"""

import argparse
import os

from modmult.bench import SweepConfig, aggregate, bench_sweep, write_ratio_csv, write_records_csv, write_summary_csv


def parse_bits(spec: str) -> tuple[int, ...]:
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(tok) for tok in spec.split(","))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bits", default="7..9")
    ap.add_argument("--methods", default="heuristic,baseline")
    ap.add_argument("--multiplier-cap", type=int, default=None)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--timing", action="store_true")
    ap.add_argument("--cache", default=None)
    ap.add_argument("--out", default="results")
    args = ap.parse_args()

    cfg = SweepConfig(
        bits=parse_bits(args.bits),
        methods=tuple(args.methods.split(",")),
        multiplier_cap=args.multiplier_cap,
        jobs=args.jobs,
        timing=args.timing,
        cache_dir=args.cache,
    )
    records = bench_sweep(cfg)
    os.makedirs(args.out, exist_ok=True)
    rows, series = aggregate(records)
    write_records_csv(records, os.path.join(args.out, "records.csv"))
    write_summary_csv(rows, os.path.join(args.out, "summary.csv"))
    write_ratio_csv(series, os.path.join(args.out, "ratio_vs_bits.csv"))
    for row in rows:
        print(f"n={row.bits:>2} {row.method:<9} count={row.count:>5} "
              f"max={row.max_toffoli:>6} avg={row.avg_toffoli:.1f}")
    for bits, boh, hoo in series:
        boh_s = f"{boh:.3f}" if boh else "-"
        hoo_s = f"{hoo:.3f}" if hoo else "-"
        print(f"n={bits:>2} baseline/heuristic={boh_s} heuristic/optimal={hoo_s}")


if __name__ == "__main__":
    main()
