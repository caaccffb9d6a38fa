"""Command-line interface.

Subcommands: primes, semiprimes, synth, optimal, verify, modexp, bench.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import bench as bench_mod
from .circuit import (
    CostModel,
    DepthModel,
    circuit_cost,
    circuit_depth,
    load_model_file,
    parse,
    serialize,
)
from .modexp import build_modexp
from .numtheory import enumerate_semiprimes, nth_largest_prime
from .optimal import OptimalSearch
from .simulate import verify
from .synth import (
    SynthesisConfig,
    baseline_synthesize,
    euclid_trace,
    synthesize,
    trace_to_circuit,
)


def _models(path: str | None) -> tuple[CostModel, DepthModel]:
    if path:
        return load_model_file(path)
    return CostModel(), DepthModel.ripple()


def _cmd_primes(args) -> int:
    print(nth_largest_prime(args.bits, args.rank))
    return 0


def _cmd_semiprimes(args) -> int:
    for m in enumerate_semiprimes(args.bits):
        print(m.value)
    return 0


def _write_or_print(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_synth(args) -> int:
    cost, _ = _models(args.cost_model)
    cfg = SynthesisConfig(
        lookahead_depth=args.lookahead,
        cost_model=cost,
        use_special_cases=not args.no_special,
    )
    if args.method == "baseline":
        circ = baseline_synthesize(args.multiplier, args.modulus)
    elif args.method == "euclid":
        circ = trace_to_circuit(euclid_trace(args.modulus, args.multiplier), args.modulus)
    else:  # heuristic / auto both dispatch through synthesize
        circ = synthesize(args.multiplier, args.modulus, cfg)
    _write_or_print(serialize(circ), args.output)
    return 0


def _cmd_optimal(args) -> int:
    cost, _ = _models(args.cost_model)
    search = OptimalSearch(args.modulus, cost)
    if args.all:
        for c, value in sorted(search.all_costs().items()):
            print(f"{c},{value}")
        return 0
    if args.multiplier is None:
        print("error: provide --multiplier or --all", file=sys.stderr)
        return 2
    circ = search.circuit(args.multiplier)
    _write_or_print(serialize(circ), args.output)
    return 0


def _cmd_verify(args) -> int:
    with open(args.circuit, encoding="utf-8") as fh:
        circ = parse(fh.read())
    if args.samples is not None:
        report = verify(circ, exhaustive=False, samples=args.samples, seed=args.seed)
    else:
        report = verify(circ, exhaustive=True)
    print(report.summary())
    for x, res, other in report.failures:
        print(f"  x={x}: result={res} other={other}")
    return 0 if report.passed else 1


def _cmd_modexp(args) -> int:
    cost, _ = _models(args.cost_model)
    depth = DepthModel.lookahead() if args.adder == "lookahead" else DepthModel.ripple()
    cfg = SynthesisConfig(cost_model=cost)
    result = build_modexp(
        args.modulus, args.base, cfg, depth, keep_identity_gates=args.keep_identity_gates
    )
    summary = {
        "toffoli": result.toffoli,
        "cnot": result.cnot,
        "depth": result.depth,
        "positions": result.positions,
        "distinct_blocks": result.distinct_blocks,
        "ancillae": result.ancilla_count,
        "qubits": result.qubit_count,
    }
    if args.output_dir:
        os.makedirs(args.output_dir, exist_ok=True)
        seen = set()
        for block, _ in result.blocks:
            if block.multiplier in seen:
                continue
            seen.add(block.multiplier)
            path = os.path.join(args.output_dir, f"um_c{block.multiplier}.txt")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(serialize(block))
        with open(os.path.join(args.output_dir, "summary.json"), "w", encoding="utf-8") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if args.stats or not args.output_dir:
        print(json.dumps(summary, indent=2, sort_keys=True))
    return 0


def _parse_bits(spec: str) -> tuple[int, ...]:
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(tok) for tok in spec.split(","))


def _cmd_bench(args) -> int:
    cost, depth = _models(args.cost_model)
    moduli = None
    if args.moduli:
        with open(args.moduli, encoding="utf-8") as fh:
            moduli = tuple(int(line) for line in fh if line.strip())
    cfg = bench_mod.SweepConfig(
        bits=_parse_bits(args.bits),
        moduli=moduli,
        multiplier_cap=args.multiplier_cap,
        methods=tuple(args.methods.split(",")),
        jobs=args.jobs,
        cost_model=cost,
        depth_model=depth,
        cache_dir=args.cache,
        timing=args.timing,
    )
    records = bench_mod.bench_sweep(cfg)
    bench_mod.write_records_csv(records, args.out)
    rows, series = bench_mod.aggregate(records)
    if args.summary:
        bench_mod.write_summary_csv(rows, args.summary)
    ratio_path = os.path.join(os.path.dirname(os.path.abspath(args.out)), "ratio_vs_bits.csv")
    bench_mod.write_ratio_csv(series, ratio_path)
    errors = [r for r in records if r.error]
    if errors:
        print(f"{len(errors)} records carry errors", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modmult")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("primes", help="print the rank-th largest prime of a bit-width")
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--rank", type=int, default=1)
    p.set_defaults(func=_cmd_primes)

    p = sub.add_parser("semiprimes", help="print all semiprime moduli of a bit-width")
    p.add_argument("--bits", type=int, required=True)
    p.set_defaults(func=_cmd_semiprimes)

    p = sub.add_parser("synth", help="synthesize one multiplication circuit")
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--multiplier", type=int, required=True)
    p.add_argument(
        "--method",
        choices=["heuristic", "baseline", "euclid", "auto"],
        default="auto",
    )
    p.add_argument("--lookahead", type=int, default=3)
    p.add_argument("--cost-model", dest="cost_model")
    p.add_argument("--no-special", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("optimal", help="exact minimum-cost circuits (small moduli)")
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--multiplier", type=int)
    p.add_argument("--all", action="store_true", help="stream C,cost CSV lines")
    p.add_argument("--cost-model", dest="cost_model")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_optimal)

    p = sub.add_parser("verify", help="simulate a circuit file against C*x mod M")
    p.add_argument("--circuit", required=True)
    p.add_argument("--exhaustive", action="store_true", default=False)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=2024)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("modexp", help="assemble a full modular-exponentiation circuit")
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--base", type=int, default=2)
    p.add_argument("--adder", choices=["ripple", "lookahead"], default="ripple")
    p.add_argument("--stats", action="store_true")
    p.add_argument("--keep-identity-gates", action="store_true")
    p.add_argument("--cost-model", dest="cost_model")
    p.add_argument("-o", "--output-dir", dest="output_dir")
    p.set_defaults(func=_cmd_modexp)

    p = sub.add_parser("bench", help="run a benchmark sweep and emit CSV")
    p.add_argument("--bits", default="7")
    p.add_argument("--moduli", help="file with one modulus per line")
    p.add_argument("--multiplier-cap", type=int, dest="multiplier_cap")
    p.add_argument("--methods", default="heuristic,baseline")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--cost-model", dest="cost_model")
    p.add_argument("--out", required=True)
    p.add_argument("--summary")
    p.add_argument("--cache")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
