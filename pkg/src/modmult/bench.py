"""Benchmark harness: sweeps over semiprime moduli and coprime
multipliers, per-method records, Table-style aggregation, ratio series,
CSV emission, and a content-addressed result cache.

Output ordering is deterministic (modulus, multiplier, method); with
timing disabled (the default) two identical sweeps produce byte-identical
CSV files.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import gcd
from statistics import mean

from .circuit import CostModel, DepthModel, circuit_cost, circuit_depth
from .numtheory import Modulus, enumerate_semiprimes
from .optimal import DEFAULT_BIT_CAP, OptimalSearch
from .simulate import verify
from .synth import (
    SynthesisConfig,
    baseline_synthesize,
    euclid_trace,
    synthesize,
    trace_to_circuit,
)

__all__ = [
    "METHODS",
    "BenchRecord",
    "SweepConfig",
    "MixedModels",
    "CacheCorrupt",
    "bench_sweep",
    "aggregate",
    "ratio_series",
    "records_to_csv",
    "write_records_csv",
    "write_summary_csv",
    "write_ratio_csv",
    "cache_key",
    "cache_lookup",
    "cache_store",
]

METHODS = ("heuristic", "baseline", "euclid", "optimal")

CSV_HEADER = "bits,modulus,multiplier,method,toffoli,cnot,depth,ops,qubits,seconds,model_hash"

# multiplier selection defaults: every coprime C at or below this width,
# the first 5000 above
_ALL_C_BIT_CAP = 12
_LARGE_C_CAP = 5000

_EXHAUSTIVE_BIT_CAP = 12
_SAMPLE_COUNT = 1000
_SAMPLE_SEED = 2024


class MixedModels(ValueError):
    """Aggregation refused: records computed under different cost models."""


class CacheCorrupt(RuntimeError):
    pass


@dataclass(frozen=True)
class BenchRecord:
    bits: int
    modulus: int
    multiplier: int
    method: str
    toffoli: int
    cnot: int
    depth: int
    op_count: int
    qubits: int
    wall_seconds: float
    cost_model_hash: str
    error: str = ""

    def csv_row(self) -> str:
        return (
            f"{self.bits},{self.modulus},{self.multiplier},{self.method},"
            f"{self.toffoli},{self.cnot},{self.depth},{self.op_count},"
            f"{self.qubits},{self.wall_seconds:.6f},{self.cost_model_hash}"
        )


@dataclass(frozen=True)
class SweepConfig:
    bits: tuple[int, ...] = (7,)
    moduli: tuple[int, ...] | None = None  # explicit list overrides bits
    multiplier_cap: int | None = None  # None = width-based default
    multiplier_start: int = 2
    methods: tuple[str, ...] = ("heuristic", "baseline")
    jobs: int = 1
    cost_model: CostModel = field(default_factory=CostModel)
    depth_model: DepthModel = field(default_factory=DepthModel.ripple)
    synthesis: SynthesisConfig | None = None
    cache_dir: str | None = None
    timing: bool = False
    verify_circuits: bool = True
    optimal_bit_cap: int = DEFAULT_BIT_CAP

    def __post_init__(self) -> None:
        for method in self.methods:
            if method not in METHODS:
                raise ValueError(f"unknown method {method!r}")
        if "optimal" in self.methods:
            widths = [m.bit_length() for m in self.moduli] if self.moduli else self.bits
            if max(widths, default=0) > self.optimal_bit_cap:
                raise ValueError("optimal method requested beyond its bit cap")

    def synthesis_config(self) -> SynthesisConfig:
        return self.synthesis or SynthesisConfig(cost_model=self.cost_model)


def _multipliers(m: int, cfg: SweepConfig) -> list[int]:
    cap = cfg.multiplier_cap
    if cap is None:
        cap = None if m.bit_length() <= _ALL_C_BIT_CAP else _LARGE_C_CAP
    out = []
    c = cfg.multiplier_start
    while c < m and (cap is None or len(out) < cap):
        if gcd(c, m) == 1:
            out.append(c)
        c += 1
    return out


def _synthesize_method(method: str, c: int, m: int, cfg: SweepConfig, opt: OptimalSearch | None):
    scfg = cfg.synthesis_config()
    if method == "heuristic":
        return synthesize(c, m, scfg)
    if method == "baseline":
        return baseline_synthesize(c, m)
    if method == "euclid":
        if c == 1:
            return synthesize(1, m, scfg)
        return trace_to_circuit(euclid_trace(m, c), m)
    assert opt is not None
    return opt.circuit(c)


def _record(method: str, c: int, m: int, cfg: SweepConfig, opt: OptimalSearch | None) -> BenchRecord:
    bits = m.bit_length()
    start = time.perf_counter()
    error = ""
    toffoli = cnot = depth = ops = 0
    try:
        circ = _synthesize_method(method, c, m, cfg, opt)
        toffoli, cnot = circuit_cost(circ, cfg.cost_model)
        depth = circuit_depth(circ, cfg.depth_model)
        ops = len(circ.ops)
        if cfg.verify_circuits:
            if bits <= _EXHAUSTIVE_BIT_CAP:
                report = verify(circ, exhaustive=True)
            else:
                report = verify(
                    circ, exhaustive=False, samples=_SAMPLE_COUNT, seed=_SAMPLE_SEED
                )
            if not report.passed:
                error = f"verification failed: {report.summary()}"
    except Exception as exc:  # per-record failures never abort the sweep
        error = f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start if cfg.timing else 0.0
    qubits = 2 * bits + cfg.depth_model.ancillae_per_adder(bits)
    return BenchRecord(
        bits=bits,
        modulus=m,
        multiplier=c,
        method=method,
        toffoli=toffoli,
        cnot=cnot,
        depth=depth,
        op_count=ops,
        qubits=qubits,
        wall_seconds=elapsed,
        cost_model_hash=cfg.cost_model.hash,
        error=error,
    )


def _sweep_modulus(args: tuple[int, SweepConfig]) -> list[BenchRecord]:
    m, cfg = args
    cs = _multipliers(m, cfg)
    opt = None
    if "optimal" in cfg.methods:
        opt = OptimalSearch(m, cfg.cost_model, bit_cap=cfg.optimal_bit_cap)
    records = []
    for c in cs:
        for method in cfg.methods:
            cached = cache_lookup(cfg.cache_dir, m, c, method, cfg.cost_model.hash)
            if cached is not None:
                records.append(cached)
                continue
            rec = _record(method, c, m, cfg, opt)
            cache_store(cfg.cache_dir, rec)
            records.append(rec)
    return records


def _moduli_for(cfg: SweepConfig) -> list[int]:
    if cfg.moduli is not None:
        return sorted(cfg.moduli)
    out: list[int] = []
    for bits in sorted(cfg.bits):
        out.extend(m.value for m in enumerate_semiprimes(bits))
    return out


def bench_sweep(cfg: SweepConfig) -> list[BenchRecord]:
    """Run the sweep; records come back ordered by (M, C, method)."""
    moduli = _moduli_for(cfg)
    tasks = [(m, cfg) for m in moduli]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            per_mod = list(pool.map(_sweep_modulus, tasks, chunksize=1))
    else:
        per_mod = [_sweep_modulus(t) for t in tasks]
    method_rank = {name: i for i, name in enumerate(METHODS)}
    records = [r for group in per_mod for r in group]
    records.sort(key=lambda r: (r.modulus, r.multiplier, method_rank[r.method]))
    return records


@dataclass(frozen=True)
class SummaryRow:
    bits: int
    method: str
    count: int
    max_toffoli: int
    avg_toffoli: float


def aggregate(records: list[BenchRecord]) -> tuple[list[SummaryRow], list[tuple[int, float | None, float | None]]]:
    """Per-width max/avg per method, plus the ratio-vs-bits series
    (baseline/heuristic and heuristic/optimal). Uniform per-(M, C)
    averaging across all moduli of a bit-width."""
    hashes = {r.cost_model_hash for r in records}
    if len(hashes) > 1:
        raise MixedModels(f"records mix cost models: {sorted(hashes)}")
    ok = [r for r in records if not r.error]
    by_bits: dict[int, dict[str, list[int]]] = {}
    for r in ok:
        by_bits.setdefault(r.bits, {}).setdefault(r.method, []).append(r.toffoli)
    rows: list[SummaryRow] = []
    series: list[tuple[int, float | None, float | None]] = []
    for bits in sorted(by_bits):
        methods = by_bits[bits]
        for method in METHODS:
            if method in methods:
                vals = methods[method]
                rows.append(SummaryRow(bits, method, len(vals), max(vals), mean(vals)))
        avg = {m: mean(v) for m, v in methods.items()}
        b_over_h = (
            avg["baseline"] / avg["heuristic"]
            if "baseline" in avg and avg.get("heuristic")
            else None
        )
        h_over_o = (
            avg["heuristic"] / avg["optimal"]
            if "heuristic" in avg and avg.get("optimal")
            else None
        )
        series.append((bits, b_over_h, h_over_o))
    return rows, series


def ratio_series(records: list[BenchRecord]) -> list[tuple[int, float | None, float | None]]:
    return aggregate(records)[1]


def records_to_csv(records: list[BenchRecord]) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for r in records:
        buf.write(r.csv_row() + "\n")
    return buf.getvalue()


def write_records_csv(records: list[BenchRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(records_to_csv(records))


def write_summary_csv(rows: list[SummaryRow], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bits", "method", "count", "max_toffoli", "avg_toffoli"])
        for row in rows:
            writer.writerow(
                [row.bits, row.method, row.count, row.max_toffoli, f"{row.avg_toffoli:.4f}"]
            )


def write_ratio_csv(series: list[tuple[int, float | None, float | None]], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("bits,baseline_over_heuristic,heuristic_over_optimal\n")
        for bits, boh, hoo in series:
            fmt = lambda v: f"{v:.6f}" if v is not None else ""
            fh.write(f"{bits},{fmt(boh)},{fmt(hoo)}\n")


# --- result cache -----------------------------------------------------------


def cache_key(m: int, c: int, method: str, model_hash: str) -> str:
    payload = f"{m},{c},{method},{model_hash}"
    return hashlib.sha256(payload.encode()).hexdigest()[:32]


def cache_lookup(
    cache_dir: str | None, m: int, c: int, method: str, model_hash: str
) -> BenchRecord | None:
    if cache_dir is None:
        return None
    path = os.path.join(cache_dir, cache_key(m, c, method, model_hash) + ".json")
    if not os.path.exists(path):
        return None
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        body = doc["record"]
        digest = hashlib.sha256(
            json.dumps(body, sort_keys=True, separators=(",", ":")).encode()
        ).hexdigest()
        if digest != doc["checksum"]:
            raise CacheCorrupt(path)
        return BenchRecord(**body)
    except (CacheCorrupt, KeyError, TypeError, ValueError, json.JSONDecodeError):
        return None  # corrupt entries are treated as misses


def cache_store(cache_dir: str | None, record: BenchRecord) -> None:
    if cache_dir is None:
        return
    os.makedirs(cache_dir, exist_ok=True)
    body = dataclasses.asdict(record)
    digest = hashlib.sha256(
        json.dumps(body, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()
    path = os.path.join(
        cache_dir,
        cache_key(record.modulus, record.multiplier, record.method, record.cost_model_hash)
        + ".json",
    )
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump({"record": body, "checksum": digest}, fh)
    os.replace(tmp, path)
