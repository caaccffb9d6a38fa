"""Classical block-semantics simulator and verification oracle.

Every block acts bijectively on (Z_M)^2, so a circuit is verified as a
permutation: for each tested x the result register must hold C*x mod M and
the other register must return to 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuit import (
    ADD,
    CSWAP_LAYER,
    DBL,
    FANOUT,
    HLV,
    NEG,
    R1,
    SUB,
    BlockCircuit,
    BlockOp,
)
from .numtheory import mod_inverse

__all__ = [
    "MachineState",
    "FanoutOnNonzero",
    "VerifyReport",
    "apply_op",
    "inverse_op",
    "run_circuit",
    "circuit_images",
    "verify",
]

# Fixed 64-bit linear congruential generator for sampled verification
# (Knuth's MMIX multiplier); the seed is echoed in the report.
_LCG_A = 6364136223846793005
_LCG_C = 1442695040888963407
_LCG_MASK = (1 << 64) - 1


class FanoutOnNonzero(RuntimeError):
    """FANOUT hit a non-zero second register -- a synthesis bug upstream."""


@dataclass(frozen=True)
class MachineState:
    r1: int
    r2: int
    modulus: int

    def __post_init__(self) -> None:
        if not (0 <= self.r1 < self.modulus and 0 <= self.r2 < self.modulus):
            raise ValueError("register values must lie in [0, M)")


def _halve(v: int, m: int) -> int:
    return v // 2 if v % 2 == 0 else (v + m) // 2


def apply_op(s: MachineState, op: BlockOp) -> MachineState:
    m = s.modulus
    r1, r2 = s.r1, s.r2
    code = op.opcode
    if code == ADD:
        if op.target == R1:
            r1 = (r1 + r2) % m
        else:
            r2 = (r2 + r1) % m
    elif code == SUB:
        if op.target == R1:
            r1 = (r1 - r2) % m
        else:
            r2 = (r2 - r1) % m
    elif code == DBL:
        if op.target == R1:
            r1 = (2 * r1) % m
        else:
            r2 = (2 * r2) % m
    elif code == HLV:
        if op.target == R1:
            r1 = _halve(r1, m)
        else:
            r2 = _halve(r2, m)
    elif code == NEG:
        if op.target == R1:
            r1 = (m - r1) % m
        else:
            r2 = (m - r2) % m
    elif code == FANOUT:
        if r2 != 0:
            raise FanoutOnNonzero(f"FANOUT with r2={r2}")
        r2 = r1
    elif code == CSWAP_LAYER:
        r1, r2 = r2, r1
    else:  # pragma: no cover - BlockOp validates opcodes
        raise ValueError(f"unknown opcode {code}")
    return MachineState(r1, r2, m)


_INVERSES = {ADD: SUB, SUB: ADD, DBL: HLV, HLV: DBL, NEG: NEG, CSWAP_LAYER: CSWAP_LAYER}


def inverse_op(op: BlockOp) -> BlockOp:
    """Inverse block (ADD<->SUB, DBL<->HLV, NEG and CSWAP self-inverse)."""
    try:
        return BlockOp(_INVERSES[op.opcode], op.target, op.source)
    except KeyError:
        raise ValueError(f"{op.opcode} has no block inverse") from None


def run_circuit(c: BlockCircuit, x: int) -> MachineState:
    """Fold apply_op over the circuit starting from (x, 0)."""
    s = MachineState(x % c.modulus, 0, c.modulus)
    for op in c.ops:
        s = apply_op(s, op)
    return s


def circuit_images(c: BlockCircuit, xs: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized run over many inputs; returns final (r1, r2) arrays.

    FANOUT here still demands an all-zero second register, matching
    apply_op semantics.
    """
    m = c.modulus
    if xs is None:
        xs = np.arange(m, dtype=np.int64)
    r1 = np.asarray(xs, dtype=np.int64) % m
    r2 = np.zeros_like(r1)
    inv2 = mod_inverse(2, m)
    for op in c.ops:
        code = op.opcode
        if code == ADD:
            if op.target == R1:
                r1 = (r1 + r2) % m
            else:
                r2 = (r2 + r1) % m
        elif code == SUB:
            if op.target == R1:
                r1 = (r1 - r2) % m
            else:
                r2 = (r2 - r1) % m
        elif code == DBL:
            if op.target == R1:
                r1 = (2 * r1) % m
            else:
                r2 = (2 * r2) % m
        elif code == HLV:
            # v/2 if even else (v+M)/2, i.e. multiplication by 2^-1 mod M
            if op.target == R1:
                r1 = (r1 * inv2) % m
            else:
                r2 = (r2 * inv2) % m
        elif code == NEG:
            if op.target == R1:
                r1 = (m - r1) % m
            else:
                r2 = (m - r2) % m
        elif code == FANOUT:
            if np.any(r2 != 0):
                raise FanoutOnNonzero("FANOUT with non-zero second register")
            r2 = r1.copy()
        elif code == CSWAP_LAYER:
            r1, r2 = r2, r1
    return r1, r2


@dataclass(frozen=True)
class VerifyReport:
    circuit_multiplier: int
    modulus: int
    mode: str
    tested: int
    failures: tuple[tuple[int, int, int], ...]  # (x, got_result, got_other)
    injective: bool
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return not self.failures and self.injective

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" seed={self.seed}" if self.seed is not None else ""
        return (
            f"{status} C={self.circuit_multiplier} M={self.modulus} "
            f"mode={self.mode}{extra} tested={self.tested} "
            f"failures={len(self.failures)} injective={self.injective}"
        )


_EXHAUSTIVE_CAP = 1 << 20
_VECTOR_CAP = 1 << 20


def _lcg_samples(seed: int, count: int, m: int) -> list[int]:
    state = seed & _LCG_MASK
    out = []
    for _ in range(count):
        state = (_LCG_A * state + _LCG_C) & _LCG_MASK
        out.append(state % m)
    return out


def verify(
    c: BlockCircuit,
    exhaustive: bool = True,
    samples: int = 1000,
    seed: int = 2024,
    max_failures: int = 32,
) -> VerifyReport:
    """Check result = C*x mod M and cleared ancilla for the tested inputs.

    Exhaustive mode covers all x in [0, M) (M capped at 2^20) and checks
    that the result-register map is a permutation; sampled mode draws from
    the fixed LCG. Failures are data, not exceptions.
    """
    m, cmul = c.modulus, c.multiplier % c.modulus
    res_is_r1 = c.result_register == R1
    failures: list[tuple[int, int, int]] = []
    if exhaustive:
        if m > _EXHAUSTIVE_CAP:
            raise ValueError(f"modulus {m} too large for exhaustive verification")
        r1, r2 = circuit_images(c)
        res, other = (r1, r2) if res_is_r1 else (r2, r1)
        expected = (np.arange(m, dtype=np.int64) * cmul) % m
        bad = np.flatnonzero((res != expected) | (other != 0))
        for x in bad[:max_failures]:
            failures.append((int(x), int(res[x]), int(other[x])))
        if len(bad) > max_failures:
            failures.append((-1, int(len(bad)), 0))
        injective = len(np.unique(res)) == m
        return VerifyReport(cmul, m, "exhaustive", m, tuple(failures), injective)
    xs = _lcg_samples(seed, samples, m)
    seen: dict[int, int] = {}
    injective = True
    for x in xs:
        s = run_circuit(c, x)
        res, other = (s.r1, s.r2) if res_is_r1 else (s.r2, s.r1)
        if res != (cmul * x) % m or other != 0:
            if len(failures) < max_failures:
                failures.append((x, res, other))
        if x in seen:
            if seen[x] != res:
                injective = False
        else:
            seen[x] = res
    # distinct sampled inputs must map to distinct results
    if len(set(seen.values())) != len(seen):
        injective = False
    return VerifyReport(cmul, m, f"sampled({samples})", len(xs), tuple(failures), injective, seed)
