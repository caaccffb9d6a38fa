"""Assembly of full modular-exponentiation circuits.

An exponentiation by a 2n-bit exponent is 2n conditional positions, each
wrapping an unconditional multiplication block for C_i = b^(2^i) mod M in
a pair of controlled-swap layers against a zero register. Squaring orbits
repeat quickly, so distinct blocks are synthesized once and cached.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .circuit import (
    CSWAP_LAYER,
    BlockCircuit,
    CostModel,
    DepthModel,
    circuit_cost,
    circuit_depth,
    op_cnots,
    BlockOp,
)
from .numtheory import Modulus
from .synth import SynthesisConfig, synthesize

__all__ = ["BaseNotCoprime", "ModExpPlan", "ModExpCircuit", "modexp_plan", "build_modexp"]


class BaseNotCoprime(ValueError):
    pass


@dataclass(frozen=True)
class ModExpPlan:
    modulus: int
    base: int
    multipliers: tuple[int, ...]  # C_i = base^(2^i) mod M, i = 0 .. 2n-1

    @property
    def n(self) -> int:
        return self.modulus.bit_length()

    @property
    def exponent_width(self) -> int:
        return len(self.multipliers)


@dataclass(frozen=True)
class ModExpCircuit:
    plan: ModExpPlan
    blocks: tuple[tuple[BlockCircuit, bool], ...]  # (UM block, cswap-wrapped)
    toffoli: int
    cnot: int
    depth: int
    ancilla_count: int
    qubit_count: int
    distinct_blocks: int

    @property
    def positions(self) -> int:
        return len(self.blocks)


def modexp_plan(m: int | Modulus, b: int = 2) -> ModExpPlan:
    """All 2n multipliers by repeated modular squaring."""
    mv = m.value if isinstance(m, Modulus) else m
    Modulus(mv)
    if gcd(b, mv) != 1:
        raise BaseNotCoprime(f"gcd({b}, {mv}) != 1")
    n = mv.bit_length()
    mults = []
    c = b % mv
    for _ in range(2 * n):
        mults.append(c)
        c = (c * c) % mv
    return ModExpPlan(mv, b, tuple(mults))


def build_modexp(
    m: int | Modulus,
    b: int = 2,
    cfg: SynthesisConfig | None = None,
    depth_model: DepthModel | None = None,
    keep_identity_gates: bool = False,
    use_cache: bool = True,
) -> ModExpCircuit:
    """Synthesize the 2n conditional positions and total the resources.

    Positions whose multiplier collapses to 1 keep their two CSWAP_LAYER
    wrappers but carry an empty block; `keep_identity_gates` instead prices
    them like a C=2 block for conservative comparisons.
    """
    cfg = cfg or SynthesisConfig()
    depth_model = depth_model or DepthModel.ripple()
    plan = modexp_plan(m, b)
    mv, n = plan.modulus, plan.n
    model: CostModel = cfg.cost_model

    cache: dict[int, BlockCircuit] = {}

    def block_for(c: int) -> BlockCircuit:
        if not use_cache:
            cache.setdefault(c, synthesize(c, mv, cfg))
            return synthesize(c, mv, cfg)
        if c not in cache:
            cache[c] = synthesize(c, mv, cfg)
        return cache[c]

    cswap = BlockOp(CSWAP_LAYER)
    cswap_toffoli = model.op_cost(CSWAP_LAYER, n)
    cswap_cnot = op_cnots(cswap, n)
    cswap_depth = depth_model.op_depth(CSWAP_LAYER, n)

    toffoli = cnot = depth = 0
    blocks: list[tuple[BlockCircuit, bool]] = []
    for c in plan.multipliers:
        block = block_for(c)
        costed = block
        if c == 1 and keep_identity_gates:
            costed = block_for(2 % mv)
        t, k = circuit_cost(costed, model)
        toffoli += t
        cnot += k
        depth += circuit_depth(costed, depth_model)
        blocks.append((block, True))
    positions = len(blocks)
    toffoli += 2 * positions * cswap_toffoli
    cnot += 2 * positions * cswap_cnot
    depth += 2 * positions * cswap_depth
    ancillae = depth_model.modexp_ancillae(n)
    # data register n + exponent register 2n, plus regime ancillae (which
    # include the second multiplication register)
    qubits = 3 * n + ancillae
    return ModExpCircuit(
        plan=plan,
        blocks=tuple(blocks),
        toffoli=toffoli,
        cnot=cnot,
        depth=depth,
        ancilla_count=ancillae,
        qubit_count=qubits,
        distinct_blocks=len(cache),
    )
