"""Block-level circuit IR: operators, circuits, cost/depth models, and the
bit-exact text serialization.

A circuit is an ordered list of reversible blocks acting on a two-register
modular datapath (R1, R2). Costs are measured in Toffoli gates via affine
per-opcode formulas; CNOT-only bookkeeping (FANOUT, CSWAP fan-out wiring)
is tracked separately.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

__all__ = [
    "R1",
    "R2",
    "Opcode",
    "BlockOp",
    "BlockCircuit",
    "CostModel",
    "DepthModel",
    "UnknownOpcode",
    "ParseError",
    "InvariantViolation",
    "DEFAULT_COST_MODEL",
    "op_cost",
    "op_cnots",
    "circuit_cost",
    "circuit_depth",
    "serialize",
    "parse",
    "load_model_file",
    "save_model_file",
]

R1 = "R1"
R2 = "R2"
_REGISTERS = (R1, R2)

# Opcodes kept as plain strings; they double as serialization tokens.
FANOUT = "FANOUT"
ADD = "ADD"
SUB = "SUB"
DBL = "DBL"
HLV = "HLV"
NEG = "NEG"
CSWAP_LAYER = "CSWAP_LAYER"

Opcode = str
_OPCODES = (FANOUT, ADD, SUB, DBL, HLV, NEG, CSWAP_LAYER)
_TWO_REG = (ADD, SUB)
_ONE_REG = (DBL, HLV, NEG)


class UnknownOpcode(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class InvariantViolation(ValueError):
    pass


@dataclass(frozen=True)
class BlockOp:
    """One reversible block: FANOUT | ADD t s | SUB t s | DBL r | HLV r |
    NEG r | CSWAP_LAYER."""

    opcode: Opcode
    target: str | None = None
    source: str | None = None

    def __post_init__(self) -> None:
        if self.opcode not in _OPCODES:
            raise UnknownOpcode(f"unknown opcode {self.opcode!r}")
        if self.opcode in _TWO_REG:
            if self.target not in _REGISTERS or self.source not in _REGISTERS:
                raise InvariantViolation(f"{self.opcode} needs target and source registers")
            if self.target == self.source:
                raise InvariantViolation(f"{self.opcode} target must differ from source")
        elif self.opcode in _ONE_REG:
            if self.target not in _REGISTERS:
                raise InvariantViolation(f"{self.opcode} needs a target register")
            if self.source is not None:
                raise InvariantViolation(f"{self.opcode} takes no source register")
        else:
            if self.target is not None or self.source is not None:
                raise InvariantViolation(f"{self.opcode} takes no register arguments")

    def text(self) -> str:
        if self.opcode in _TWO_REG:
            return f"{self.opcode} {self.target} {self.source}"
        if self.opcode in _ONE_REG:
            return f"{self.opcode} {self.target}"
        return self.opcode


@dataclass(frozen=True)
class BlockCircuit:
    """An ordered BlockOp sequence over a fixed modulus.

    Semantic contract (checked by the simulator, not by construction):
    applying `ops` to (x, 0) leaves multiplier*x mod modulus in
    `result_register` and 0 in the other register.
    """

    modulus: int
    multiplier: int
    width: int
    ops: tuple[BlockOp, ...]
    result_register: str = R1

    def __post_init__(self) -> None:
        if self.result_register not in _REGISTERS:
            raise InvariantViolation(f"bad result register {self.result_register!r}")
        for i, op in enumerate(self.ops):
            if op.opcode == FANOUT and i != 0:
                raise InvariantViolation("FANOUT may only appear as the first op")


def _coeff(model_coeffs: Mapping[str, tuple[int, int]], opcode: Opcode) -> tuple[int, int]:
    try:
        return model_coeffs[opcode]
    except KeyError as exc:
        raise UnknownOpcode(f"no coefficients for opcode {opcode!r}") from exc


@dataclass(frozen=True)
class CostModel:
    """Per-opcode Toffoli counts as affine functions of the bit-width n.

    `coeffs` maps opcode -> (slope, intercept): cost = slope*n + intercept.
    The coefficient hash identifies the comparability class of any results
    computed under this model.
    """

    name: str = "default"
    coeffs: Mapping[str, tuple[int, int]] = field(
        default_factory=lambda: {
            FANOUT: (0, 0),
            ADD: (3, 0),
            SUB: (3, 0),
            DBL: (3, 2),
            HLV: (3, 2),
            NEG: (1, 0),
            CSWAP_LAYER: (1, 0),
        }
    )

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", dict(self.coeffs))

    @property
    def hash(self) -> str:
        payload = json.dumps(sorted(self.coeffs.items()), separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def op_cost(self, opcode: Opcode, n: int) -> int:
        slope, intercept = _coeff(self.coeffs, opcode)
        cost = slope * n + intercept
        if cost < 0:
            raise InvariantViolation(f"negative cost for {opcode} at n={n}")
        return cost


DEFAULT_COST_MODEL = CostModel()

RIPPLE = "RIPPLE"
LOOKAHEAD = "LOOKAHEAD"


def _ceil_log2(n: int) -> int:
    return max(1, math.ceil(math.log2(n))) if n > 1 else 0


@dataclass(frozen=True)
class DepthModel:
    """Per-opcode Toffoli-depth formulas for one adder regime.

    RIPPLE prices depth linearly in n (Cuccaro-style serial adders);
    LOOKAHEAD prices it in ceil(log2 n) (carry-lookahead adders): additive
    blocks 4L+3, doubling/halving 6L+12, and each CSWAP_LAYER pays a 2L
    fan-out overhead. Formulas are (slope, intercept) over x, where x = n
    under RIPPLE and x = ceil(log2 n) under LOOKAHEAD.
    """

    adder_regime: str = RIPPLE
    coeffs: Mapping[str, tuple[int, int]] | None = None

    def __post_init__(self) -> None:
        if self.adder_regime not in (RIPPLE, LOOKAHEAD):
            raise ValueError(f"bad adder regime {self.adder_regime!r}")
        if self.coeffs is None:
            if self.adder_regime == RIPPLE:
                coeffs = {
                    FANOUT: (0, 0),
                    ADD: (2, 4),
                    SUB: (2, 4),
                    DBL: (3, 6),
                    HLV: (3, 6),
                    NEG: (2, 4),
                    CSWAP_LAYER: (1, 0),
                }
            else:
                coeffs = {
                    FANOUT: (0, 0),
                    ADD: (4, 3),
                    SUB: (4, 3),
                    DBL: (6, 12),
                    HLV: (6, 12),
                    NEG: (4, 3),
                    CSWAP_LAYER: (2, 0),
                }
            object.__setattr__(self, "coeffs", coeffs)
        else:
            object.__setattr__(self, "coeffs", dict(self.coeffs))

    @classmethod
    def ripple(cls) -> "DepthModel":
        return cls(RIPPLE)

    @classmethod
    def lookahead(cls) -> "DepthModel":
        return cls(LOOKAHEAD)

    def _x(self, n: int) -> int:
        return n if self.adder_regime == RIPPLE else _ceil_log2(n)

    def op_depth(self, opcode: Opcode, n: int) -> int:
        slope, intercept = _coeff(self.coeffs, opcode)
        return slope * self._x(n) + intercept

    def ancillae_per_adder(self, n: int) -> int:
        """Ancillae one adder block needs (cleared before the next block)."""
        if self.adder_regime == RIPPLE:
            return 1
        return 2 * n - _ceil_log2(n) - 2

    def modexp_ancillae(self, n: int) -> int:
        """Ancilla count of a full mod-exp assembly at width n.

        RIPPLE reproduces the 5n+2 reference figure; LOOKAHEAD swaps the
        single adder ancilla for the carry-lookahead block's, staying <= 7n.
        """
        base = 5 * n + 2
        if self.adder_regime == RIPPLE:
            return base
        return base - 1 + self.ancillae_per_adder(n)


def op_cost(op: BlockOp, n: int, model: CostModel = DEFAULT_COST_MODEL) -> int:
    """Toffoli count of one block at bit-width n."""
    return model.op_cost(op.opcode, n)


def op_cnots(op: BlockOp, n: int) -> int:
    """CNOT bookkeeping: FANOUT copies n bits, a CSWAP_LAYER spends 2n
    CNOTs on control fan-out/clear; arithmetic blocks report 0 here."""
    if op.opcode == FANOUT:
        return n
    if op.opcode == CSWAP_LAYER:
        return 2 * n
    return 0


def circuit_cost(
    c: BlockCircuit, model: CostModel = DEFAULT_COST_MODEL
) -> tuple[int, int]:
    """(toffoli, cnot) totals, additive over the op sequence."""
    toffoli = sum(model.op_cost(op.opcode, c.width) for op in c.ops)
    cnot = sum(op_cnots(op, c.width) for op in c.ops)
    return toffoli, cnot


def circuit_depth(c: BlockCircuit, model: DepthModel) -> int:
    """Total depth: blocks share both registers, so the schedule is the
    sequential chain and depth is the sum of per-op depths."""
    return sum(model.op_depth(op.opcode, c.width) for op in c.ops)


def serialize(c: BlockCircuit) -> str:
    lines = [
        f"MODULUS {c.modulus}",
        f"MULTIPLIER {c.multiplier}",
        f"WIDTH {c.width}",
        f"RESULT {c.result_register}",
    ]
    lines.extend(op.text() for op in c.ops)
    lines.append("END")
    return "\n".join(lines) + "\n"


def _parse_register(tok: str, line_no: int) -> str:
    if tok not in _REGISTERS:
        raise ParseError(line_no, f"bad register {tok!r}")
    return tok


def parse(text: str) -> BlockCircuit:
    """Inverse of serialize. Raises ParseError (with line number) on
    malformed text and InvariantViolation on structurally illegal ops."""
    header: dict[str, object] = {}
    header_order = ["MODULUS", "MULTIPLIER", "WIDTH", "RESULT"]
    ops: list[BlockOp] = []
    ended = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ended:
            raise ParseError(line_no, "content after END")
        toks = line.split()
        key = toks[0]
        if len(header) < len(header_order):
            expect = header_order[len(header)]
            if key != expect:
                raise ParseError(line_no, f"expected {expect} header, got {key!r}")
            if expect == "RESULT":
                if len(toks) != 2:
                    raise ParseError(line_no, "RESULT takes one register")
                header[expect] = _parse_register(toks[1], line_no)
            else:
                if len(toks) != 2 or not toks[1].isdigit():
                    raise ParseError(line_no, f"{expect} takes one decimal value")
                header[expect] = int(toks[1])
            continue
        if key == "END":
            if len(toks) != 1:
                raise ParseError(line_no, "END takes no arguments")
            ended = True
            continue
        if key in (FANOUT, CSWAP_LAYER):
            if len(toks) != 1:
                raise ParseError(line_no, f"{key} takes no arguments")
            ops.append(BlockOp(key))
        elif key in _TWO_REG:
            if len(toks) != 3:
                raise ParseError(line_no, f"{key} takes two registers")
            ops.append(
                BlockOp(
                    key,
                    _parse_register(toks[1], line_no),
                    _parse_register(toks[2], line_no),
                )
            )
        elif key in _ONE_REG:
            if len(toks) != 2:
                raise ParseError(line_no, f"{key} takes one register")
            ops.append(BlockOp(key, _parse_register(toks[1], line_no)))
        else:
            raise ParseError(line_no, f"unknown token {key!r}")
    if len(header) < len(header_order):
        raise ParseError(0, "incomplete header")
    if not ended:
        raise ParseError(0, "missing END")
    return BlockCircuit(
        modulus=header["MODULUS"],
        multiplier=header["MULTIPLIER"],
        width=header["WIDTH"],
        ops=tuple(ops),
        result_register=header["RESULT"],
    )


def save_model_file(
    path: str, cost: CostModel, depth: DepthModel | None = None
) -> None:
    doc: dict[str, object] = {
        "name": cost.name,
        "toffoli": {op: {"slope": s, "intercept": i} for op, (s, i) in cost.coeffs.items()},
    }
    if depth is not None:
        doc["adder_regime"] = depth.adder_regime.lower()
        doc["depth"] = {
            op: {"slope": s, "intercept": i} for op, (s, i) in depth.coeffs.items()
        }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model_file(path: str) -> tuple[CostModel, DepthModel]:
    """Load a flat JSON model document: opcode -> {slope, intercept} per
    metric, plus adder_regime. Missing sections fall back to defaults."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    regime = str(doc.get("adder_regime", "ripple")).upper()

    def to_coeffs(section: Mapping[str, Mapping[str, int]]) -> dict[str, tuple[int, int]]:
        return {
            op: (int(v["slope"]), int(v["intercept"])) for op, v in section.items()
        }

    if "toffoli" in doc:
        cost = CostModel(doc.get("name", "custom"), to_coeffs(doc["toffoli"]))
    else:
        cost = CostModel(doc.get("name", "default"))
    if "depth" in doc:
        depth = DepthModel(regime, to_coeffs(doc["depth"]))
    else:
        depth = DepthModel(regime)
    return cost, depth
