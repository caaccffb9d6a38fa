"""Exact minimum-cost circuit search for small moduli.

States are residue pairs (a, b) in (Z_M)^2; edges are the block operators
(ADD/SUB with either target, DBL/HLV/NEG on either register) weighted by
the cost model. A single-source least-cost pass from the two legal start
states -- (1, 1) after a free FANOUT, and (1, 0) for single-register
circuits that skip it -- yields, for every coprime c, the cheapest circuit
ending in (c, 0) or (0, c).
"""

from __future__ import annotations

from math import gcd

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as _sp_dijkstra

from .circuit import (
    ADD,
    DBL,
    FANOUT,
    HLV,
    NEG,
    R1,
    R2,
    SUB,
    BlockCircuit,
    BlockOp,
    CostModel,
    DEFAULT_COST_MODEL,
)
from .numtheory import Modulus, NotCoprime, mod_inverse

__all__ = ["ModulusTooLarge", "OptimalSearch", "optimal_costs", "optimal_circuit"]

DEFAULT_BIT_CAP = 12


class ModulusTooLarge(ValueError):
    """State space M^2 exceeds the configured search cap."""


def _edge_ops(include_neg: bool) -> list[BlockOp]:
    # Fixed opcode order; path reconstruction tie-breaks along this list.
    ops = [
        BlockOp(ADD, R1, R2),
        BlockOp(ADD, R2, R1),
        BlockOp(SUB, R1, R2),
        BlockOp(SUB, R2, R1),
        BlockOp(DBL, R1),
        BlockOp(DBL, R2),
        BlockOp(HLV, R1),
        BlockOp(HLV, R2),
    ]
    if include_neg:
        ops.extend([BlockOp(NEG, R1), BlockOp(NEG, R2)])
    return ops


class OptimalSearch:
    """Least-cost distances over the block-operator state graph of one
    modulus, with deterministic circuit reconstruction."""

    def __init__(
        self,
        m: int | Modulus,
        model: CostModel = DEFAULT_COST_MODEL,
        include_neg: bool = True,
        bit_cap: int = DEFAULT_BIT_CAP,
    ):
        mv = m.value if isinstance(m, Modulus) else m
        Modulus(mv)  # validate
        self.m = mv
        self.n = mv.bit_length()
        if self.n > bit_cap:
            raise ModulusTooLarge(
                f"{mv} has {self.n} bits; cap is {bit_cap} (state space M^2)"
            )
        self.model = model
        self.ops = _edge_ops(include_neg)
        self._inv2 = mod_inverse(2, mv)
        self._dist = self._run()

    def _apply_vec(self, op: BlockOp, a: np.ndarray, b: np.ndarray):
        m = self.m
        if op.opcode == ADD:
            return ((a + b) % m, b) if op.target == R1 else (a, (a + b) % m)
        if op.opcode == SUB:
            return ((a - b) % m, b) if op.target == R1 else (a, (b - a) % m)
        if op.opcode == DBL:
            return ((2 * a) % m, b) if op.target == R1 else (a, (2 * b) % m)
        if op.opcode == HLV:
            i2 = self._inv2
            return ((a * i2) % m, b) if op.target == R1 else (a, (b * i2) % m)
        # NEG
        return ((m - a) % m, b) if op.target == R1 else (a, (m - b) % m)

    def _run(self) -> np.ndarray:
        m = self.m
        size = m * m
        src = np.arange(size, dtype=np.int64)
        a, b = src // m, src % m
        keys, data = [], []
        for op in self.ops:
            na, nb = self._apply_vec(op, a, b)
            keys.append(src * size + (na * m + nb))
            data.append(
                np.full(size, self.model.op_cost(op.opcode, self.n), dtype=np.float64)
            )
        key = np.concatenate(keys)
        weight = np.concatenate(data)
        # distinct ops can share an edge (e.g. ADD and DBL on equal
        # registers); keep the cheapest, since coo->csr would sum them
        order = np.argsort(key, kind="stable")
        key, weight = key[order], weight[order]
        starts = np.ones(len(key), dtype=bool)
        starts[1:] = key[1:] != key[:-1]
        weight = np.minimum.reduceat(weight, np.flatnonzero(starts))
        key = key[starts]
        graph = csr_matrix(
            (weight, ((key // size).astype(np.int64), (key % size).astype(np.int64))),
            shape=(size, size),
        )
        sources = [1 * m + 1, 1 * m + 0]  # (1,1) post-FANOUT and (1,0) bare
        return _sp_dijkstra(graph, directed=True, indices=sources)

    def _candidates(self, c: int) -> list[tuple[int, int, str]]:
        m = self.m
        # (source row, target index, result register); fixed preference
        # order for ties: bare start first, result in R1 first.
        return [
            (1, c * m + 0, R1),
            (1, 0 * m + c, R2),
            (0, c * m + 0, R1),
            (0, 0 * m + c, R2),
        ]

    def cost(self, c: int) -> int:
        c %= self.m
        if gcd(c, self.m) != 1:
            raise NotCoprime(f"gcd({c}, {self.m}) != 1")
        if c == 1:
            return 0
        best = min(self._dist[s, t] for s, t, _ in self._candidates(c))
        return int(best)

    def all_costs(self) -> dict[int, int]:
        """Minimal cost for every coprime c in [1, M)."""
        m = self.m
        d = self._dist
        r1_best = np.minimum(d[0, np.arange(m) * m], d[1, np.arange(m) * m])
        r2_best = np.minimum(d[0, np.arange(m)], d[1, np.arange(m)])
        best = np.minimum(r1_best, r2_best)
        out: dict[int, int] = {}
        for c in range(1, m):
            if gcd(c, m) == 1:
                out[c] = 0 if c == 1 else int(best[c])
        return out

    def circuit(self, c: int) -> BlockCircuit:
        """Reconstruct one least-cost circuit for c; deterministic via the
        fixed candidate order, then opcode order, then state index."""
        c %= self.m
        if gcd(c, self.m) != 1:
            raise NotCoprime(f"gcd({c}, {self.m}) != 1")
        m, n = self.m, self.n
        if c == 1:
            return BlockCircuit(m, 1, n, ())
        best = self.cost(c)
        source_row, target, result = next(
            (s, t, r)
            for s, t, r in self._candidates(c)
            if self._dist[s, t] == best
        )
        dist = self._dist[source_row]
        source_state = (1, 0) if source_row == 1 else (1, 1)
        inv_ops = [(op, BlockOp(_INV[op.opcode], op.target, op.source)) for op in self.ops]
        ops_rev: list[BlockOp] = []
        cur = target
        while dist[cur] > 0:
            ca, cb = divmod(cur, m)
            for op, inv in inv_ops:
                pa, pb = self._apply_vec(inv, ca, cb)
                prev = pa * m + pb
                w = self.model.op_cost(op.opcode, n)
                if dist[prev] + w == dist[cur]:
                    ops_rev.append(op)
                    cur = prev
                    break
            else:  # pragma: no cover - distances guarantee a predecessor
                raise RuntimeError("no predecessor found during reconstruction")
        assert divmod(cur, m) == source_state
        ops = list(reversed(ops_rev))
        if source_state == (1, 1):
            ops.insert(0, BlockOp(FANOUT))
        return BlockCircuit(m, c, n, tuple(ops), result)


_INV = {ADD: SUB, SUB: ADD, DBL: HLV, HLV: DBL, NEG: NEG}


def optimal_costs(
    m: int | Modulus,
    model: CostModel = DEFAULT_COST_MODEL,
    include_neg: bool = True,
    bit_cap: int = DEFAULT_BIT_CAP,
) -> dict[int, int]:
    """Map each coprime c to its minimal circuit cost under the model."""
    return OptimalSearch(m, model, include_neg, bit_cap).all_costs()


def optimal_circuit(
    c: int,
    m: int | Modulus,
    model: CostModel = DEFAULT_COST_MODEL,
    include_neg: bool = True,
    bit_cap: int = DEFAULT_BIT_CAP,
) -> BlockCircuit:
    """One least-cost circuit for (c, m); cost equals optimal_costs[c]."""
    return OptimalSearch(m, model, include_neg, bit_cap).circuit(c)
