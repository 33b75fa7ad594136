"""Independent checks on synthesized circuits.

Wire contents are integer keys over the input variables with ``x_1`` as the
most significant bit, matching :func:`paritynet.gf2.parity_key`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .circuit import CNOT, RZ, Circuit
from .gf2 import TWO_PI, ParityTable, column_keys, key_to_bits
from .topology import Topology

MAX_EQUIVALENCE_QUBITS = 12
PHASE_TOL = 1e-9


class VerificationError(ValueError):
    pass


@dataclass(frozen=True)
class WireState:
    n: int
    rows: tuple[int, ...]

    def matrix(self) -> np.ndarray:
        """``n x n`` 0/1 matrix; row ``w`` lists the inputs XOR-ed on wire ``w``."""
        return np.array([key_to_bits(r, self.n) for r in self.rows], dtype=np.uint8)

    def carries(self, key: int) -> list[int]:
        return [w + 1 for w, r in enumerate(self.rows) if r == key]


def identity_rows(n: int) -> list[int]:
    return [1 << (n - q) for q in range(1, n + 1)]


def simulate_wires(circuit: Circuit) -> Iterator[WireState]:
    """Wire state after every prefix of the circuit, starting with the empty one."""
    rows = identity_rows(circuit.n)
    yield WireState(circuit.n, tuple(rows))
    for g in circuit.gates:
        if isinstance(g, CNOT):
            rows[g.target - 1] ^= rows[g.control - 1]
        yield WireState(circuit.n, tuple(rows))


def final_wires(circuit: Circuit) -> WireState:
    rows = identity_rows(circuit.n)
    for g in circuit.cnots():
        rows[g.target - 1] ^= rows[g.control - 1]
    return WireState(circuit.n, tuple(rows))


@dataclass
class Check:
    ok: bool
    problems: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def is_parity_network(table: ParityTable, circuit: Circuit) -> Check:
    """Every column must equal some wire at some point (the input state counts)."""
    if table.n != circuit.n:
        raise VerificationError(f"table has {table.n} qubits, circuit has {circuit.n}")
    rows = identity_rows(circuit.n)
    seen = set(rows)
    for g in circuit.cnots():
        rows[g.target - 1] ^= rows[g.control - 1]
        seen.add(rows[g.target - 1])
    missing = [str(table.column(k)) for k, key in enumerate(column_keys(table.bits)) if key not in seen]
    return Check(not missing, missing)


def respects_topology(circuit: Circuit, g: Topology) -> Check:
    bad = [gate for gate in circuit.cnots() if not g.has_edge(gate.control, gate.target)]
    return Check(not bad, bad)


@dataclass
class Equivalence:
    ok: bool
    counterexample: int | None
    linear_map: np.ndarray

    def __bool__(self) -> bool:
        return self.ok


def _angle_close(a: np.ndarray, b: np.ndarray, tol: float) -> np.ndarray:
    d = np.mod(a - b, TWO_PI)
    return np.minimum(d, TWO_PI - d) <= tol


def functional_equivalence(circuit: Circuit, table: ParityTable, tol: float = PHASE_TOL) -> Equivalence:
    """Compare the circuit's phase on every basis state with ``sum_i angle_i * (y_i . x)``.

    ``Rz(theta)`` on a wire holding the Boolean value ``b`` contributes ``theta * b``
    (phases up to a global phase). Basis state ``x`` is indexed so that bit
    ``n - q`` of the index is ``x_q``.
    """
    n = circuit.n
    if n > MAX_EQUIVALENCE_QUBITS:
        raise VerificationError(f"functional equivalence limited to n <= {MAX_EQUIVALENCE_QUBITS}")
    if table.n != n:
        raise VerificationError(f"table has {table.n} qubits, circuit has {n}")
    xs = np.arange(1 << n, dtype=np.int64)
    values = [((xs >> (n - q)) & 1).astype(np.uint8) for q in range(1, n + 1)]
    phase = np.zeros(1 << n)
    for g in circuit.gates:
        if isinstance(g, CNOT):
            values[g.target - 1] = values[g.target - 1] ^ values[g.control - 1]
        elif isinstance(g, RZ):
            phase += g.angle * values[g.qubit - 1]

    expected = np.zeros(1 << n)
    if table.angles is not None:
        for k, key in enumerate(column_keys(table.bits)):
            parity = np.bitwise_count(xs & key) & 1
            expected += float(table.angles[k]) * parity

    match = _angle_close(phase, expected, tol)
    bad = np.flatnonzero(~match)
    return Equivalence(
        ok=bad.size == 0,
        counterexample=int(bad[0]) if bad.size else None,
        linear_map=final_wires(circuit).matrix(),
    )


def statevector_phases(circuit: Circuit) -> tuple[np.ndarray, np.ndarray]:
    """Brute-force simulation on the full ``2^n`` state vector.

    Returns ``(perm, phase)`` with ``U|x> = exp(i*phase[x]) |perm[x]>``.
    """
    n = circuit.n
    if n > MAX_EQUIVALENCE_QUBITS:
        raise VerificationError(f"state-vector simulation limited to n <= {MAX_EQUIVALENCE_QUBITS}")
    dim = 1 << n
    state = np.eye(dim, dtype=complex)  # column x = U|x>
    idx = np.arange(dim)
    for g in circuit.gates:
        if isinstance(g, CNOT):
            cbit, tbit = 1 << (n - g.control), 1 << (n - g.target)
            src = np.where(idx & cbit, idx ^ tbit, idx)
            state = state[src, :]
        else:
            qbit = 1 << (n - g.qubit)
            diag = np.where(idx & qbit, np.exp(1j * g.angle), 1.0)
            state = diag[:, None] * state
    perm = np.argmax(np.abs(state), axis=0)
    amp = state[perm, idx]
    if not np.allclose(np.abs(amp), 1.0):
        raise VerificationError("circuit is not a phased permutation")
    return perm, np.angle(amp)


def phases_match(phase: np.ndarray, table: ParityTable, tol: float = PHASE_TOL) -> bool:
    n = table.n
    xs = np.arange(1 << n, dtype=np.int64)
    expected = np.zeros(1 << n)
    if table.angles is not None:
        for k, key in enumerate(column_keys(table.bits)):
            expected += float(table.angles[k]) * (np.bitwise_count(xs & key) & 1)
    return bool(np.all(_angle_close(phase, expected, tol)))


def root_carries(circuit: Circuit, key: int) -> list[int]:
    return final_wires(circuit).carries(key)

