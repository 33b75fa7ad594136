"""CNOT + Rz gate lists: counting, CNOT depth, rotation insertion and text export."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

from .gf2 import InvalidOperation, ParityTable, column_keys


class NotAParityNetwork(ValueError):
    """Raised when a circuit never produces some parity of the table."""

    def __init__(self, missing: list[str]):
        self.missing = missing
        super().__init__("parities never produced by the circuit: " + ", ".join(missing))


class CircuitFormatError(ValueError):
    pass


@dataclass(frozen=True)
class CNOT:
    control: int
    target: int

    def __post_init__(self):
        if self.control == self.target:
            raise InvalidOperation(f"CNOT with control == target == {self.control}")

    @property
    def qubits(self) -> tuple[int, int]:
        return (self.control, self.target)


@dataclass(frozen=True)
class RZ:
    qubit: int
    angle: float

    @property
    def qubits(self) -> tuple[int]:
        return (self.qubit,)


Gate = Union[CNOT, RZ]


@dataclass
class Circuit:
    """Ordered gate list over qubits ``1..n``."""

    n: int
    gates: list[Gate] = field(default_factory=list)

    def __post_init__(self):
        for g in self.gates:
            self._check(g)

    def _check(self, gate: Gate) -> None:
        for q in gate.qubits:
            if not 1 <= q <= self.n:
                raise InvalidOperation(f"{gate} references qubit {q} outside 1..{self.n}")

    def append_cnot(self, control: int, target: int) -> "Circuit":
        gate = CNOT(control, target)
        self._check(gate)
        self.gates.append(gate)
        return self

    def append_rz(self, qubit: int, angle: float) -> "Circuit":
        gate = RZ(qubit, angle)
        self._check(gate)
        self.gates.append(gate)
        return self

    def extend_cnots(self, pairs: Iterable[tuple[int, int]]) -> "Circuit":
        for c, t in pairs:
            self.append_cnot(c, t)
        return self

    def cnots(self) -> Iterator[CNOT]:
        return (g for g in self.gates if isinstance(g, CNOT))

    def cnot_count(self) -> int:
        return sum(1 for _ in self.cnots())

    def cnot_depth(self) -> int:
        return cnot_depth(self)

    def copy(self) -> "Circuit":
        return Circuit(self.n, list(self.gates))

    def __len__(self) -> int:
        return len(self.gates)


def append_cnot(circuit: Circuit, control: int, target: int) -> Circuit:
    return circuit.append_cnot(control, target)


def cnot_count(circuit: Circuit) -> int:
    return circuit.cnot_count()


def cnot_depth(circuit: Circuit) -> int:
    """ASAP layer count of the CNOTs; Rz gates do not occupy a layer."""
    level = [0] * (circuit.n + 1)
    depth = 0
    for g in circuit.cnots():
        d = max(level[g.control], level[g.target]) + 1
        level[g.control] = level[g.target] = d
        depth = max(depth, d)
    return depth


def insert_rotations(circuit: Circuit, table: ParityTable) -> Circuit:
    """Place ``Rz(angle)`` for every column of ``table`` where its parity first appears.

    Wire contents are tracked as integer keys (qubit 1 = most significant bit),
    so a column matches a wire exactly when their keys agree. The input state is
    the empty prefix; a rotation found there is emitted before any gate.
    """
    if table.n != circuit.n:
        raise InvalidOperation(f"table has {table.n} qubits, circuit has {circuit.n}")
    n = circuit.n
    if table.angles is None:
        return circuit.copy()

    wanted: dict[int, list[int]] = {}
    for k, key in enumerate(column_keys(table.bits)):
        if table.angles[k] != 0:
            wanted.setdefault(key, []).append(k)

    # slot p = after the first p gates of the input circuit
    placed: dict[int, list[RZ]] = {}

    def claim(slot: int, wire: int, key: int) -> None:
        for k in wanted.pop(key, ()):
            placed.setdefault(slot, []).append(RZ(wire, float(table.angles[k])))

    wires = [1 << (n - q) for q in range(1, n + 1)]
    for q in range(1, n + 1):
        claim(0, q, wires[q - 1])
    for pos, gate in enumerate(circuit.gates, start=1):
        if not wanted:
            break
        if isinstance(gate, CNOT):
            wires[gate.target - 1] ^= wires[gate.control - 1]
            claim(pos, gate.target, wires[gate.target - 1])

    if wanted:
        missing = sorted(k for ks in wanted.values() for k in ks)
        raise NotAParityNetwork([str(table.column(k)) for k in missing])

    out = Circuit(n, list(placed.get(0, [])))
    for pos, gate in enumerate(circuit.gates, start=1):
        out.gates.append(gate)
        out.gates.extend(placed.get(pos, ()))
    return out


# ------------------------------------------------------------------- export

FORMATS = ("gatelist", "qasm2")


def _gatelist(circuit: Circuit) -> str:
    lines = []
    for g in circuit.gates:
        if isinstance(g, CNOT):
            lines.append(f"cnot {g.control} {g.target}")
        else:
            lines.append(f"rz {g.angle!r} {g.qubit}")
    return "".join(line + "\n" for line in lines)


def _qasm2(circuit: Circuit) -> str:
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{circuit.n}];"]
    for g in circuit.gates:
        if isinstance(g, CNOT):
            lines.append(f"cx q[{g.control - 1}],q[{g.target - 1}];")
        else:
            lines.append(f"rz({g.angle!r}) q[{g.qubit - 1}];")
    return "\n".join(lines) + "\n"


def export(circuit: Circuit, fmt: str = "gatelist") -> str:
    if fmt == "gatelist":
        return _gatelist(circuit)
    if fmt == "qasm2":
        return _qasm2(circuit)
    raise ValueError(f"unknown circuit format {fmt!r}; expected one of {FORMATS}")


def parse_gatelist(text: str, n: int | None = None) -> Circuit:
    """Inverse of the ``gatelist`` export. ``n`` defaults to the largest qubit used.

    A ``qubits <n>`` line is also accepted so that circuits can carry their width.
    """
    gates: list[Gate] = []
    declared = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        try:
            if fields[0] == "qubits" and len(fields) == 2:
                declared = int(fields[1])
            elif fields[0] == "cnot" and len(fields) == 3:
                gates.append(CNOT(int(fields[1]), int(fields[2])))
            elif fields[0] == "rz" and len(fields) == 3:
                gates.append(RZ(int(fields[2]), float(fields[1])))
            else:
                raise CircuitFormatError(f"line {lineno}: cannot parse {line!r}")
        except (ValueError, InvalidOperation) as exc:
            if isinstance(exc, CircuitFormatError):
                raise
            raise CircuitFormatError(f"line {lineno}: {exc}") from None
    width = n if n is not None else declared
    if width is None:
        width = max((q for g in gates for q in g.qubits), default=1)
    try:
        return Circuit(width, gates)
    except InvalidOperation as exc:
        raise CircuitFormatError(str(exc)) from None


_QASM_HEADER = re.compile(r"^(OPENQASM\s+2\.0|include\s+\"qelib1\.inc\")\s*;$")
_QASM_QREG = re.compile(r"^qreg\s+q\[(\d+)\]\s*;$")
_QASM_CX = re.compile(r"^cx\s+q\[(\d+)\]\s*,\s*q\[(\d+)\]\s*;$")
_QASM_RZ = re.compile(r"^rz\(([^)]+)\)\s+q\[(\d+)\]\s*;$")


def parse_qasm2(text: str) -> Circuit:
    """Read back the subset of OpenQASM 2.0 written by :func:`export`."""
    n = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0].strip()
        if not line or _QASM_HEADER.match(line):
            continue
        if m := _QASM_QREG.match(line):
            n = int(m.group(1))
        elif m := _QASM_CX.match(line):
            gates.append(CNOT(int(m.group(1)) + 1, int(m.group(2)) + 1))
        elif m := _QASM_RZ.match(line):
            try:
                angle = float(m.group(1))
            except ValueError:
                raise CircuitFormatError(f"line {lineno}: unsupported angle {m.group(1)!r}") from None
            gates.append(RZ(int(m.group(2)) + 1, angle))
        else:
            raise CircuitFormatError(f"line {lineno}: unsupported statement {line!r}")
    if n is None:
        raise CircuitFormatError("missing qreg declaration")
    try:
        return Circuit(n, gates)
    except InvalidOperation as exc:
        raise CircuitFormatError(str(exc)) from None


def parse_circuit(text: str, n: int | None = None) -> Circuit:
    """Gatelist or OpenQASM 2.0, detected from the first statement."""
    head = text.lstrip()
    if head.startswith("OPENQASM"):
        circuit = parse_qasm2(text)
        if n is not None and circuit.n != n:
            raise CircuitFormatError(f"circuit declares {circuit.n} qubits, expected {n}")
        return circuit
    return parse_gatelist(text, n)
