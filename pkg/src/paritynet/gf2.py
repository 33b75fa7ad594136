"""Dense GF(2) parities and parity tables.

A parity table is an ``n x m`` 0/1 matrix: row ``i`` belongs to qubit ``i``
(1-indexed in every public API) and column ``k`` is the ``k``-th parity.
Bits are stored as ``uint8`` numpy arrays so that row additions and weight
counts run as vectorised XOR / sum operations.

Integer keys read a parity with qubit 1 as the most significant bit; the same
convention is used by :func:`parity_key`, by the ``.ptab`` bitstrings (leftmost
character is qubit 1) and by the wire-state simulator in :mod:`paritynet.verify`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi
_ZERO_ANGLE_TOL = 1e-12


class InvalidOperation(ValueError):
    """Raised for ill-formed GF(2) operations (e.g. adding a row to itself)."""


class TableFormatError(ValueError):
    """Raised when a parity table cannot be ingested."""


@dataclass(frozen=True)
class Parity:
    """A nonzero GF(2) vector with an optional rotation angle in radians."""

    bits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise TableFormatError(f"parity bits must be 0/1, got {self.bits}")

    @classmethod
    def from_string(cls, text: str, angle: float | None = None) -> "Parity":
        if not text or any(ch not in "01" for ch in text):
            raise TableFormatError(f"not a bitstring: {text!r}")
        return cls(tuple(int(ch) for ch in text), angle)

    @classmethod
    def from_support(cls, qubits: Iterable[int], n: int, angle: float | None = None) -> "Parity":
        bits = [0] * n
        for q in qubits:
            if not 1 <= q <= n:
                raise TableFormatError(f"qubit {q} outside 1..{n}")
            bits[q - 1] = 1
        return cls(tuple(bits), angle)

    @property
    def n(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


def hamming_weight(v) -> int:
    """Number of 1-entries of a parity, a parity table, or a 0/1 array."""
    if isinstance(v, Parity):
        return sum(v.bits)
    if isinstance(v, ParityTable):
        return int(v.bits.sum())
    return int(np.asarray(v, dtype=np.int64).sum())


def parity_key(y) -> int:
    """Integer value of a parity, qubit 1 being the most significant bit."""
    bits = y.bits if isinstance(y, Parity) else y
    key = 0
    for b in bits:
        key = (key << 1) | int(b)
    return key


def support(y) -> set[int]:
    """1-indexed qubits on which the parity is 1."""
    bits = y.bits if isinstance(y, Parity) else y
    return {i + 1 for i, b in enumerate(bits) if b}


def column_keys(bits: np.ndarray) -> list[int]:
    """:func:`parity_key` of every column of a 0/1 matrix, vectorised when it fits in int64."""
    n = bits.shape[0]
    if bits.shape[1] == 0:
        return []
    if n <= 62:
        powers = np.left_shift(np.int64(1), np.arange(n - 1, -1, -1, dtype=np.int64))
        return (powers @ bits.astype(np.int64)).tolist()
    # leading zero padding from packbits shifts every key by the same amount
    pad = (-n) % 8
    packed = np.packbits(np.vstack([np.zeros((pad, bits.shape[1]), np.uint8), bits]), axis=0)
    return [int.from_bytes(packed[:, c].tobytes(), "big") for c in range(bits.shape[1])]


def key_to_bits(key: int, n: int) -> np.ndarray:
    return np.array([(key >> (n - 1 - i)) & 1 for i in range(n)], dtype=np.uint8)


class ParityTable:
    """An ``n x m`` GF(2) parity table with optional per-column angles.

    Construction is the ingestion point: zero columns are rejected and duplicate
    columns are merged. With angles, merged angles are summed modulo 2*pi and a
    column whose angle is 0 is dropped. Without angles no column is ever dropped.
    """

    __slots__ = ("bits", "angles")

    def __init__(self, bits, angles: Sequence[float] | None = None):
        arr = np.array(bits, dtype=np.uint8, copy=True)
        if arr.ndim != 2:
            raise TableFormatError("parity table must be a 2-d array (qubits x parities)")
        if arr.shape[0] < 1:
            raise TableFormatError("parity table needs at least one qubit")
        if np.any(arr > 1):
            raise TableFormatError("parity table entries must be 0 or 1")
        if angles is not None and len(angles) != arr.shape[1]:
            raise TableFormatError(
                f"{len(angles)} angles given for {arr.shape[1]} parities"
            )
        zero = np.flatnonzero(arr.sum(axis=0) == 0)
        if zero.size:
            raise TableFormatError(f"column {int(zero[0]) + 1} is the all-zero parity")

        keys = column_keys(arr)
        first: dict[int, int] = {}
        order: list[int] = []
        merged: list[float] = []
        counts: list[int] = []
        for c, key in enumerate(keys):
            if key in first:
                slot = first[key]
                counts[slot] += 1
                if angles is not None:
                    merged[slot] += float(angles[c])
                continue
            first[key] = len(order)
            order.append(c)
            counts.append(1)
            if angles is not None:
                merged.append(float(angles[c]))

        if angles is None:
            self.bits = arr[:, order]
            self.angles = None
            return

        keep_cols, keep_angles = [], []
        for slot, c in enumerate(order):
            theta = merged[slot]
            if counts[slot] > 1:
                theta = math.fmod(theta, TWO_PI)
            residue = math.fmod(theta, TWO_PI)
            if min(abs(residue), TWO_PI - abs(residue)) <= _ZERO_ANGLE_TOL:
                continue
            keep_cols.append(c)
            keep_angles.append(theta)
        self.bits = arr[:, keep_cols]
        self.angles = np.array(keep_angles, dtype=float)

    @classmethod
    def _trusted(cls, bits: np.ndarray, angles: np.ndarray | None) -> "ParityTable":
        table = cls.__new__(cls)
        table.bits = bits
        table.angles = angles
        return table

    @classmethod
    def from_parities(cls, parities: Sequence[Parity], n: int | None = None) -> "ParityTable":
        if not parities and n is None:
            raise TableFormatError("cannot infer qubit count of an empty table")
        n = parities[0].n if n is None else n
        if any(p.n != n for p in parities):
            raise TableFormatError(f"all parities must have length {n}")
        with_angle = [p.angle is not None for p in parities]
        if any(with_angle) and not all(with_angle):
            raise TableFormatError("either every parity carries an angle or none does")
        bits = np.array([p.bits for p in parities], dtype=np.uint8).T.reshape(n, len(parities))
        angles = [p.angle for p in parities] if parities and all(with_angle) else None
        return cls(bits, angles)

    @classmethod
    def from_strings(cls, columns: Sequence[str], angles: Sequence[float] | None = None) -> "ParityTable":
        """Table whose columns are given as bitstrings (leftmost character = qubit 1)."""
        parities = [Parity.from_string(s) for s in columns]
        return cls(np.array([p.bits for p in parities], dtype=np.uint8).T, angles)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], angles: Sequence[float] | None = None) -> "ParityTable":
        return cls(np.array(rows, dtype=np.uint8), angles)

    @property
    def n(self) -> int:
        return self.bits.shape[0]

    @property
    def m(self) -> int:
        return self.bits.shape[1]

    @property
    def has_angles(self) -> bool:
        return self.angles is not None

    def column(self, k: int) -> Parity:
        """Column ``k`` (0-based position in the table)."""
        angle = None if self.angles is None else float(self.angles[k])
        return Parity(tuple(int(b) for b in self.bits[:, k]), angle)

    @property
    def columns(self) -> list[Parity]:
        return [self.column(k) for k in range(self.m)]

    def keys(self) -> list[int]:
        return column_keys(self.bits)

    def row_add(self, i: int, j: int) -> "ParityTable":
        """Copy of the table with row ``i`` replaced by ``row i XOR row j`` (effect of CNOT(i, j))."""
        bits = self.bits.copy()
        row_add_inplace(bits, i, j)
        return ParityTable._trusted(bits, None if self.angles is None else self.angles.copy())

    def without_angles(self) -> "ParityTable":
        return ParityTable._trusted(self.bits.copy(), None)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ParityTable):
            return NotImplemented
        if self.bits.shape != other.bits.shape or not np.array_equal(self.bits, other.bits):
            return False
        if (self.angles is None) != (other.angles is None):
            return False
        return self.angles is None or np.array_equal(self.angles, other.angles)

    def __repr__(self) -> str:
        return f"ParityTable(n={self.n}, m={self.m}, angles={self.has_angles})"


def row_add_inplace(bits: np.ndarray, i: int, j: int) -> None:
    """``bits[i] ^= bits[j]`` for 1-indexed rows."""
    n = bits.shape[0]
    if i == j:
        raise InvalidOperation(f"row addition of row {i} to itself")
    if not (1 <= i <= n and 1 <= j <= n):
        raise InvalidOperation(f"rows ({i}, {j}) outside 1..{n}")
    np.bitwise_xor(bits[i - 1], bits[j - 1], out=bits[i - 1])


def row_add(table: ParityTable, i: int, j: int) -> ParityTable:
    return table.row_add(i, j)


# ---------------------------------------------------------------- .ptab files


def parse_ptab(text: str) -> ParityTable:
    """Parse the ``.ptab`` text format.

    ``qubits <n>`` first, then one bitstring per line, optionally followed by an
    angle in radians. ``#`` starts a comment.
    """
    n = None
    parities: list[Parity] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if n is None:
            if fields[0] != "qubits" or len(fields) != 2:
                raise TableFormatError(f"line {lineno}: expected 'qubits <n>'")
            try:
                n = int(fields[1])
            except ValueError:
                raise TableFormatError(f"line {lineno}: bad qubit count {fields[1]!r}") from None
            if n < 1:
                raise TableFormatError(f"line {lineno}: qubit count must be positive")
            continue
        if len(fields) > 2:
            raise TableFormatError(f"line {lineno}: expected '<bits> [angle]'")
        if len(fields[0]) != n:
            raise TableFormatError(f"line {lineno}: parity has {len(fields[0])} bits, expected {n}")
        angle = None
        if len(fields) == 2:
            try:
                angle = float(fields[1])
            except ValueError:
                raise TableFormatError(f"line {lineno}: bad angle {fields[1]!r}") from None
        try:
            parities.append(Parity.from_string(fields[0], angle))
        except TableFormatError as exc:
            raise TableFormatError(f"line {lineno}: {exc}") from None
    if n is None:
        raise TableFormatError("missing 'qubits <n>' header")
    if not parities:
        return ParityTable(np.zeros((n, 0), dtype=np.uint8))
    return ParityTable.from_parities(parities, n)


def format_ptab(table: ParityTable) -> str:
    lines = [f"qubits {table.n}"]
    for k in range(table.m):
        bits = "".join("1" if b else "0" for b in table.bits[:, k])
        if table.angles is None:
            lines.append(bits)
        else:
            lines.append(f"{bits} {float(table.angles[k])!r}")
    return "\n".join(lines) + "\n"


def read_ptab(path) -> ParityTable:
    with open(path, encoding="utf-8") as fh:
        return parse_ptab(fh.read())


def write_ptab(table: ParityTable, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_ptab(table))
