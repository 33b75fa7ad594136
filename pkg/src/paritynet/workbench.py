"""Random instances, the uncompute baseline and the benchmark harness."""

from __future__ import annotations

import csv
import io
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass
from typing import Iterable

import numpy as np

from .arborescence import traversal_sequence, tree_arborescence
from .circuit import Circuit
from .gf2 import ParityTable, key_to_bits
from .steiner import fill_in, steiner_tree
from .synth import SynthesisConfig, synthesize
from .topology import Topology, parse_arch
from .verify import is_parity_network, respects_topology

log = logging.getLogger(__name__)

RNG_ALGORITHM = "numpy.random.Generator(PCG64)"
CSV_HEADER = ("arch", "n", "m", "density", "mode", "seed", "cnot_count", "cnot_depth", "wall_time_s")
MAX_RANDOM_QUBITS = 62


class BenchSpecError(ValueError):
    pass


def density_of(n: int, m: int) -> float:
    return 100.0 * m / ((1 << n) - 1)


def m_for_density(n: int, density: float) -> int:
    """Parity count for a density in percent, floored, at least 1."""
    return max(1, math.floor(density / 100.0 * ((1 << n) - 1) + 1e-9))


def random_table(n: int, m: int, seed: int, angles: bool = False) -> ParityTable:
    """``m`` distinct nonzero parities drawn uniformly without replacement, in random order."""
    if not 1 <= n <= MAX_RANDOM_QUBITS:
        raise ValueError(f"random tables support 1 <= n <= {MAX_RANDOM_QUBITS}, got {n}")
    total = (1 << n) - 1
    if not 1 <= m <= total:
        raise ValueError(f"m must be in 1..{total} for n={n}, got {m}")
    rng = np.random.default_rng(seed)
    keys = rng.choice(total, size=m, replace=False) + 1
    bits = np.array([key_to_bits(int(k), n) for k in keys], dtype=np.uint8).T
    thetas = rng.uniform(0.0, 2 * math.pi, size=m).tolist() if angles else None
    return ParityTable(bits, thetas)


def naive_baseline(table: ParityTable, g: Topology) -> Circuit:
    """Synthesise each parity from the identity wiring, then undo the gates."""
    if g.n != table.n:
        raise ValueError(f"topology has {g.n} vertices but the table has {table.n} qubits")
    circuit = Circuit(table.n)
    for k in range(table.m):
        verts = [int(i) + 1 for i in np.flatnonzero(table.bits[:, k])]
        tree = steiner_tree(verts, g)
        pairs = fill_in(tree)
        if len(tree.vertices) > 1:
            pairs += traversal_sequence(tree_arborescence(tree.edges, min(tree.terminals)))
        circuit.extend_cnots(pairs)
        circuit.extend_cnots(reversed(pairs))
    return circuit


# ----------------------------------------------------------------- benchmark


@dataclass
class BenchRecord:
    arch: str
    n: int
    m: int
    density: float
    mode: str
    seed: int | str
    cnot_count: int | float | str
    cnot_depth: int | float | str
    wall_time_s: float | str

    def row(self) -> list:
        out = []
        for v in astuple(self):
            out.append(f"{v:.6g}" if isinstance(v, float) else v)
        return out


@dataclass(frozen=True)
class BenchSpec:
    archs: tuple[str, ...]
    modes: tuple[str, ...]
    densities: tuple[float, ...] = ()
    ms: tuple[int, ...] = ()
    reps: int = 1
    seed: int = 0
    k_trunc: int = 10

    def cells(self) -> list[tuple[str, int]]:
        """``(arch, m)`` pairs in run order."""
        out = []
        for arch in self.archs:
            n = parse_arch(arch).n
            sizes = [m_for_density(n, d) for d in self.densities] + list(self.ms)
            out.extend((arch, m) for m in sizes)
        return out


def parse_mode(token: str) -> tuple[str, int | None]:
    """``arch``, ``arch-greedy``, ``alltoall`` or ``naive``, optionally suffixed ``+w<alpha>``."""
    base, _, win = token.partition("+")
    if base not in ("alltoall", "arch", "arch-greedy", "naive"):
        raise BenchSpecError(f"unknown mode {token!r}")
    if not win:
        return base, None
    if not win.startswith("w") or not win[1:].isdigit() or int(win[1:]) < 1:
        raise BenchSpecError(f"bad window suffix in {token!r}; expected +w<alpha>")
    if base == "naive":
        raise BenchSpecError("the naive baseline has no window")
    return base, int(win[1:])


def parse_bench_spec(text: str) -> BenchSpec:
    """Key-value bench description.

    Keys: ``arch``, ``modes`` (comma lists), ``density`` (percent) and/or ``m``
    (comma lists), ``reps``, ``seed``, ``k``. ``#`` starts a comment.
    """
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise BenchSpecError(f"line {lineno}: expected 'key = value'")
        key = key.strip()
        if key not in ("arch", "modes", "density", "m", "reps", "seed", "k"):
            raise BenchSpecError(f"line {lineno}: unknown key {key!r}")
        values[key] = val.strip()

    def items(key: str) -> list[str]:
        return [t.strip() for t in values.get(key, "").split(",") if t.strip()]

    try:
        spec = BenchSpec(
            archs=tuple(items("arch")),
            modes=tuple(items("modes")),
            densities=tuple(float(d) for d in items("density")),
            ms=tuple(int(m) for m in items("m")),
            reps=int(values.get("reps", 1)),
            seed=int(values.get("seed", 0)),
            k_trunc=int(values.get("k", 10)),
        )
    except ValueError as exc:
        raise BenchSpecError(str(exc)) from None
    if not spec.archs or not spec.modes:
        raise BenchSpecError("bench spec needs 'arch' and 'modes'")
    if not spec.densities and not spec.ms:
        raise BenchSpecError("bench spec needs 'density' or 'm'")
    if spec.reps < 1:
        raise BenchSpecError("reps must be >= 1")
    for mode in spec.modes:
        parse_mode(mode)
    for d in spec.densities:
        if not 0 < d <= 100:
            raise BenchSpecError(f"density {d} outside (0, 100]")
    return spec


def run_one(arch: str, m: int, mode: str, seed: int, k_trunc: int = 10) -> tuple[BenchRecord, bool]:
    """One synthesis run; verification happens after the clock stops."""
    g = parse_arch(arch)
    table = random_table(g.n, m, seed)
    base, window = parse_mode(mode)
    if base == "naive":
        start = time.perf_counter()
        circuit = naive_baseline(table, g)
        elapsed = time.perf_counter() - start
    else:
        config = SynthesisConfig(base, window=window, k_trunc=k_trunc, topology=g)
        report = synthesize(table, config)
        circuit, elapsed = report.circuit, report.wall_time
    ok = bool(is_parity_network(table, circuit))
    if base != "alltoall":
        ok = ok and bool(respects_topology(circuit, g))
    record = BenchRecord(
        arch, g.n, m, round(density_of(g.n, m), 4), mode, seed,
        circuit.cnot_count() if ok else "fail",
        circuit.cnot_depth() if ok else "fail",
        elapsed,
    )
    return record, ok


def _run_job(job: tuple) -> tuple[BenchRecord, bool]:
    return run_one(*job)


def bench(spec: BenchSpec, jobs: int = 1) -> tuple[list[BenchRecord], int]:
    """Run every cell and repetition; return records (runs then per-cell means) and failure count.

    Repetition ``r`` of every cell uses seed ``spec.seed + r`` so all modes see the same tables.
    """
    work = [
        (arch, m, mode, spec.seed + r, spec.k_trunc)
        for arch, m in spec.cells()
        for mode in spec.modes
        for r in range(spec.reps)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_job, work, chunksize=1))
    else:
        results = [_run_job(job) for job in work]

    records = [rec for rec, _ in results]
    failures = sum(1 for _, ok in results if not ok)
    for (rec, ok) in results:
        if not ok:
            log.error("verification failed: %s m=%d mode=%s seed=%s", rec.arch, rec.m, rec.mode, rec.seed)

    means = []
    for arch, m in spec.cells():
        for mode in spec.modes:
            cell = [r for r in records if r.arch == arch and r.m == m and r.mode == mode]
            good = [r for r in cell if r.cnot_count != "fail"]
            if not good:
                continue
            means.append(BenchRecord(
                arch, cell[0].n, m, cell[0].density, mode, "mean",
                float(np.mean([r.cnot_count for r in good])),
                float(np.mean([r.cnot_depth for r in good])),
                float(np.mean([r.wall_time_s for r in good])),
            ))
    return records + means, failures


def to_csv(records: Iterable[BenchRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        writer.writerow(rec.row())
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))

