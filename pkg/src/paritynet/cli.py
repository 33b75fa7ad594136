"""Command line entry point: ``paritynet gen | synth | verify | bench``."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .circuit import CircuitFormatError, export, insert_rotations, parse_circuit
from .gf2 import TableFormatError, format_ptab, read_ptab
from .synth import MODES, SynthesisConfig, SynthesisError, synthesize
from .topology import TopologyError, parse_arch
from .verify import VerificationError, functional_equivalence, is_parity_network, respects_topology
from .workbench import (
    RNG_ALGORITHM,
    BenchSpecError,
    bench,
    m_for_density,
    parse_bench_spec,
    random_table,
    to_csv,
)

USAGE_ERRORS = (TableFormatError, TopologyError, CircuitFormatError, BenchSpecError, SynthesisError,
                VerificationError, OSError, ValueError)


class UsageError(Exception):
    pass


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_gen(args) -> int:
    if (args.m is None) == (args.density is None):
        raise UsageError("give exactly one of --m / --density")
    m = args.m if args.m is not None else m_for_density(args.qubits, args.density)
    table = random_table(args.qubits, m, args.seed, angles=args.angles)
    header = f"# generated by {RNG_ALGORITHM} seed={args.seed} n={args.qubits} m={m}\n"
    _write(args.out, header + format_ptab(table))
    return 0


def cmd_synth(args) -> int:
    table = read_ptab(args.table)
    topology = parse_arch(args.arch) if args.arch else None
    if args.mode != "alltoall" and topology is None:
        raise UsageError(f"--mode {args.mode} needs --arch")
    config = SynthesisConfig(args.mode, window=args.window, k_trunc=args.k, topology=topology)
    report = synthesize(table, config)
    circuit = report.circuit
    if table.has_angles and not args.no_rotations:
        circuit = insert_rotations(circuit, table)
    _write(args.out, export(circuit, args.format))
    if args.report:
        payload = report.to_dict()
        payload["metrics"]["rng"] = RNG_ALGORITHM
        _write(args.report, json.dumps(payload, indent=2) + "\n")
    return 0


def cmd_verify(args) -> int:
    table = read_ptab(args.table)
    with open(args.circuit, encoding="utf-8") as fh:
        circuit = parse_circuit(fh.read(), table.n)
    failed = False
    check = is_parity_network(table, circuit)
    if not check:
        failed = True
        print("not a parity network; missing: " + ", ".join(check.problems), file=sys.stderr)
    if args.arch:
        comp = respects_topology(circuit, parse_arch(args.arch))
        if not comp:
            failed = True
            bad = ", ".join(f"cnot {g.control} {g.target}" for g in comp.problems)
            print(f"gates off the coupling graph: {bad}", file=sys.stderr)
    has_rz = len(circuit) != circuit.cnot_count()
    if table.has_angles and has_rz and table.n <= 12:
        eq = functional_equivalence(circuit, table)
        if not eq:
            failed = True
            print(f"phase mismatch on basis state {eq.counterexample}", file=sys.stderr)
    if not failed:
        print("ok")
    return 1 if failed else 0


def cmd_bench(args) -> int:
    with open(args.spec, encoding="utf-8") as fh:
        spec = parse_bench_spec(fh.read())
    records, failures = bench(spec, jobs=args.jobs)
    _write(args.out, to_csv(records))
    if failures:
        print(f"{failures} run(s) failed verification", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paritynet", description="Parity network synthesis.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="random parity table (.ptab)")
    p.add_argument("--qubits", "-n", type=int, required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--density", type=float, help="percent of all 2^n - 1 parities")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--angles", action="store_true", help="attach uniform random angles")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("synth", help="synthesise a parity network")
    p.add_argument("--table", required=True)
    p.add_argument("--arch", help="grid:WxH | line:N | ring:N | complete:N | file:PATH")
    p.add_argument("--mode", choices=MODES, default="alltoall")
    p.add_argument("--window", type=int)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--out", "-o")
    p.add_argument("--format", choices=("gatelist", "qasm2"), default="gatelist")
    p.add_argument("--report", help="write JSON metrics and trace here")
    p.add_argument("--no-rotations", action="store_true", help="skip Rz insertion for tables with angles")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("verify", help="check a circuit against a table")
    p.add_argument("--table", required=True)
    p.add_argument("--circuit", required=True)
    p.add_argument("--arch")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="run a benchmark matrix, write CSV")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", "-o")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, *USAGE_ERRORS) as exc:
        print(f"paritynet {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
