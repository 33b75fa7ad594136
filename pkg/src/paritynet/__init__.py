"""Parity network synthesis for phase polynomials, all-to-all and architecture-aware."""

from .circuit import CNOT, RZ, Circuit, export, insert_rotations, parse_circuit
from .gf2 import Parity, ParityTable, hamming_weight, parity_key, read_ptab, row_add, support, write_ptab
from .synth import (
    SynthesisConfig,
    SynthesisReport,
    choose_parity,
    sliding_window,
    synthesize,
    synthesize_alltoall,
    synthesize_arch,
    synthesize_arch_greedy,
)
from .topology import Topology, complete, from_edge_list, grid, line, parse_arch, ring
from .verify import functional_equivalence, is_parity_network, respects_topology, simulate_wires

__version__ = "0.1.0"
