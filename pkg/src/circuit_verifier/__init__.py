"""Exact-arithmetic verification of circuits (1-cycles) in the accelerated 3x+1 and 3x-1 maps."""

from .arith import BigRational, NotCoprime, Residue, canonical_residue, mod_inverse, mod_pow, two_adic_valuation
from .dynamics import (
    CircuitParams,
    Cycle,
    Sign,
    accel_step,
    circuit_max_element,
    descent_count,
    find_cycles,
    is_circuit,
    search_cycles,
    steiner_ratio,
)
from .residues import (
    GradedExponents,
    ResiduePair,
    closed_form_residues,
    engine_a,
    engine_b,
    engine_b_lambda,
    engine_b_mu,
    engine_c,
)
from .verify import (
    hypothesis_window,
    lemma_plus_condition,
    steiner_ratio_scan,
    verify_minus_circuits,
    verify_steiner_circuits,
)

__version__ = "0.1.0"
