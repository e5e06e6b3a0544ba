"""Discrete Hilbert transform, Riesz potential and the fractional series
operator on finitely supported sequences, with discrete Hardy-space atoms,
certified tail enclosures and a certified sign computation showing that the
symmetric operator does not map H^p into H^q."""

from discrete_hardy.atoms import (
    AtomReport,
    AtomSpec,
    Diverged,
    hardy_quasinorm,
    nearest_moment_free,
    random_atom,
    validate_atom,
)
from discrete_hardy.counterexample import (
    COUNTER_SEQUENCE,
    InconclusiveEnclosure,
    certify_unbounded,
    epsilon_root,
    g_eval,
    h_eval,
    paper_chain_check,
    sign_scan,
    total_sum_enclosure,
)
from discrete_hardy.fastops import WindowPlan, hilbert_apply_fast, riesz_apply_fast, throughput_benchmark
from discrete_hardy.kernels import BACKEND
from discrete_hardy.operators import (
    OperatorParams,
    TaylorTailSpec,
    fractional_apply,
    hilbert_apply,
    hilbert_tail_bound,
    image_tail_bound,
    kernel_derivative_bound,
    kernel_eval,
    riesz_apply,
)
from discrete_hardy.report import ExperimentReport
from discrete_hardy.seqcore import ZERO, Enclosure, Sequence, lp_norm, make_sequence, maximal_apply, moment

__version__ = "0.1.0"

__all__ = [
    "AtomReport", "AtomSpec", "BACKEND", "COUNTER_SEQUENCE", "Diverged", "Enclosure", "ExperimentReport",
    "InconclusiveEnclosure", "OperatorParams", "Sequence", "TaylorTailSpec", "WindowPlan", "ZERO",
    "certify_unbounded", "epsilon_root", "fractional_apply", "g_eval", "h_eval", "hardy_quasinorm",
    "hilbert_apply", "hilbert_apply_fast", "hilbert_tail_bound", "image_tail_bound", "kernel_derivative_bound",
    "kernel_eval", "lp_norm", "make_sequence", "maximal_apply", "moment", "nearest_moment_free",
    "paper_chain_check", "random_atom", "riesz_apply", "riesz_apply_fast", "sign_scan", "throughput_benchmark",
    "total_sum_enclosure", "validate_atom",
]
