"""Tripartite steering distillation toolkit.

Builds steering assemblages from generalized GHZ states, simulates and
optimizes the N-copy local-filtering distillation protocol, and quantifies
the result via assemblage fidelity and genuine-steering witnesses.
"""

from .assemblage import (
    Assemblage,
    Scenario,
    ValidationReport,
    assemblage_from_state,
    convex_mix,
    gghz_assemblage_1sdi,
    gghz_assemblage_2sdi,
    ghz_assemblage,
    validate,
)
from .distillation import (
    DistillationConfig,
    FilterOp,
    OptimizationResult,
    apply_filter,
    asymptotic_kappa,
    distill,
    distilled_assemblage,
    kappa_prime_ncopy_fidelity,
    make_filter,
    optimize_kappa,
    two_copy_fidelity_closed_form,
    two_copy_optimal_kappa,
)
from .linalg import eig_hermitian, kron, partial_trace, psd_sqrt
from .metrics import (
    WitnessResult,
    assemblage_fidelity,
    root_fidelity,
    witness,
    witness_1sdi,
    witness_2sdi,
)
from .protocol import (
    SimOutcome,
    run_protocol,
    single_copy_success_probability,
    success_probability,
)
from .states import MeasurementSet, PureState, gghz, pauli_xyz

__version__ = "0.1.0"

__all__ = [
    "Assemblage",
    "DistillationConfig",
    "FilterOp",
    "MeasurementSet",
    "OptimizationResult",
    "PureState",
    "Scenario",
    "SimOutcome",
    "ValidationReport",
    "WitnessResult",
    "apply_filter",
    "assemblage_fidelity",
    "assemblage_from_state",
    "asymptotic_kappa",
    "convex_mix",
    "distill",
    "distilled_assemblage",
    "eig_hermitian",
    "gghz",
    "gghz_assemblage_1sdi",
    "gghz_assemblage_2sdi",
    "ghz_assemblage",
    "kappa_prime_ncopy_fidelity",
    "kron",
    "make_filter",
    "optimize_kappa",
    "partial_trace",
    "pauli_xyz",
    "psd_sqrt",
    "root_fidelity",
    "run_protocol",
    "single_copy_success_probability",
    "success_probability",
    "two_copy_fidelity_closed_form",
    "two_copy_optimal_kappa",
    "validate",
    "witness",
    "witness_1sdi",
    "witness_2sdi",
]
