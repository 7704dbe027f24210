"""Exact central-spin decoherence and dynamical-decoupling simulator.

Thin Python layer over the C++ core: lattice/coupling construction, bath
preparation, Chebyshev time evolution, pulse-sequence fidelity traces, and
the scenario runner.
"""

from ._core import (
    CouplingStats,
    FidelityTrace,
    HyperfineSet,
    LatticeSpec,
    apply_hamiltonian,
    compute_couplings,
    coupling_stats,
    dnp_train,
    evolve,
    list_scenarios,
    measure_polarization,
    polarization_profile,
    predict_magic_peak,
    prepare_bath,
    run_scenario_json,
    run_sequence,
    spectrum,
    t_threshold,
    tune_beta_for_p,
)

__version__ = "0.1.0"

__all__ = [
    "CouplingStats",
    "FidelityTrace",
    "HyperfineSet",
    "LatticeSpec",
    "apply_hamiltonian",
    "compute_couplings",
    "coupling_stats",
    "dnp_train",
    "evolve",
    "list_scenarios",
    "measure_polarization",
    "polarization_profile",
    "predict_magic_peak",
    "prepare_bath",
    "run_scenario_json",
    "run_sequence",
    "spectrum",
    "t_threshold",
    "tune_beta_for_p",
]
