"""Simulation of single-spin-state amplification in dipolar-coupled clusters."""

from .averaging import (
    AveragingJob,
    average_hamiltonian,
    compare_effective,
    stable_average,
    toggled_operator,
)
from .dynamics import PolarizationTrace, cnot_chain, density_at, evolve, initial_state
from .errors import ConfigurationError, ConvergenceError, NumericalIntegrityError
from .metrics import MetricsSummary, amplification, contrast, effectiveness, summarize
from .models import (
    CouplingGraph,
    ModelSpec,
    build_graph,
    build_hamiltonian,
    chain_couplings,
    hub_couplings,
    ring_couplings,
    ring_hub_couplings,
)
from .pipeline import RunResult, run_pair
from .presets import PRESETS, REFERENCE_VALUES, TABLE_PRESETS, preset_spec
from .spin_algebra import (
    SystemLayout,
    commutator,
    hermitian_exponential,
    single_spin_operator,
    two_spin_coupling,
)

__version__ = "0.1.0"

__all__ = [
    "AveragingJob",
    "ConfigurationError",
    "ConvergenceError",
    "CouplingGraph",
    "MetricsSummary",
    "ModelSpec",
    "NumericalIntegrityError",
    "PRESETS",
    "PolarizationTrace",
    "REFERENCE_VALUES",
    "RunResult",
    "SystemLayout",
    "TABLE_PRESETS",
    "amplification",
    "average_hamiltonian",
    "build_graph",
    "build_hamiltonian",
    "chain_couplings",
    "cnot_chain",
    "commutator",
    "compare_effective",
    "contrast",
    "density_at",
    "effectiveness",
    "evolve",
    "hermitian_exponential",
    "hub_couplings",
    "initial_state",
    "preset_spec",
    "ring_couplings",
    "ring_hub_couplings",
    "run_pair",
    "single_spin_operator",
    "stable_average",
    "summarize",
    "toggled_operator",
    "two_spin_coupling",
]
