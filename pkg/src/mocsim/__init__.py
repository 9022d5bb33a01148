"""Stabilizer simulator for 1D long-range measurement-only circuits."""

__version__ = "0.1.0"

from .circuit import CircuitParams, PairSampler, run_purification, run_steady_state
from .pauli import PauliString
from .stabilizer import StabilizerState

__all__ = [
    "CircuitParams",
    "PairSampler",
    "PauliString",
    "StabilizerState",
    "run_purification",
    "run_steady_state",
    "__version__",
]
