"""Reversible multiplication circuits with exact Toffoli accounting.

Builds schoolbook, mod-2^n and windowed Montgomery mod-p multipliers from
ripple-carry adder blocks, simulates them exactly on basis states, verifies
them against big-integer oracles, and reconciles measured Toffoli counts
with the published closed-form cost formulas.
"""
from .ir import (
    Circuit,
    CircuitBuilder,
    CircuitError,
    Gate,
    GateKind,
    Register,
    ResourceReport,
    count_resources,
    invert,
)
from .multipliers import ModPParams, MultiplierKind

__version__ = "0.1.0"

__all__ = [
    "Circuit",
    "CircuitBuilder",
    "CircuitError",
    "Gate",
    "GateKind",
    "ModPParams",
    "MultiplierKind",
    "Register",
    "ResourceReport",
    "count_resources",
    "invert",
    "__version__",
]
