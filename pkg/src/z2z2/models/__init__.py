"""Worldline models: classical invariance and the quantum operator engine."""
from .classical import (
    GeneratorAction,
    JetSpace,
    a1_action,
    a1_invariance,
    apply_generator,
    dmodule_rep,
    s7_action,
    s7_invariance,
    s7_lagrangian,
)
from .quantum import DiffOp, Poly, normal_order, quantum_s7

__all__ = [
    "GeneratorAction", "JetSpace", "a1_action", "a1_invariance", "apply_generator",
    "dmodule_rep", "s7_action", "s7_invariance", "s7_lagrangian",
    "DiffOp", "Poly", "normal_order", "quantum_s7",
]
