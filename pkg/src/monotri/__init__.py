"""Monotone triangles, the 0-Hecke action, shellings of Phi_n and the ASM -> QSym map."""
from monotri.core import (
    AsmMatrix,
    MonotoneTrapezoid,
    MonotoneTriangle,
    asm_to_mt,
    enumerate_mt,
    mt_to_asm,
    perm_to_mt,
)

__version__ = "0.1.0"

__all__ = [
    "AsmMatrix",
    "MonotoneTrapezoid",
    "MonotoneTriangle",
    "asm_to_mt",
    "enumerate_mt",
    "mt_to_asm",
    "perm_to_mt",
]
