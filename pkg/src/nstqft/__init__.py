"""Exact non-semisimple TQFT invariants for the small quantum group at odd roots of unity."""
from ._kernels import BACKEND as KERNEL_BACKEND
from .cyclo import CycloNum, FieldCtx, field_init
from .hopf import HopfData, small_qsl2, stabilization_params
from .matrix import ExactMatrix

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "CycloNum",
    "FieldCtx",
    "field_init",
    "HopfData",
    "small_qsl2",
    "stabilization_params",
    "ExactMatrix",
]
