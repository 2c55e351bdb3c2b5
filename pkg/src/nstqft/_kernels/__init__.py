"""Kernel dispatch.

The compiled extension ``_cimpl`` is used when it imports; otherwise the
pure-Python ``_pyimpl`` is used.  Set ``NSTQFT_KERNELS=python`` to force the
fallback.  The compiled kernels work in 64-bit integers and raise
``OverflowError`` when a coefficient does not fit, in which case the call is
retried with the arbitrary-precision Python kernels.
"""
import os

from . import _pyimpl

_impl = _pyimpl
if os.environ.get("NSTQFT_KERNELS", "").lower() != "python":
    try:
        from . import _cimpl as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pyimpl

BACKEND = _impl.BACKEND


def _guarded(name):
    fast = getattr(_impl, name)
    slow = getattr(_pyimpl, name)
    if fast is slow:
        return slow

    def call(*args):
        try:
            return fast(*args)
        except OverflowError:
            return slow(*args)

    call.__name__ = name
    call.__doc__ = slow.__doc__
    return call


spmm = _guarded("spmm")
spmv_many = _guarded("spmv_many")
poly_mulmod = _guarded("poly_mulmod")
apply_local = _guarded("apply_local")
reduce_poly = _pyimpl.reduce_poly

__all__ = ["BACKEND", "spmm", "spmv_many", "poly_mulmod", "apply_local", "reduce_poly"]
