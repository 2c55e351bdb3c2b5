"""Sparse state propagation for slice programs.

A :class:`StateBatch` holds a list of sparse vectors in a tensor product of
strand spaces (left-major flattening) as integer numerators over one shared
denominator.  Local operators act on consecutive strands without ever forming
Kronecker products with identities.
"""
from __future__ import annotations

import math
from functools import reduce

from .. import _kernels
from ..cyclo import FieldCtx
from ..matrix import ExactMatrix, _from_int_rows, _to_int_rows

__all__ = ["SizeCapError", "StateBatch", "run_program", "DEFAULT_CAP"]

DEFAULT_CAP = 27**4 * 4


class SizeCapError(ValueError):
    def __init__(self, width: int, cap: int, where: str = ""):
        msg = f"state width {width} exceeds cap {cap}"
        if where:
            msg += f" at {where}"
        super().__init__(msg)
        self.width = width
        self.cap = cap


def _prod(xs) -> int:
    return reduce(lambda a, b: a * b, xs, 1)


class StateBatch:
    """Sparse vectors in ``V_1 (x) ... (x) V_k`` with strand dimensions ``dims``."""

    __slots__ = ("field", "dims", "cols", "den")

    def __init__(self, field: FieldCtx, dims, cols, den: int = 1):
        self.field = field
        self.dims = list(dims)
        self.cols = cols
        self.den = den

    @classmethod
    def from_vectors(cls, field: FieldCtx, dims, vecs) -> "StateBatch":
        irows, den = _to_int_rows({k: v for k, v in enumerate(vecs)})
        cols = [dict(irows.get(k, {})) for k in range(len(vecs))]
        return cls(field, dims, cols, den)

    @classmethod
    def from_matrix(cls, m: ExactMatrix, dims=None) -> "StateBatch":
        dims = [m.nrows] if dims is None else dims
        if _prod(dims) != m.nrows:
            raise ValueError("dims do not match the matrix height")
        return cls.from_vectors(m.field, dims, m.columns())

    @property
    def width(self) -> int:
        return _prod(self.dims)

    def apply(self, pos: int, k: int, A: ExactMatrix, out_dims, cap: int | None = None, where: str = ""):
        """Apply ``A`` to strands ``pos .. pos+k-1``; they become ``out_dims``."""
        dims = self.dims
        if pos < 0 or pos + k > len(dims):
            raise ValueError("operator outside the strand range")
        nin = _prod(dims[pos : pos + k])
        nout = _prod(out_dims)
        if A.shape != (nout, nin):
            raise ValueError(f"operator shape {A.shape} does not match {nout}x{nin}")
        new_dims = dims[:pos] + list(out_dims) + dims[pos + k :]
        if cap is not None:
            w = _prod(new_dims)
            if w > cap:
                raise SizeCapError(w, cap, where)
        right = _prod(dims[pos + k :])
        At, da = _to_int_rows(A.T.rows)
        Acols = {m: sorted(row.items()) for m, row in At.items()}
        f = self.field
        cols = _kernels.apply_local(self.cols, right, nin, Acols, nout, f.degree, f.phi_terms)
        out = StateBatch(f, new_dims, cols, self.den * da)
        out._normalize()
        return out

    def scale(self, c) -> "StateBatch":
        """Multiply every vector by the scalar ``c``."""
        c = self.field.coerce(c)
        f = self.field
        cols = [{k: _kernels.poly_mulmod(v, c.num, f.degree, f.phi_terms) for k, v in col.items()} for col in self.cols]
        cols = [{k: v for k, v in col.items() if any(v)} for col in cols]
        out = StateBatch(f, self.dims, cols, self.den * c.den)
        out._normalize()
        return out

    def _normalize(self):
        g = self.den
        for col in self.cols:
            for v in col.values():
                for x in v:
                    if x:
                        g = math.gcd(g, x)
                        if g == 1:
                            return
        if g > 1:
            self.den //= g
            self.cols = [{k: tuple(x // g for x in v) for k, v in col.items()} for col in self.cols]

    def vectors(self) -> list:
        rows = _from_int_rows(self.field, {k: c for k, c in enumerate(self.cols)}, self.den)
        return [rows.get(k, {}) for k in range(len(self.cols))]

    def to_matrix(self) -> ExactMatrix:
        return ExactMatrix.from_columns(self.field, self.width, self.vectors())

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)


def run_program(batch: StateBatch, program, cap: int | None = None) -> StateBatch:
    """Apply ``(pos, k, matrix, out_dims)`` steps in order."""
    for step, (pos, k, A, out_dims) in enumerate(program):
        batch = batch.apply(pos, k, A, out_dims, cap=cap, where=f"step {step}")
    return batch
