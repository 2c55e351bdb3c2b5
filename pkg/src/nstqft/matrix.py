"""Exact sparse matrices over Q(zeta_{4r}) and the linear algebra on them.

Matrices are immutable.  Storage is a dict of rows ``{i: {j: CycloNum}}``
with no stored zeros; :attr:`ExactMatrix.entries` gives the canonical
sorted entry list.  Products go through the integer kernels in
:mod:`nstqft._kernels` after clearing denominators.

Elimination uses deterministic pivoting: columns are scanned left to right
and the first remaining row with a nonzero entry becomes the pivot row, so
reduced bases are reproducible.
"""
from __future__ import annotations

import math

from . import _kernels
from .cyclo import CycloNum, FieldCtx

__all__ = [
    "ExactMatrix",
    "LinalgError",
    "rref",
    "rank",
    "nullspace",
    "inverse",
    "solve",
    "min_poly",
    "linalg",
    "poly_gcd",
    "poly_derivative",
    "poly_divmod",
    "poly_str",
    "poly_eval_matrix",
]


class LinalgError(ArithmeticError):
    """Raised for singular inverses and inconsistent systems."""

    code = "linalg"

    def __init__(self, message, rank=None):
        super().__init__(message)
        self.rank = rank


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


def _to_int_rows(rows):
    """Clear denominators: return (int rows, common denominator)."""
    den = 1
    for row in rows.values():
        for v in row.values():
            if v.den != 1:
                den = _lcm(den, v.den)
    if den == 1:
        return {i: {j: v.num for j, v in row.items()} for i, row in rows.items()}, 1
    out = {}
    for i, row in rows.items():
        r = {}
        for j, v in row.items():
            s = den // v.den
            r[j] = v.num if s == 1 else tuple(x * s for x in v.num)
        out[i] = r
    return out, den


def _from_int_rows(field, irows, den):
    make = field.make
    if den == 1:
        return {i: {j: CycloNum(field, v, 1) for j, v in row.items()} for i, row in irows.items()}
    return {i: {j: make(v, den) for j, v in row.items()} for i, row in irows.items()}


class ExactMatrix:
    """Immutable sparse matrix with :class:`CycloNum` entries."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: FieldCtx, nrows: int, ncols: int, rows=None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows if rows is not None else {}

    # -- constructors ------------------------------------------------------------
    @classmethod
    def zeros(cls, field, nrows, ncols):
        return cls(field, nrows, ncols, {})

    @classmethod
    def identity(cls, field, n):
        one = field.one
        return cls(field, n, n, {i: {i: one} for i in range(n)})

    @classmethod
    def scalar(cls, field, n, c):
        c = field.coerce(c)
        if c.is_zero():
            return cls(field, n, n, {})
        return cls(field, n, n, {i: {i: c} for i in range(n)})

    @classmethod
    def from_entries(cls, field, nrows, ncols, entries):
        """Build from ``(i, j, value)`` triples; repeated positions are summed."""
        rows: dict = {}
        for i, j, v in entries:
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise IndexError(f"entry ({i}, {j}) outside {nrows}x{ncols}")
            v = field.coerce(v)
            row = rows.setdefault(i, {})
            row[j] = row[j] + v if j in row else v
        return cls(field, nrows, ncols, _prune(rows))

    @classmethod
    def from_dense(cls, field, data):
        data = [list(r) for r in data]
        nrows = len(data)
        ncols = len(data[0]) if data else 0
        return cls.from_entries(
            field, nrows, ncols, ((i, j, v) for i, r in enumerate(data) for j, v in enumerate(r))
        )

    @classmethod
    def from_columns(cls, field, nrows, cols):
        """Build from a list of sparse column vectors ``{row: value}``."""
        rows: dict = {}
        for j, col in enumerate(cols):
            for i, v in col.items():
                if v:
                    rows.setdefault(i, {})[j] = v
        return cls(field, nrows, len(cols), rows)

    @classmethod
    def from_row_vectors(cls, field, ncols, vecs):
        rows = {}
        for i, vec in enumerate(vecs):
            r = {j: v for j, v in vec.items() if v}
            if r:
                rows[i] = r
        return cls(field, len(vecs), ncols, rows)

    # -- access ------------------------------------------------------------------
    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def entries(self):
        return [(i, j, self.rows[i][j]) for i in sorted(self.rows) for j in sorted(self.rows[i])]

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def __getitem__(self, ij):
        i, j = ij
        row = self.rows.get(i)
        if row is None:
            return self.field.zero
        return row.get(j, self.field.zero)

    def row(self, i) -> dict:
        return dict(self.rows.get(i, {}))

    def col(self, j) -> dict:
        return {i: row[j] for i, row in self.rows.items() if j in row}

    def columns(self) -> list:
        cols = [dict() for _ in range(self.ncols)]
        for i, row in self.rows.items():
            for j, v in row.items():
                cols[j][i] = v
        return cols

    def to_dense(self):
        z = self.field.zero
        out = [[z] * self.ncols for _ in range(self.nrows)]
        for i, row in self.rows.items():
            for j, v in row.items():
                out[i][j] = v
        return out

    def is_zero(self) -> bool:
        return not self.rows

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_identity(self) -> bool:
        if self.nrows != self.ncols or len(self.rows) != self.nrows:
            return False
        return all(len(row) == 1 and row.get(i) == 1 for i, row in self.rows.items())

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, tuple((i, j, v) for i, j, v in self.entries)))

    def __repr__(self):
        return f"ExactMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()}, r={self.field.r})"

    # -- arithmetic --------------------------------------------------------------
    def __add__(self, other):
        self._check_same(other)
        rows = {i: dict(r) for i, r in self.rows.items()}
        for i, orow in other.rows.items():
            row = rows.setdefault(i, {})
            for j, v in orow.items():
                row[j] = row[j] + v if j in row else v
        return ExactMatrix(self.field, self.nrows, self.ncols, _prune(rows))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return ExactMatrix(
            self.field, self.nrows, self.ncols, {i: {j: -v for j, v in r.items()} for i, r in self.rows.items()}
        )

    def scale(self, c):
        c = self.field.coerce(c)
        if c.is_zero():
            return ExactMatrix.zeros(self.field, self.nrows, self.ncols)
        if c == 1:
            return self
        return ExactMatrix(
            self.field, self.nrows, self.ncols, {i: {j: v * c for j, v in r.items()} for i, r in self.rows.items()}
        )

    def __mul__(self, c):
        if isinstance(c, ExactMatrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        f = self.field
        if not self.rows or not other.rows:
            return ExactMatrix.zeros(f, self.nrows, other.ncols)
        A, da = _to_int_rows(self.rows)
        B, db = _to_int_rows(other.rows)
        C = _kernels.spmm(A, B, f.degree, f.phi_terms)
        return ExactMatrix(f, self.nrows, other.ncols, _from_int_rows(f, C, da * db))

    def apply(self, vec: dict) -> dict:
        """Matrix times sparse column vector ``{index: CycloNum}``."""
        return self.apply_many([vec])[0]

    def apply_many(self, vecs):
        f = self.field
        A, da = _to_int_rows(self.rows)
        ivecs = []
        dens = []
        for v in vecs:
            iv, dv = _to_int_rows({0: v})
            ivecs.append(iv.get(0, {}))
            dens.append(dv)
        outs = _kernels.spmv_many(A, ivecs, f.degree, f.phi_terms)
        return [_from_int_rows(f, {0: o}, da * dv).get(0, {}) for o, dv in zip(outs, dens)]

    def __pow__(self, k: int):
        if not self.is_square():
            raise ValueError("power of a non-square matrix")
        if k < 0:
            return inverse(self) ** (-k)
        out = ExactMatrix.identity(self.field, self.nrows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            k >>= 1
            if k:
                base = base @ base
        return out

    @property
    def T(self):
        rows: dict = {}
        for i, row in self.rows.items():
            for j, v in row.items():
                rows.setdefault(j, {})[i] = v
        return ExactMatrix(self.field, self.ncols, self.nrows, rows)

    def kron(self, other):
        """Kronecker product, left factor major."""
        rows = {}
        m, n = other.nrows, other.ncols
        for i1, r1 in self.rows.items():
            for i2, r2 in other.rows.items():
                row = {}
                for j1, a in r1.items():
                    for j2, b in r2.items():
                        row[j1 * n + j2] = a * b
                rows[i1 * m + i2] = row
        return ExactMatrix(self.field, self.nrows * m, self.ncols * n, rows)

    def trace(self):
        t = self.field.zero
        for i, row in self.rows.items():
            if i in row:
                t = t + row[i]
        return t

    def select(self, row_idx=None, col_idx=None):
        """Submatrix on the given row and column index lists (in that order)."""
        row_idx = list(range(self.nrows)) if row_idx is None else list(row_idx)
        col_idx = list(range(self.ncols)) if col_idx is None else list(col_idx)
        cpos = {c: k for k, c in enumerate(col_idx)}
        rows = {}
        for k, i in enumerate(row_idx):
            src = self.rows.get(i)
            if src:
                r = {cpos[j]: v for j, v in src.items() if j in cpos}
                if r:
                    rows[k] = r
        return ExactMatrix(self.field, len(row_idx), len(col_idx), rows)

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise ValueError("hstack row mismatch")
        rows = {i: dict(r) for i, r in self.rows.items()}
        for i, r in other.rows.items():
            row = rows.setdefault(i, {})
            for j, v in r.items():
                row[self.ncols + j] = v
        return ExactMatrix(self.field, self.nrows, self.ncols + other.ncols, rows)

    def vstack(self, other):
        if self.ncols != other.ncols:
            raise ValueError("vstack column mismatch")
        rows = {i: dict(r) for i, r in self.rows.items()}
        for i, r in other.rows.items():
            rows[self.nrows + i] = dict(r)
        return ExactMatrix(self.field, self.nrows + other.nrows, self.ncols, rows)

    def _check_same(self, other):
        if not isinstance(other, ExactMatrix) or self.shape != other.shape:
            raise ValueError("shape mismatch")
        if other.field is not self.field:
            raise ValueError("matrices over different fields")

    # -- text --------------------------------------------------------------------
    def to_text(self, name="M") -> str:
        lines = [f"matrix {name} {self.nrows} {self.ncols}"]
        for i, j, v in self.entries:
            lines.append(f"{i} {j} {v}")
        lines.append("end")
        return "\n".join(lines)


def _prune(rows):
    out = {}
    for i, row in rows.items():
        r = {j: v for j, v in row.items() if not v.is_zero()}
        if r:
            out[i] = r
    return out


# -- modular fast path ---------------------------------------------------------

def _modular_context(field):
    """A prime p = 1 mod n and an element w of exact order n modulo p."""
    ctx = getattr(field, "_modctx", None)
    if ctx is not None:
        return ctx
    n = field.n
    p = (1 << 61) // n * n + 1
    while True:
        if _is_prime(p):
            break
        p -= n
    for b in range(2, 1000):
        w = pow(b, (p - 1) // n, p)
        if all(pow(w, n // ell, p) != 1 for ell in _prime_factors(n)):
            break
    ctx = (p, w, [pow(w, k, p) for k in range(field.degree)])
    field._modctx = ctx
    return ctx


def _is_prime(n):
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for sp in small:
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n):
    out, k = [], 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def _rank_mod_p(m: ExactMatrix):
    """Rank of the image of ``m`` under a ring map into F_p, or None."""
    p, _, wp = _modular_context(m.field)
    rows = []
    for row in m.rows.values():
        r = {}
        for j, v in row.items():
            if v.den % p == 0:
                return None
            x = sum(c * w for c, w in zip(v.num, wp)) * pow(v.den, -1, p) % p
            if x:
                r[j] = x
        if r:
            rows.append(r)
    rank = 0
    for col in range(m.ncols):
        piv = None
        for k in range(rank, len(rows)):
            if col in rows[k]:
                piv = k
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        inv = pow(prow[col], -1, p)
        for k in range(rank + 1, len(rows)):
            c = rows[k].get(col)
            if c:
                f = c * inv % p
                rk = rows[k]
                for j, v in prow.items():
                    x = (rk.get(j, 0) - f * v) % p
                    if x:
                        rk[j] = x
                    else:
                        rk.pop(j, None)
        rank += 1
    return rank


# -- elimination ---------------------------------------------------------------

def rref(m: ExactMatrix):
    """Reduced row echelon form.

    Returns ``(pivots, rows)`` where ``rows`` is the list of nonzero reduced
    rows (sparse dicts, pivot entry 1) and ``pivots`` their pivot columns.
    """
    rows = [dict(m.rows[i]) for i in sorted(m.rows)]
    pivots = []
    rank = 0
    for col in range(m.ncols):
        piv = None
        for k in range(rank, len(rows)):
            if col in rows[k]:
                piv = k
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        inv = prow[col].inv()
        if inv != 1:
            prow = {j: v * inv for j, v in prow.items()}
            rows[rank] = prow
        for k in range(len(rows)):
            if k == rank:
                continue
            c = rows[k].get(col)
            if c is not None:
                rk = rows[k]
                for j, v in prow.items():
                    x = rk[j] - c * v if j in rk else -(c * v)
                    if x.is_zero():
                        rk.pop(j, None)
                    else:
                        rk[j] = x
        pivots.append(col)
        rank += 1
    return pivots, rows[:rank]


def rank(m: ExactMatrix) -> int:
    full = min(m.nrows, m.ncols)
    rp = _rank_mod_p(m)
    if rp == full:
        return full
    return len(rref(m)[0])


def nullspace(m: ExactMatrix) -> list:
    """Deterministic basis of ``{x : m x = 0}`` as sparse dict vectors.

    One vector per free column f, with coordinate 1 at f and zero at the
    other free columns.
    """
    pivots, rows = rref(m)
    pset = set(pivots)
    basis = []
    for f in range(m.ncols):
        if f in pset:
            continue
        vec = {f: m.field.one}
        for pc, row in zip(pivots, rows):
            c = row.get(f)
            if c is not None:
                vec[pc] = -c
        basis.append(vec)
    return basis


def inverse(m: ExactMatrix) -> ExactMatrix:
    if not m.is_square():
        raise LinalgError("inverse of a non-square matrix")
    n = m.nrows
    aug = m.hstack(ExactMatrix.identity(m.field, n))
    pivots, rows = rref(aug)
    k = sum(1 for p in pivots if p < n)
    if k < n:
        raise LinalgError(f"matrix is singular (rank {k} < {n})", rank=k)
    out = {}
    for i, row in enumerate(rows):
        r = {j - n: v for j, v in row.items() if j >= n}
        if r:
            out[i] = r
    return ExactMatrix(m.field, n, n, out)


def solve(m: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """One solution X of ``m X = b`` (free variables set to zero)."""
    if b.nrows != m.nrows:
        raise ValueError("solve: row mismatch")
    aug = m.hstack(b)
    pivots, rows = rref(aug)
    if pivots and pivots[-1] >= m.ncols:
        raise LinalgError("inconsistent linear system", rank=sum(1 for p in pivots if p < m.ncols))
    out = {}
    for pc, row in zip(pivots, rows):
        r = {j - m.ncols: v for j, v in row.items() if j >= m.ncols}
        if r:
            out[pc] = r
    return ExactMatrix(m.field, m.ncols, b.ncols, out)


# -- polynomials over the field (coefficient lists, low degree first) ----------

def _ptrim(p):
    p = list(p)
    while p and p[-1].is_zero():
        p.pop()
    return p


def poly_divmod(a, b):
    a = _ptrim(a)
    b = _ptrim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    field = b[-1].field
    inv_lead = b[-1].inv()
    quo = [field.zero] * max(1, len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        c = a[-1] * inv_lead
        shift = len(a) - len(b)
        quo[shift] = c
        for j, y in enumerate(b):
            a[shift + j] = a[shift + j] - c * y
        a = _ptrim(a[:-1])
    return _ptrim(quo), a


def poly_gcd(a, b):
    """Monic gcd of two polynomials over the field."""
    a, b = _ptrim(a), _ptrim(b)
    while b:
        _, rem = poly_divmod(a, b)
        a, b = b, rem
    if not a:
        return []
    inv = a[-1].inv()
    return [c * inv for c in a]


def poly_derivative(a):
    return _ptrim([c * k for k, c in enumerate(a)][1:])


def poly_str(coeffs, var="x") -> str:
    """Readable form, highest degree first, coefficients in brackets."""
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c.is_zero():
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if c == 1 and mono:
            parts.append(mono)
        else:
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
    return " + ".join(parts) if parts else "0"


def poly_eval_matrix(coeffs, m: ExactMatrix) -> ExactMatrix:
    """Evaluate a polynomial at a square matrix by Horner's rule."""
    n = m.nrows
    out = ExactMatrix.zeros(m.field, n, n)
    for c in reversed(coeffs):
        out = out @ m + ExactMatrix.scalar(m.field, n, c)
    return out


def min_poly(m: ExactMatrix) -> list:
    """Monic minimal polynomial (coefficients low degree first).

    Incremental elimination on the flattened powers ``I, m, m^2, ...``; the
    first power lying in the span of the previous ones gives the relation.
    Minimality is by construction: the lower powers are linearly independent.
    """
    if not m.is_square():
        raise ValueError("min_poly of a non-square matrix")
    field = m.field
    n = m.nrows
    # basis: list of (pivot, vector, combo) with vector[pivot] == 1 and
    # vector == sum combo[k] * flat(m^k)
    basis = []
    power = ExactMatrix.identity(field, n)
    for k in range(n + 1):
        vec = {i * n + j: v for i, row in power.rows.items() for j, v in row.items()}
        combo = {k: field.one}
        for piv, bvec, bcombo in basis:
            c = vec.get(piv)
            if c is None:
                continue
            for idx, v in bvec.items():
                x = vec[idx] - c * v if idx in vec else -(c * v)
                if x.is_zero():
                    vec.pop(idx, None)
                else:
                    vec[idx] = x
            for idx, v in bcombo.items():
                x = combo[idx] - c * v if idx in combo else -(c * v)
                if x.is_zero():
                    combo.pop(idx, None)
                else:
                    combo[idx] = x
        if not vec:
            return [combo.get(i, field.zero) for i in range(k + 1)]
        piv = min(vec)
        inv = vec[piv].inv()
        vec = {idx: v * inv for idx, v in vec.items()}
        combo = {idx: v * inv for idx, v in combo.items()}
        basis.append((piv, vec, combo))
        power = power @ m
    raise ArithmeticError("minimal polynomial search exceeded matrix size")


def linalg(kind: str, m: ExactMatrix, *args):
    """Dispatcher over ``rank``, ``nullspace``, ``inverse``, ``solve``, ``min_poly``."""
    table = {
        "rank": rank,
        "nullspace": nullspace,
        "inverse": inverse,
        "solve": solve,
        "min_poly": min_poly,
    }
    try:
        fn = table[kind]
    except KeyError:
        raise ValueError(f"unknown linalg kind {kind!r}") from None
    return fn(m, *args)

