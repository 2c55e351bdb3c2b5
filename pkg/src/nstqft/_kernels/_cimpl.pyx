# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels on 64-bit integer numerators.

Same data layout and results as ``_pyimpl``.  Every multiply and add is
checked; a coefficient that leaves the int64 range raises ``OverflowError``
and the dispatcher retries in Python.
"""
from cpython.array cimport array, clone
from libc.string cimport memset

BACKEND = "cython"

cdef extern from *:
    """
    static inline int nst_mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int nst_add_ovf(long long a, long long b, long long *r) {
        return __builtin_add_overflow(a, b, r);
    }
    """
    int nst_mul_ovf(long long a, long long b, long long *r) nogil
    int nst_add_ovf(long long a, long long b, long long *r) nogil

cdef array _I64 = array("q")


cdef inline int _mac(long long *s, const long long *a, const long long *b, int d) nogil:
    """``s += a * b`` as polynomials (no reduction); 1 on overflow."""
    cdef int i, j
    cdef long long x, p
    for i in range(d):
        x = a[i]
        if x == 0:
            continue
        for j in range(d):
            if b[j] == 0:
                continue
            if nst_mul_ovf(x, b[j], &p):
                return 1
            if nst_add_ovf(s[i + j], p, &s[i + j]):
                return 1
    return 0


cdef inline int _reduce(long long *s, int d, const long long *ti, const long long *tc, int nt) nogil:
    cdef int k, m
    cdef long long top, p
    for k in range(2 * d - 2, d - 1, -1):
        top = s[k]
        if top == 0:
            continue
        for m in range(nt):
            if nst_mul_ovf(top, tc[m], &p):
                return 1
            if nst_add_ovf(s[k - d + ti[m]], p, &s[k - d + ti[m]]):
                return 1
    return 0


cdef array _pack(vals, int d):
    cdef array out = clone(_I64, d, False)
    cdef long long *o = out.data.as_longlongs
    cdef int t
    for t in range(d):
        o[t] = vals[t]
    return out


cdef tuple _terms(terms, array ti, array tc):
    cdef int m = 0
    for i, c in terms:
        ti.data.as_longlongs[m] = i
        tc.data.as_longlongs[m] = c
        m += 1
    return ()


def poly_mulmod(a, b, int d, terms):
    cdef int L = 2 * d - 1
    cdef int nt = len(terms)
    cdef array A = _pack(a, d)
    cdef array B = _pack(b, d)
    cdef array S = clone(_I64, L, True)
    cdef array ti = clone(_I64, max(nt, 1), True)
    cdef array tc = clone(_I64, max(nt, 1), True)
    _terms(terms, ti, tc)
    memset(S.data.as_longlongs, 0, L * sizeof(long long))
    if _mac(S.data.as_longlongs, A.data.as_longlongs, B.data.as_longlongs, d):
        raise OverflowError("int64 overflow in poly_mulmod")
    if _reduce(S.data.as_longlongs, d, ti.data.as_longlongs, tc.data.as_longlongs, nt):
        raise OverflowError("int64 overflow in poly_mulmod")
    return tuple(S[:d])


cdef list _apply_core(list cols, long long right, long long nin, dict Asp, long long nout, int d, terms):
    """Shared loop of ``apply_local``; ``Asp[mid] = (outs, packed entries)``."""
    cdef int L = 2 * d - 1
    cdef int nt = len(terms)
    cdef array ti = clone(_I64, max(nt, 1), True)
    cdef array tc = clone(_I64, max(nt, 1), True)
    _terms(terms, ti, tc)
    cdef long long block = nin * right
    cdef long long idx, left, rem, mid, rt, base, k
    cdef Py_ssize_t slot, n, q
    cdef array S, bv, Avals
    cdef long long *sp
    cdef list res = []
    cdef dict slots
    cdef list order, outs
    for v in cols:
        # pass 1: output slots in first-seen order
        slots = {}
        order = []
        for key in v:
            idx = key
            left = idx // block
            rem = idx - left * block
            mid = rem // right
            rt = rem - mid * right
            ent = Asp.get(mid)
            if ent is None:
                continue
            base = left * nout
            for o in ent[0]:
                k = (base + <long long>o) * right + rt
                if k not in slots:
                    slots[k] = len(order)
                    order.append(k)
        n = len(order)
        S = clone(_I64, max(n * L, 1), True)
        sp = S.data.as_longlongs
        memset(sp, 0, max(n * L, 1) * sizeof(long long))
        # pass 2: multiply-accumulate
        for key, b in v.items():
            idx = key
            left = idx // block
            rem = idx - left * block
            mid = rem // right
            rt = rem - mid * right
            ent = Asp.get(mid)
            if ent is None:
                continue
            bv = _pack(b, d)
            base = left * nout
            outs = ent[0]
            Avals = ent[1]
            for q in range(len(outs)):
                k = (base + <long long>outs[q]) * right + rt
                slot = slots[k]
                if _mac(sp + slot * L, Avals.data.as_longlongs + q * d, bv.data.as_longlongs, d):
                    raise OverflowError("int64 overflow in apply_local")
        out = {}
        for q in range(n):
            if _reduce(sp + q * L, d, ti.data.as_longlongs, tc.data.as_longlongs, nt):
                raise OverflowError("int64 overflow in apply_local")
            w = tuple(S[q * L : q * L + d])
            if any(w):
                out[order[q]] = w
        res.append(out)
    return res


cdef dict _pack_cols(dict Acols, int d):
    cdef dict Asp = {}
    cdef array vals
    for m, col in Acols.items():
        outs = []
        vals = clone(_I64, max(len(col) * d, 1), True)
        for q, (o, a) in enumerate(col):
            outs.append(o)
            for t in range(d):
                vals.data.as_longlongs[q * d + t] = a[t]
        Asp[m] = (outs, vals)
    return Asp


def _check_width(cols, right, nin, nout):
    top = 0
    for v in cols:
        for k in v:
            if k > top:
                top = k
    width = (top // (nin * right) + 1) * nout * right
    if width >= (1 << 62) or nin * right >= (1 << 62):
        raise OverflowError("state index exceeds int64")


def apply_local(cols, right, nin, Acols, nout, int d, terms):
    """See ``_pyimpl.apply_local``."""
    _check_width(cols, right, nin, nout)
    return _apply_core(list(cols), right, nin, _pack_cols(Acols, d), nout, d, terms)


def spmv_many(A, vecs, int d, terms):
    """See ``_pyimpl.spmv_many``."""
    At = {}
    for i, arow in A.items():
        for k, a in arow.items():
            At.setdefault(k, []).append((i, a))
    top = max([k for v in vecs for k in v] + list(At) + [0]) + 1
    rows = max(list(A) + [0]) + 1
    _check_width([], 1, top, rows)
    return _apply_core(list(vecs), 1, top, _pack_cols(At, d), rows, d, terms)


def spmm(A, B, int d, terms):
    """See ``_pyimpl.spmm``."""
    Bcols = {k: list(brow.items()) for k, brow in B.items()}
    keys = list(A)
    top = max([k for row in A.values() for k in row] + list(B) + [0]) + 1
    ncol = max([j for row in B.values() for j in row] + [0]) + 1
    _check_width([], 1, top, ncol)
    rows = _apply_core([A[i] for i in keys], 1, top, _pack_cols(Bcols, d), ncol, d, terms)
    return {i: r for i, r in zip(keys, rows) if r}
