"""Pure-Python reference kernels.

Integer-level routines on cyclotomic numerators.  A "sparse integer matrix"
is a dict ``row -> {col: tuple_of_ints}`` whose tuples have length ``d``
(power-basis coordinates); all entries share one implicit denominator that
the caller tracks.  ``terms`` lists the nonzero ``(i, c)`` with
``x^d = sum c * x^i`` modulo the cyclotomic polynomial.
"""

BACKEND = "python"


def reduce_poly(c, d, terms):
    """Reduce the coefficient list ``c`` (len >= d) in place; return a tuple."""
    for k in range(len(c) - 1, d - 1, -1):
        top = c[k]
        if top:
            base = k - d
            for i, p in terms:
                c[base + i] += top * p
    return tuple(c[:d])


def poly_mulmod(a, b, d, terms):
    prod = [0] * (2 * d - 1)
    bnz = [(j, y) for j, y in enumerate(b) if y]
    for i, x in enumerate(a):
        if x:
            for j, y in bnz:
                prod[i + j] += x * y
    return reduce_poly(prod, d, terms)


def spmm(A, B, d, terms):
    """Product of two sparse integer matrices (see module docstring)."""
    L = 2 * d - 1
    Bnz = {}
    for k, brow in B.items():
        Bnz[k] = [(j, [(t, y) for t, y in enumerate(b) if y]) for j, b in brow.items()]
    out = {}
    for i, arow in A.items():
        acc = {}
        for k, a in arow.items():
            brow = Bnz.get(k)
            if not brow:
                continue
            anz = [(t, x) for t, x in enumerate(a) if x]
            for j, bnz in brow:
                s = acc.get(j)
                if s is None:
                    s = acc[j] = [0] * L
                for ta, x in anz:
                    for tb, y in bnz:
                        s[ta + tb] += x * y
        row = {}
        for j, s in acc.items():
            v = reduce_poly(s, d, terms)
            if any(v):
                row[j] = v
        if row:
            out[i] = row
    return out


def spmv_many(A, vecs, d, terms):
    """Apply ``A`` (row-major sparse) to a list of sparse vectors ``{col: tuple}``.

    Returns one sparse vector per input; equivalent to ``A @ v`` for each.
    """
    # transpose A once: col -> [(row, entry)]
    At = {}
    for i, arow in A.items():
        for k, a in arow.items():
            At.setdefault(k, []).append((i, [(t, x) for t, x in enumerate(a) if x]))
    L = 2 * d - 1
    res = []
    for v in vecs:
        acc = {}
        for k, b in v.items():
            col = At.get(k)
            if not col:
                continue
            bnz = [(t, y) for t, y in enumerate(b) if y]
            for i, anz in col:
                s = acc.get(i)
                if s is None:
                    s = acc[i] = [0] * L
                for ta, x in anz:
                    for tb, y in bnz:
                        s[ta + tb] += x * y
        out = {}
        for i, s in acc.items():
            w = reduce_poly(s, d, terms)
            if any(w):
                out[i] = w
        res.append(out)
    return res


def apply_local(cols, right, nin, Acols, nout, d, terms):
    """Apply a local operator to a batch of sparse states.

    A state index is ``(left * nin + mid) * right + rt``; the operator acts on
    ``mid`` and is given column-wise as ``Acols[mid] = [(out, entry), ...]``.
    The result uses ``(left * nout + out) * right + rt``.
    """
    L = 2 * d - 1
    block = nin * right
    Asp = {}
    for m, col in Acols.items():
        Asp[m] = [(o, [(t, x) for t, x in enumerate(a) if x]) for o, a in col]
    res = []
    for v in cols:
        acc = {}
        for idx, b in v.items():
            left, rem = divmod(idx, block)
            mid, rt = divmod(rem, right)
            col = Asp.get(mid)
            if not col:
                continue
            bnz = [(t, y) for t, y in enumerate(b) if y]
            base = left * nout
            for o, anz in col:
                k = (base + o) * right + rt
                s = acc.get(k)
                if s is None:
                    s = acc[k] = [0] * L
                for ta, x in anz:
                    for tb, y in bnz:
                        s[ta + tb] += x * y
        out = {}
        for k, s in acc.items():
            w = reduce_poly(s, d, terms)
            if any(w):
                out[k] = w
        res.append(out)
    return res
