import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nstqft._kernels import _pyimpl
from nstqft.cyclo import field_init

_cimpl = pytest.importorskip("nstqft._kernels._cimpl")

F = field_init(3)
D, TERMS = F.degree, F.phi_terms

coef = st.integers(-(10**6), 10**6)
poly = st.lists(coef, min_size=D, max_size=D).map(tuple).filter(any)
sparse_vec = st.dictionaries(st.integers(0, 26), poly, max_size=8)
sparse_mat = st.dictionaries(st.integers(0, 26), sparse_vec, max_size=8)


@settings(max_examples=80, deadline=None)
@given(poly, poly)
def test_poly_mulmod(a, b):
    assert _cimpl.poly_mulmod(a, b, D, TERMS) == _pyimpl.poly_mulmod(a, b, D, TERMS)


@settings(max_examples=60, deadline=None)
@given(sparse_mat, sparse_mat)
def test_spmm(A, B):
    assert _cimpl.spmm(A, B, D, TERMS) == _pyimpl.spmm(A, B, D, TERMS)


@settings(max_examples=60, deadline=None)
@given(sparse_mat, st.lists(sparse_vec, max_size=5))
def test_spmv_many(A, vecs):
    assert _cimpl.spmv_many(A, vecs, D, TERMS) == _pyimpl.spmv_many(A, vecs, D, TERMS)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.dictionaries(st.integers(0, 3 * 3 * 2 - 1), poly, max_size=6), max_size=4),
    st.dictionaries(st.integers(0, 2), st.lists(st.tuples(st.integers(0, 3), poly), max_size=3), max_size=3),
)
def test_apply_local(cols, Acols):
    # left 3, middle 3 -> 4, right 2
    args = (cols, 2, 3, Acols, 4, D, TERMS)
    assert _cimpl.apply_local(*args) == _pyimpl.apply_local(*args)


def test_overflow_is_reported():
    big = (2**62,) + (0,) * (D - 1)
    with pytest.raises(OverflowError):
        _cimpl.poly_mulmod(big, big, D, TERMS)


def test_dispatch_falls_back_on_overflow():
    from nstqft import _kernels

    big = (2**62,) + (0,) * (D - 1)
    assert _kernels.poly_mulmod(big, big, D, TERMS) == _pyimpl.poly_mulmod(big, big, D, TERMS)
