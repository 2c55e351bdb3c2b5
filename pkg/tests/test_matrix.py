import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nstqft.cyclo import field_init
from nstqft.matrix import (
    ExactMatrix,
    LinalgError,
    inverse,
    min_poly,
    nullspace,
    poly_eval_matrix,
    rank,
    rref,
    solve,
)

F = field_init(3)


def M(rows):
    return ExactMatrix.from_dense(F, [[F.coerce(x) if not hasattr(x, "field") else x for x in r] for r in rows])


def test_basic_algebra():
    A = M([[1, 2], [3, 4]])
    I = ExactMatrix.identity(F, 2)
    assert A @ I == A and (A - A).is_zero()
    assert A.T == M([[1, 3], [2, 4]])
    assert A.trace() == F.from_int(5)
    assert (A ** 2) == A @ A
    assert A.kron(I).shape == (4, 4)
    assert A.kron(I)[2, 0] == F.from_int(3)


def test_inverse_and_solve():
    z = F.zeta
    A = M([[z, 1, 0], [0, z * z, 1], [1, 0, 2]])
    Ai = inverse(A)
    assert (A @ Ai).is_identity() and (Ai @ A).is_identity()
    b = M([[1], [z], [0]])
    assert A @ solve(A, b) == b


def test_singular_matrix():
    A = M([[1, 2], [2, 4]])
    assert rank(A) == 1
    with pytest.raises(LinalgError):
        inverse(A)
    (v,) = nullspace(A)
    assert (A @ ExactMatrix.from_columns(F, 2, [v])).is_zero()


def test_rref_pivots():
    piv, rows = rref(M([[0, 2, 4], [1, 1, 1]]))
    assert piv == [0, 1]
    assert rows[0] == {0: F.one, 2: F.from_int(-1)}
    assert rows[1] == {1: F.one, 2: F.from_int(2)}


def test_min_poly_of_jordan_block():
    J = M([[2, 1, 0], [0, 2, 0], [0, 0, 2]])
    p = min_poly(J)
    # (x - 2)^2
    assert [F.coerce(c) for c in p] == [F.from_int(4), F.from_int(-4), F.one]
    assert poly_eval_matrix(p, J).is_zero()


dense = st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=4, max_size=4)


@settings(max_examples=40, deadline=None)
@given(dense)
def test_rank_nullity(rows):
    A = M(rows)
    ns = nullspace(A)
    assert rank(A) + len(ns) == 4
    for v in ns:
        assert not A.apply(v)
