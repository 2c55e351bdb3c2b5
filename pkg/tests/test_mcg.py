import pytest

from nstqft.cyclo import field_init
from nstqft.matrix import ExactMatrix, inverse, rank
from nstqft.mcg import (
    braid_generator,
    coend_operators,
    infinite_order_witness,
    lyu_rep,
    proportional,
    radford_copairing,
    rhoX_rep,
)
from nstqft.rep import braiding, identity, is_intertwiner, twist

F = field_init(3)


def M(rows):
    return ExactMatrix.from_dense(F, [[F.coerce(x) for x in r] for r in rows])


def test_proportional():
    A = M([[1, 2], [0, 3]])
    p = proportional(A.scale(F.zeta), A)
    assert p and p.scalar == F.zeta
    q = proportional(A, M([[1, 0], [0, 1]]))
    assert not q and q.witness is not None
    with pytest.raises(ValueError):
        proportional(A, M([[1]]))


def test_infinite_order_oracles():
    jordan = infinite_order_witness(M([[1, 1], [0, 1]]), 12)
    assert jordan.certified
    periodic = infinite_order_witness(ExactMatrix.from_dense(F, [[F.zeta, F.zero], [F.zero, F.one]]), 12)
    assert not periodic.repeated_root and periodic.proportional_powers == [12]


def test_coend_operators(H3):
    ops = coend_operators(H3)
    assert ops.L.dim == 27
    for op in (ops.S_op, ops.T_op):
        assert is_intertwiner(op)
        assert (op.matrix @ inverse(op.matrix)).is_identity()


def test_radford_full_rank(H3):
    R = radford_copairing(H3).matrix
    assert R.shape == (27 * 27, 1)
    Rm = ExactMatrix.from_entries(F, 27, 27, [(i // 27, i % 27, c) for i, _, c in R.entries])
    assert rank(Rm) == 27


def test_braid_generators(mods):
    P1 = mods["P1"]
    x = braid_generator([P1, P1], "x", 1, 2)
    assert x.matrix == braiding(P1, P1).matrix
    w = braid_generator([P1, P1], "w", 1, 2)
    assert w.matrix == (braiding(P1, P1) @ braiding(P1, P1)).matrix
    assert braid_generator([P1, P1], "v", 1).matrix == twist(P1).tensor(identity(P1)).matrix


@pytest.mark.parametrize("rep", [lyu_rep, rhoX_rep])
def test_genus_one_dimensions(H3, rep):
    r0 = rep(H3, 1, [])
    assert r0.basis.dim == 4
    assert set(r0.names) >= {"S1", "T1"}
    r1 = rep(H3, 1, ["P1"])
    assert "v1" in r1.names
