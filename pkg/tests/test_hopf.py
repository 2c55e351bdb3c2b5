import pytest

from nstqft.checks import corrupted_copy
from nstqft.hopf import (
    delta_closed_forms,
    drinfeld_map,
    drinfeld_map_inv,
    drinfeld_map_inv_closed_form,
    dump_structure,
    integral_checks,
    load_structure,
    m_matrix,
    m_matrix_closed_form,
    pivotal_consistency,
    small_qsl2,
    stabilization_params,
    verify_hopf_axioms,
)
from nstqft.matrix import rank


def test_dimension(H3):
    assert H3.dim == 27


def test_axioms_r3(H3):
    rep = verify_hopf_axioms(H3)
    assert rep and all(rep.values()), sorted(k for k, v in rep.items() if not v)


def test_negative_control(H3):
    rep = verify_hopf_axioms(corrupted_copy(H3))
    assert not all(rep.values())


def test_integrals(H3):
    rep = integral_checks(H3)
    assert all(rep.values()), rep


def test_pivotal(H3):
    assert pivotal_consistency(H3)


def test_dump_load_round_trip(H3):
    text = dump_structure(H3)
    H = load_structure(text)
    assert dump_structure(H) == text


def test_monodromy_closed_form(H3):
    assert m_matrix(H3) == m_matrix_closed_form(H3)


def test_drinfeld_map_factorizable(H3):
    D = drinfeld_map(H3)
    assert rank(D) == 27
    Di = drinfeld_map_inv(H3)
    assert (D @ Di).is_identity()
    assert drinfeld_map_inv_closed_form(H3) == Di


@pytest.mark.parametrize("r", [3, 5, 7])
def test_stabilization_closed_forms(r):
    H = small_qsl2(r)
    p = stabilization_params(H)
    dm, dp, delta = delta_closed_forms(H.field)
    assert p.delta_minus == dm and p.delta_plus == dp and p.small_delta == delta
    assert p.zeta == H.field.from_int(r**3)
    assert p.delta_plus * p.delta_minus == p.zeta
    assert p.script_d * p.script_d == p.zeta
    assert p.small_delta == p.delta_plus / p.script_d


def test_r3_values(H3, params):
    F = H3.field
    assert params.delta_plus == F.parse("-6*z^2 + 3")
    assert params.script_d.inv() == F.parse("-1/9*z^3 + 2/9*z")
