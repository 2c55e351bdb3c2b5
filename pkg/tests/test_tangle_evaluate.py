import pytest

from nstqft.checks import HOPF_LINK_P1, UNKNOT_H, all_cuts
from nstqft.hopf import m_matrix
from nstqft.matrix import ExactMatrix
from nstqft.rep import Morphism, braiding, h_endomorphism, twist
from nstqft.tangle import (
    EvaluationError,
    SizeCapError,
    evaluate_bichrome,
    evaluate_rt,
    parse_tangle,
    renorm_eval,
)

from .test_rep import _act_tensor


def M(text, reg):
    return evaluate_rt(text, reg).matrix


@pytest.mark.parametrize(
    "text",
    [
        "bottom P1^\nslice coev, id\nslice id, ev\n".replace("coev", "coev(P1)"),
        "bottom P1^\nslice id, coev'(P1)\nslice ev', id\n",
        "bottom P1v\nslice coev'(P1), id\nslice id, ev'\n",
        "bottom P1v\nslice id, coev(P1)\nslice ev, id\n",
    ],
)
def test_snakes_are_identities(text, reg):
    assert M(text, reg).is_identity()


def test_id_slices_do_not_change_the_value(reg):
    base = "bottom P1^ P1^\nslice x+\nslice coupon(h), id\nslice x-\n"
    padded = "bottom P1^ P1^\nslice id, id\nslice x+\nslice id, id\nslice coupon(h), id\nslice x-\nslice id, id\n"
    assert M(base, reg) == M(padded, reg)


def test_crossings(reg, mods):
    P1 = mods["P1"]
    assert M("bottom P1^ P1^\nslice x+\n", reg) == braiding(P1, P1).matrix
    assert M("bottom P1^ P1^\nslice x+\nslice x-\n", reg).is_identity()
    assert M("bottom P1^ P1^\nslice x-\nslice x+\n", reg).is_identity()


def test_double_crossing_is_monodromy(H3, reg, mods):
    m = M("bottom P1^ ad^\nslice x+\nslice x+\n", reg)
    assert m == _act_tensor(mods["P1"], mods["adjoint"], m_matrix(H3))


def test_reidemeister_three(reg):
    a = M("bottom P1^ P1^ P1^\nslice x+, id\nslice id, x+\nslice x+, id\n", reg)
    b = M("bottom P1^ P1^ P1^\nslice id, x+\nslice x+, id\nslice id, x+\n", reg)
    assert a == b


def test_kinks_are_twists(reg, mods):
    P1 = mods["P1"]
    assert M("bottom P1^\nslice id, coev(P1)\nslice x+, id\nslice id, ev'\n", reg) == twist(P1).matrix
    assert M("bottom P1^\nslice tw+\nslice tw-\n", reg).is_identity()


def test_coupons(reg, mods):
    P1 = mods["P1"]
    assert M("bottom P1^\nslice coupon(h)\n", reg) == h_endomorphism(P1).matrix
    reg2 = type(reg)(reg.H)
    reg2.register("th", twist(P1), ["P1^"], ["P1^"])
    assert M("bottom P1^\nslice coupon(th)\n", reg2) == twist(P1).matrix
    with pytest.raises(EvaluationError, match="H-linear"):
        f = reg.H.field
        bad = ExactMatrix(f, P1.dim, P1.dim, {0: {1: f.one}})
        reg2.register("bad", Morphism(P1, P1, bad), ["P1^"], ["P1^"])


def test_closed_values(reg, params, H3):
    for tw, want in (("tw+", params.delta_plus), ("tw-", params.delta_minus)):
        m = evaluate_bichrome(f"bottom red:Hv red:H^\nslice id, {tw}\nslice ev\n", reg).matrix
        assert m[0, 0] == want
    assert evaluate_bichrome("bottom red:Hv red:H^\nslice ev\n", reg).matrix[0, 0].is_zero()
    assert M("bottom\nslice coev(P1)\nslice ev'\n", reg)[0, 0].is_zero()


def test_renormalized_unknot(reg, H3):
    ast = parse_tangle(UNKNOT_H, reg.types)
    vals = {renorm_eval(ast, cut, reg) for cut in all_cuts(ast)}
    assert vals == {H3.field.one}


def test_renormalized_hopf_link(reg, H3):
    ast = parse_tangle(HOPF_LINK_P1, reg.types)
    cuts = all_cuts(ast)
    assert len(cuts) == 8
    assert {renorm_eval(ast, c, reg) for c in cuts} == {H3.field.from_int(-6)}


@pytest.mark.parametrize(
    "text, cut, msg",
    [
        (UNKNOT_H, (0, 0), "outside"),
        (UNKNOT_H, (1, 1), "upward"),
        ("bottom\nslice coev(ad)\nslice ev'\n", None, "no blue strand"),
        ("bottom P1^\nslice id\n", None, "closed"),
    ],
)
def test_cut_errors(reg, text, cut, msg):
    with pytest.raises(EvaluationError, match=msg):
        renorm_eval(parse_tangle(text, reg.types), cut, reg)


def test_red_strand_must_be_cut_to_the_bottom(reg):
    with pytest.raises(EvaluationError, match="not cut to the bottom"):
        evaluate_bichrome("bottom\nslice coev(red:H)\nslice ev'\n", reg)


def test_width_cap(reg):
    with pytest.raises(SizeCapError):
        evaluate_rt("bottom P1^ P1^\nslice x+\n", reg, cap=4)
