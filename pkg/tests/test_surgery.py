from pathlib import Path

import pytest

from nstqft.checks import UNKNOT_H, stabilized
from nstqft.rep import h_endomorphism, modified_trace, twist_inv
from nstqft.tangle import SizeCapError, SurgeryError, TangleSyntaxError, linking_signature, parse_surgery, surgery_invariant
from nstqft.tangle.surgery import diagram_linking

EXAMPLES = Path(__file__).resolve().parent.parent / "examples"


def L(text, reg, params, **kw):
    return surgery_invariant(parse_surgery(text, reg), params, reg, **kw)


@pytest.mark.parametrize(
    "m, sig",
    [([[1]], 1), ([[-2]], -1), ([[0]], 0), ([[0, 1], [1, 0]], 0), ([[2, 1], [1, 2]], 2), ([[0, 1, 0], [1, 0, 0], [0, 0, -1]], -1), ([], 0)],
)
def test_signature(m, sig):
    assert linking_signature(m) == sig


def test_signature_rejects_asymmetric():
    with pytest.raises(ValueError):
        linking_signature([[0, 1], [2, 0]])


def test_bare_unknot(reg, params, mods):
    th = modified_trace(h_endomorphism(mods["P1"]))
    assert L(UNKNOT_H, reg, params) == params.script_d.inv() * th


@pytest.mark.parametrize("sign", [1, -1])
def test_stabilization(reg, params, sign):
    assert L(stabilized(UNKNOT_H, sign), reg, params) == L(UNKNOT_H, reg, params)


def test_hopf_link_surgery_is_s3(reg, params):
    text = (EXAMPLES / "surgery" / "hopf_link_0_0.surgery").read_text()
    p = parse_surgery(text, reg)
    assert p.components == 2 and p.linking_matrix == [[0, -1], [-1, 0]]
    assert surgery_invariant(p, params, reg) == L(UNKNOT_H, reg, params)


def test_width_cap_depends_on_layout(reg, params):
    # the P1 loop opened beside four red legs: same graph, wider states
    text = """bottom red:Hv red:H^ red:Hv red:H^
slice id, x+, id, coev(P1)
slice id, x+, id, coupon(h), id
slice ev, ev, ev'
framing 1 0
framing 2 0
"""
    with pytest.raises(SizeCapError):
        L(text, reg, params)
    assert L(text, reg, params, cap=27**6) == L(UNKNOT_H, reg, params)


def test_blow_down_changes_framing(reg, params, mods):
    # +1 surgery on an unknot met once by the P1 strand is S^3 with the strand framed -1
    text = (EXAMPLES / "surgery" / "p1_through_red_unknot.surgery").read_text()
    want = params.script_d.inv() * modified_trace(twist_inv(mods["P1"]))
    assert L(text, reg, params) == want


def test_diagram_linking(reg):
    p = parse_surgery(stabilized(UNKNOT_H, -1), reg)
    assert diagram_linking(p.ast) == [[-1]]


@pytest.mark.parametrize(
    "text, exc, msg",
    [
        (stabilized(UNKNOT_H, 1).replace("framing 1 1", "framing 1 0"), SurgeryError, "declared framing"),
        (stabilized(UNKNOT_H, 1).replace("framing 1 1\n", ""), SurgeryError, "one framing line"),
        (stabilized(UNKNOT_H, 1) + "linking\n1 0\n0 1\n", SurgeryError, "must be 1x1"),
        (stabilized(UNKNOT_H, 1).replace("framing 1 1", "framing 1 x"), TangleSyntaxError, "expected integers"),
        ("bottom P1^\nslice id\n", SurgeryError, "no blue bottom"),
        ("bottom\nslice coev(ad)\nslice ev'\n", SurgeryError, "inadmissible"),
    ],
)
def test_bad_presentations(reg, text, exc, msg):
    with pytest.raises(exc, match=msg):
        parse_surgery(text, reg)


def test_explicit_cut(reg, params):
    text = UNKNOT_H + "cut 1 0\n"
    assert L(text, reg, params) == L(UNKNOT_H, reg, params)
