import pytest

from nstqft.tangle import TangleSyntaxError, TangleTypeError, parse_tangle
from nstqft.tangle.parser import parse_strand


@pytest.mark.parametrize(
    "tok, label, up, red",
    [("P1^", "P1", True, False), ("Hv", "H", False, False), ("red:Hv", "H", False, True), ("triv", "triv", True, False), ("P1*^", "P1*", True, False)],
)
def test_strands(tok, label, up, red):
    s = parse_strand(tok)
    assert (s.label, s.up, s.red) == (label, up, red)


def test_levels_and_round_trip():
    ast = parse_tangle("bottom P1^ P1^\nslice x+\nslice id, tw+\n")
    assert [str(s) for s in ast.levels[-1]] == ["P1^", "P1^"]
    assert len(ast.levels) == 3
    again = parse_tangle(ast.to_text())
    assert again.to_text() == ast.to_text()


def test_closed_and_red():
    ast = parse_tangle("bottom red:Hv red:H^\nslice id, tw+\nslice ev\n")
    # red components are cut open at the bottom, so only the top is empty
    assert not ast.is_closed and ast.levels[-1] == []
    assert ast.has_red and ast.red_pairs == 1


def test_comments_and_blank_lines():
    ast = parse_tangle("# a loop\n\nbottom\nslice coev(P1)  # cup\nslice ev'\n")
    assert ast.is_closed


@pytest.mark.parametrize(
    "text, line, col",
    [
        ("bottom P1^\nslice foo\n", 2, 7),
        ("slice id\n", 1, 1),
        ("bottom P1^\nslice coev\n", 2, 7),
        ("bottom P1^\nslice coupon(h\n", 2, 13),
        ("bottom P1^\nbogus\n", 2, 1),
        ("bottom P1^ 9x\n", 1, 12),
    ],
)
def test_syntax_errors_carry_position(text, line, col):
    with pytest.raises(TangleSyntaxError) as e:
        parse_tangle(text)
    assert (e.value.line, e.value.col) == (line, col)
    assert e.value.code == "syntax"
    assert f"line {line}, column {col}" in str(e.value)


def test_braiding_needs_two_strands():
    with pytest.raises(TangleTypeError, match="braiding needs two strands"):
        parse_tangle("bottom P1^\nslice x+\n")


@pytest.mark.parametrize(
    "text, msg",
    [
        ("bottom P1^ P1^\nslice id\n", "cover 1 strands"),
        ("bottom P1v H^\nslice ev\n", "different labels"),
        ("bottom P1^ P1v\nslice ev\n", "orientations"),
        ("bottom P1^\nslice coupon(zz)\n", "unregistered coupon"),
        ("bottom red:Hv red:H^\nslice coupon(h), id\n", "red strand"),
        ("bottom P1^ red:Hv red:H^\nslice id, ev\n", "leading"),
        ("bottom P1^\ntop Hv\n", "declared top"),
    ],
)
def test_type_errors(text, msg):
    with pytest.raises(TangleTypeError, match=msg):
        parse_tangle(text)
