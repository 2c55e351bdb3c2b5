import io
import subprocess
import sys
from pathlib import Path

import pytest

from nstqft.cli import RunConfig, main, run
from nstqft.hopf import dump_structure, load_structure, small_qsl2

UNKNOT = str(Path(__file__).resolve().parent.parent / "examples" / "unknot_h.surgery")


def call(argv):
    buf = io.StringIO()
    stdout = sys.stdout
    sys.stdout = buf
    try:
        code = main(argv)
    finally:
        sys.stdout = stdout
    return code, buf.getvalue()


def error_lines(text):
    return [ln for ln in text.splitlines() if ln.startswith("ERROR ")]


def test_structure_round_trips():
    code, out = call(["structure", "--r", "3"])
    assert code == 0
    assert dump_structure(load_structure(out)) == dump_structure(small_qsl2(3))


def test_invariant_exact():
    code, out = call(["invariant", UNKNOT, "--r", "3"])
    assert code == 0
    assert "L' = -1/9*z^3 + 2/9*z" in out.splitlines()
    assert "(float, approximate)" in out


def test_invariant_exact_only():
    code, out = call(["invariant", UNKNOT, "--format", "exact"])
    assert code == 0 and "approximate" not in out


def test_mcg_export():
    code, out = call(["mcg", "--r", "3", "--genus", "1", "--side", "lyu"])
    assert code == 0
    assert "dimension 4" in out and "matrix S1 4 4" in out


def test_sl2z():
    code, out = call(["sl2z", "--r", "3"])
    assert code == 0
    assert "matrix S 27 27" in out and "matrix T 27 27" in out
    assert "relations: (ST)^3 ∝ S^2 OK, S^4 ∝ id OK  (genus-1 state space, lyu model)" in out


@pytest.mark.parametrize(
    "argv, code, prefix",
    [
        (["structure", "--r", "4"], 2, "ERROR usage"),
        (["nope"], 2, "ERROR usage"),
        (["invariant", "/no/such/file.surgery"], 2, "ERROR io"),
        (["invariant", UNKNOT, "--cap", "0"], 2, "ERROR usage"),
        (["invariant", UNKNOT, "--cap", "2"], 3, "ERROR size-cap"),
        (["mcg", "--labels", "Q7"], 1, "ERROR rep"),
    ],
)
def test_error_lines(argv, code, prefix):
    got, out = call(argv)
    assert got == code
    errs = error_lines(out)
    assert len(errs) == 1 and errs[0].startswith(prefix)


def test_parse_errors(tmp_path):
    bad = tmp_path / "bad.surgery"
    bad.write_text("bottom\nslice coev(P1)\nslice frob\n")
    code, out = call(["invariant", str(bad)])
    assert code == 2 and error_lines(out) == ["ERROR syntax line 3, column 7: unknown piece 'frob'"]
    bad.write_text("bottom\nslice x+\n")
    code, out = call(["invariant", str(bad)])
    assert code == 2 and error_lines(out)[0].startswith("ERROR type")
    assert "braiding needs two strands" in out


def test_run_config_validation():
    out = io.StringIO()
    assert run(RunConfig("verify", r=2), out) == 2
    assert out.getvalue().startswith("ERROR usage")


def test_module_entry_point():
    p = subprocess.run(
        [sys.executable, "-m", "nstqft", "invariant", UNKNOT, "--format", "exact"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert p.returncode == 0
    assert "L' = -1/9*z^3 + 2/9*z" in p.stdout


def test_python_fallback_gives_same_report():
    import os

    argv = [sys.executable, "-m", "nstqft", "invariant", str(Path(UNKNOT).parent / "surgery" / "p1_through_red_unknot.surgery")]
    env = dict(os.environ, NSTQFT_KERNELS="python")
    slow = subprocess.run(argv, capture_output=True, env=env, check=False)
    fast = subprocess.run(argv, capture_output=True, check=False)
    probe = [sys.executable, "-c", "import nstqft; print(nstqft.KERNEL_BACKEND)"]
    assert subprocess.run(probe, capture_output=True, text=True, env=env).stdout.strip() == "python"
    assert slow.returncode == fast.returncode == 0
    assert slow.stdout == fast.stdout
