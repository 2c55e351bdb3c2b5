"""Command-line front end.

    nstqft structure --r 3
    nstqft verify --r 3
    nstqft invariant FILE --r 3 [--cap WIDTH] [--format exact|exact+float] [--digits N]
    nstqft mcg --r 3 --genus 1 --labels P1 --side lyu|rhoX
    nstqft sl2z --r 3

Exact scalars are printed as polynomials in ``z = exp(2 pi i / 4r)``.  Every
failure prints exactly one ``ERROR <code> <message>`` line and exits nonzero.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

from .cyclo import CycloNum, embed_complex
from .hopf import dump_structure, small_qsl2, stabilization_params

__all__ = ["RunConfig", "run", "main"]

COMMANDS = ("structure", "verify", "invariant", "mcg", "sl2z")


class CliError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    command: str
    r: int = 3
    inputs: list = field(default_factory=list)
    cap: int | None = None
    output: str = "exact+float"
    digits: int = 15
    genus: int = 1
    labels: list = field(default_factory=list)
    side: str = "lyu"

    def validate(self):
        if self.command not in COMMANDS:
            raise CliError("usage", f"unknown command {self.command!r}")
        if self.r < 3 or self.r % 2 == 0:
            raise CliError("usage", f"r must be odd and at least 3, got {self.r}")
        if self.cap is not None and self.cap < 1:
            raise CliError("usage", "width cap must be at least 1")
        if self.output not in ("exact", "exact+float"):
            raise CliError("usage", f"unknown output format {self.output!r}")


def _float(x: CycloNum, digits: int) -> str:
    import mpmath

    c = embed_complex(x, digits)
    with mpmath.workdps(digits):
        re, im = mpmath.nstr(c.real, digits), mpmath.nstr(abs(c.imag), digits)
    sign = "-" if c.imag < 0 else "+"
    return f"{re} {sign} {im}i"


def _scalar_lines(name: str, x: CycloNum, cfg: RunConfig) -> list:
    lines = [f"{name} = {x}"]
    if cfg.output == "exact+float":
        lines.append(f"{name} ~ {_float(x, cfg.digits)}  (float, approximate)")
    return lines


def _structure(cfg: RunConfig, out) -> int:
    out.write(dump_structure(small_qsl2(cfg.r)))
    return 0


def _verify(cfg: RunConfig, out) -> int:
    from .checks import render, verify_all

    checks = verify_all(cfg.r)
    out.write(f"verify r={cfg.r}\n")
    out.write(render(checks))
    failed = sum(not c.ok for c in checks)
    out.write(f"{len(checks) - failed}/{len(checks)} checks passed\n")
    return 0 if failed == 0 else 1


def _invariant(cfg: RunConfig, out) -> int:
    from .tangle.engine import DEFAULT_CAP
    from .tangle.evaluate import CouponRegistry
    from .tangle.surgery import linking_signature, parse_surgery, surgery_invariant

    if len(cfg.inputs) != 1:
        raise CliError("usage", "invariant takes exactly one surgery file")
    path = cfg.inputs[0]
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise CliError("io", f"{path}: {e.strerror}") from None
    H = small_qsl2(cfg.r)
    reg = CouponRegistry(H)
    p = parse_surgery(text, reg)
    params = stabilization_params(H)
    cap = cfg.cap if cfg.cap is not None else DEFAULT_CAP
    val = surgery_invariant(p, params, reg, cap=cap)
    out.write(f"file {path}\n")
    out.write(f"r = {cfg.r}, z = exp(2 pi i/{4 * cfg.r})\n")
    out.write(f"components = {p.components}, signature = {linking_signature(p.linking_matrix)}\n")
    for line in _scalar_lines("L'", val, cfg):
        out.write(line + "\n")
    return 0


def _mcg(cfg: RunConfig, out) -> int:
    from .mcg import lyu_rep, rhoX_rep

    if cfg.genus < 0:
        raise CliError("usage", "genus must be nonnegative")
    H = small_qsl2(cfg.r)
    sides = {"lyu": lyu_rep, "rhoX": rhoX_rep}
    if cfg.side not in sides:
        raise CliError("usage", f"side must be lyu or rhoX, got {cfg.side!r}")
    rep = sides[cfg.side](H, cfg.genus, cfg.labels)
    out.write(f"mcg r={cfg.r} genus={cfg.genus} labels={','.join(cfg.labels) or '-'} side={cfg.side}\n")
    out.write(f"dimension {rep.basis.dim}\n")
    for name, m in rep.generator_matrices:
        out.write(m.to_text(name) + "\n")
    return 0


def _sl2z(cfg: RunConfig, out) -> int:
    from .checks import genus1_relations
    from .mcg import coend_operators, sl2z_report

    H = small_qsl2(cfg.r)
    ops = coend_operators(H)
    S, T = ops.S_op.matrix, ops.T_op.matrix
    out.write(f"sl2z r={cfg.r} on the coend L (dim {S.nrows})\n")
    out.write(S.to_text("S") + "\n")
    out.write(T.to_text("T") + "\n")
    coend = sl2z_report(S, T)
    for k, v in coend.items():
        out.write(f"coend L: {k}: " + (f"yes, scalar {v}" if v is not None else "no (not proportional on L)") + "\n")
    if cfg.r != 3:
        out.write("genus-1 state spaces are checked at r=3 only\n")
        return 0
    checks = [c for c in genus1_relations(H) if "m=0" in c.name]
    for side in ("lyu", "rhoX"):
        parts = []
        for c in checks:
            if f"[{side} " in c.name:
                rel = c.name.split(" [")[0].replace("~", "∝")
                parts.append(f"{rel} {'OK' if c.ok else 'FAIL'}")
        out.write("relations: " + ", ".join(parts) + f"  (genus-1 state space, {side} model)\n")
    for c in checks:
        out.write(c.line() + "\n")
    return 0 if all(c.ok for c in checks) else 1


_HANDLERS = {"structure": _structure, "verify": _verify, "invariant": _invariant, "mcg": _mcg, "sl2z": _sl2z}


def run(cfg: RunConfig, out=None) -> int:
    """Execute ``cfg``; write the report to ``out``; return the exit status."""
    from .tangle.engine import SizeCapError
    from .tangle.parser import TangleError

    out = out or sys.stdout
    try:
        cfg.validate()
        return _HANDLERS[cfg.command](cfg, out)
    except CliError as e:
        out.write(f"ERROR {e.code} {e}\n")
        return 2
    except SizeCapError as e:
        out.write(f"ERROR size-cap {e}\n")
        return 3
    except TangleError as e:
        out.write(f"ERROR {e.code} {e}\n")
        return 2
    except (ValueError, ArithmeticError, KeyError) as e:
        out.write(f"ERROR {getattr(e, 'code', type(e).__name__)} {e}\n")
        return 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("usage", message)


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nstqft", description="Exact non-semisimple TQFT invariants for the small quantum group.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--r", type=int, default=3, help="odd root of unity order (default 3)")
        if name == "invariant":
            s.add_argument("file")
            s.add_argument("--cap", type=int, default=None, help="state width cap")
            s.add_argument("--format", dest="output", default="exact+float", choices=["exact", "exact+float"])
            s.add_argument("--digits", type=int, default=15)
        if name == "mcg":
            s.add_argument("--genus", type=int, default=1)
            s.add_argument("--labels", default="", help="comma-separated module labels, e.g. P1")
            s.add_argument("--side", default="lyu", choices=["lyu", "rhoX"])
    return p


def config_from_args(argv) -> RunConfig:
    a = _parser().parse_args(argv)
    cfg = RunConfig(a.command, r=a.r)
    if a.command == "invariant":
        cfg.inputs = [a.file]
        cfg.cap, cfg.output, cfg.digits = a.cap, a.output, a.digits
    if a.command == "mcg":
        cfg.genus, cfg.side = a.genus, a.side
        cfg.labels = [x for x in a.labels.split(",") if x]
    return cfg


def main(argv=None) -> int:
    try:
        cfg = config_from_args(sys.argv[1:] if argv is None else argv)
    except CliError as e:
        sys.stdout.write(f"ERROR {e.code} {e}\n")
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
