"""Slice language for ribbon and bichrome graphs.

Grammar (one statement per line, ``#`` starts a comment)::

    bottom <strand>*
    slice <piece>(,<piece>)*
    top <strand>*

    strand = [red:]LABEL[^|v]          (default orientation ^)
    piece  = id | x+ | x- | ev | ev' | coev(S) | coev'(S) | tw+ | tw- | coupon(NAME)

An upward strand labelled V carries V, a downward one carries V*.  ``x+`` is
the braiding ``c``, ``x-`` its inverse, ``tw+`` the twist ``theta``.  ``ev``
closes ``(V v, V ^)`` and ``ev'`` closes ``(V ^, V v)``; ``coev(V)`` opens
``(V ^, V v)`` and ``coev'(V)`` opens ``(V v, V ^)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

__all__ = [
    "TangleError",
    "TangleSyntaxError",
    "TangleTypeError",
    "Strand",
    "Piece",
    "Slice",
    "TangleAST",
    "CouponType",
    "BUILTIN_COUPON_TYPES",
    "parse_tangle",
    "parse_strand",
    "typecheck",
]


class TangleError(ValueError):
    code = "tangle"


class TangleSyntaxError(TangleError):
    code = "syntax"

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


class TangleTypeError(TangleError):
    code = "type"


@dataclass(frozen=True)
class Strand:
    label: str
    up: bool = True
    red: bool = False

    def __str__(self):
        return ("red:" if self.red else "") + self.label + ("^" if self.up else "v")

    def flipped(self) -> "Strand":
        return Strand(self.label, not self.up, self.red)


@dataclass(frozen=True)
class Piece:
    kind: str  # id, x+, x-, ev, ev', coev, coev', tw+, tw-, coupon
    arg: object = None  # Strand for coev pieces, coupon name for coupons
    line: int = 0
    col: int = 0

    def __str__(self):
        if self.kind in ("coev", "coev'"):
            s = self.arg
            return f"{self.kind}({'red:' if s.red else ''}{s.label})"
        if self.kind == "coupon":
            return f"coupon({self.arg})"
        return self.kind


@dataclass
class Slice:
    pieces: list
    line: int = 0


@dataclass(frozen=True)
class CouponType:
    source: tuple  # of (label, up)
    target: tuple
    accepts_red: bool = False


BUILTIN_COUPON_TYPES = {
    "h": CouponType((("P1", True),), (("P1", True),)),
    "eta1": CouponType((), (("P1", True),)),
    "eps1": CouponType((("P1", True),), ()),
    "iH": CouponType((("H", False), ("H", True)), (("coad", True),), accepts_red=True),
    "jH": CouponType((("ad", True),), (("H", True), ("H", False))),
}


@dataclass
class TangleAST:
    bottom: list
    slices: list
    top: list | None = None
    levels: list = field(default_factory=list)  # boundary after each slice; levels[0] = bottom
    red_pairs: int = 0
    coupon_types: dict = field(default_factory=dict)

    @property
    def is_closed(self) -> bool:
        return not self.bottom and not self.levels[-1]

    @property
    def has_red(self) -> bool:
        return any(s.red for lvl in self.levels for s in lvl)

    def to_text(self) -> str:
        lines = ["bottom " + " ".join(str(s) for s in self.bottom)]
        for sl in self.slices:
            lines.append("slice " + ", ".join(str(p) for p in sl.pieces))
        lines.append("top " + " ".join(str(s) for s in self.levels[-1]))
        return "\n".join(lines)


_STRAND = re.compile(r"(red:)?([A-Za-z_][A-Za-z0-9_]*\*?)$")
_PIECE = re.compile(r"(id|x\+|x-|x−|ev'|ev|coev'|coev|tw\+|tw-|tw−|coupon)(?:\((.*)\))?$")
# labels ending in 'v' that are read whole when no orientation mark follows
WHOLE_LABELS = {"triv"}


def parse_strand(tok: str, line: int = 0, col: int = 0) -> Strand:
    """``[red:]LABEL[^|v]``; a trailing ``v`` is the orientation unless the token is a whole label."""
    red = tok.startswith("red:")
    body = tok[4:] if red else tok
    up = True
    if body.endswith("^"):
        body = body[:-1]
    elif body.endswith("v") and body not in WHOLE_LABELS and len(body) > 1:
        body, up = body[:-1], False
    if not _STRAND.match(body):
        raise TangleSyntaxError(f"bad strand {tok!r}", line, col)
    return Strand(body, up, red)


def _split_strands(rest: str, line: int, col0: int):
    out = []
    for m in re.finditer(r"\S+", rest):
        tok = m.group(0)
        out.append(parse_strand(tok, line, col0 + m.start()))
    return out


def parse_tangle(text: str, coupon_types: dict | None = None) -> TangleAST:
    """Parse and type-check a slice program."""
    ctypes = dict(BUILTIN_COUPON_TYPES)
    if coupon_types:
        ctypes.update(coupon_types)
    bottom = None
    top = None
    slices = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        head, _, rest = body.partition(" ")
        col0 = indent + len(head) + 2
        if head == "bottom":
            if bottom is not None or slices:
                raise TangleSyntaxError("'bottom' must come first and only once", ln, indent + 1)
            bottom = _split_strands(rest, ln, col0)
        elif head == "slice":
            if bottom is None:
                raise TangleSyntaxError("'slice' before 'bottom'", ln, indent + 1)
            if top is not None:
                raise TangleSyntaxError("'slice' after 'top'", ln, indent + 1)
            slices.append(Slice(_parse_pieces(rest, ln, col0), ln))
        elif head == "top":
            if bottom is None or top is not None:
                raise TangleSyntaxError("misplaced 'top'", ln, indent + 1)
            top = _split_strands(rest, ln, col0)
        else:
            raise TangleSyntaxError(f"unknown statement {head!r}", ln, indent + 1)
    if bottom is None:
        raise TangleSyntaxError("missing 'bottom' line", 1, 1)
    ast = TangleAST(bottom, slices, top, coupon_types=ctypes)
    typecheck(ast)
    return ast


def _parse_pieces(rest: str, ln: int, col0: int) -> list:
    pieces = []
    pos = 0
    depth = 0
    start = 0
    opened = 0
    items = []
    for k, ch in enumerate(rest):
        if ch == "(":
            if depth == 0:
                opened = k
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise TangleSyntaxError("unbalanced ')'", ln, col0 + k)
        elif ch == "," and depth == 0:
            items.append((start, rest[start:k]))
            start = k + 1
    if depth != 0:
        raise TangleSyntaxError("unbalanced '('", ln, col0 + opened)
    items.append((start, rest[start:]))
    for off, item in items:
        tok = item.strip()
        col = col0 + off + (len(item) - len(item.lstrip()))
        if not tok:
            raise TangleSyntaxError("empty piece", ln, col)
        m = _PIECE.match(tok)
        if not m:
            raise TangleSyntaxError(f"unknown piece {tok!r}", ln, col)
        kind, arg = m.groups()
        kind = kind.replace("−", "-")
        if kind in ("coev", "coev'"):
            if arg is None:
                raise TangleSyntaxError(f"{kind} needs a label, e.g. {kind}(P1)", ln, col)
            s = parse_strand(arg.strip(), ln, col)
            pieces.append(Piece(kind, Strand(s.label, True, s.red), ln, col))
        elif kind == "coupon":
            if not arg or not re.match(r"[A-Za-z_][A-Za-z0-9_]*$", arg.strip()):
                raise TangleSyntaxError("coupon needs a name, e.g. coupon(h)", ln, col)
            pieces.append(Piece(kind, arg.strip(), ln, col))
        else:
            if arg is not None:
                raise TangleSyntaxError(f"{kind} takes no argument", ln, col)
            pieces.append(Piece(kind, None, ln, col))
        pos += 1
    return pieces


def _arity(p: Piece, ctypes: dict, where: str) -> int:
    if p.kind in ("id", "tw+", "tw-"):
        return 1
    if p.kind in ("x+", "x-", "ev", "ev'"):
        return 2
    if p.kind in ("coev", "coev'"):
        return 0
    ct = ctypes.get(p.arg)
    if ct is None:
        raise TangleTypeError(f"{where}: unregistered coupon {p.arg!r}")
    return len(ct.source)


def typecheck(ast: TangleAST) -> None:
    """Compute the boundary after each slice and check piece types."""
    ctypes = ast.coupon_types or BUILTIN_COUPON_TYPES
    cur = list(ast.bottom)
    levels = [list(cur)]
    for si, sl in enumerate(ast.slices, start=1):
        nxt = []
        i = 0
        for p in sl.pieces:
            where = f"slice {si} (line {sl.line}), strand {i}"
            k = _arity(p, ctypes, where)
            ins = cur[i : i + k]
            if len(ins) < k:
                if p.kind in ("x+", "x-"):
                    raise TangleTypeError(f"{where}: braiding needs two strands")
                raise TangleTypeError(f"{where}: {p} needs {k} strands, {len(ins)} left")
            nxt.extend(_piece_out(p, ins, ctypes, where))
            i += k
        if i != len(cur):
            raise TangleTypeError(
                f"slice {si} (line {sl.line}): pieces cover {i} strands but the boundary has {len(cur)}"
            )
        cur = nxt
        levels.append(list(cur))
    if ast.top is not None and [str(s) for s in ast.top] != [str(s) for s in cur]:
        raise TangleTypeError(
            "declared top " + " ".join(map(str, ast.top)) + " does not match " + " ".join(map(str, cur))
        )
    ast.levels = levels
    # leading red (down, up) pairs
    n = 0
    b = ast.bottom
    while 2 * n + 1 < len(b) and b[2 * n].red and b[2 * n + 1].red:
        x, y = b[2 * n], b[2 * n + 1]
        if x.up or not y.up or x.label != y.label:
            raise TangleTypeError(f"red bottom legs {2 * n}, {2 * n + 1} must be a (v, ^) pair with one label")
        n += 1
    if any(s.red for s in b[2 * n :]):
        raise TangleTypeError("red bottom legs must be the leading (v, ^) pairs")
    ast.red_pairs = n


def _piece_out(p: Piece, ins: list, ctypes: dict, where: str) -> list:
    k = p.kind
    if k in ("id", "tw+", "tw-"):
        return list(ins)
    if k in ("x+", "x-"):
        return [ins[1], ins[0]]
    if k in ("ev", "ev'"):
        a, b = ins
        if a.label != b.label or a.red != b.red:
            raise TangleTypeError(f"{where}: {k} joins strands with different labels ({a}, {b})")
        want = (False, True) if k == "ev" else (True, False)
        if (a.up, b.up) != want:
            raise TangleTypeError(f"{where}: {k} needs orientations {'(v, ^)' if k == 'ev' else '(^, v)'}, got ({a}, {b})")
        return []
    if k == "coev":
        s = p.arg
        return [Strand(s.label, True, s.red), Strand(s.label, False, s.red)]
    if k == "coev'":
        s = p.arg
        return [Strand(s.label, False, s.red), Strand(s.label, True, s.red)]
    ct = ctypes[p.arg]
    for j, (s, (lab, up)) in enumerate(zip(ins, ct.source)):
        if s.red and not ct.accepts_red:
            raise TangleTypeError(f"{where}: red strand enters blue coupon {p.arg!r}")
        if s.red:
            if s.up != up:
                raise TangleTypeError(f"{where}: coupon {p.arg!r} input {j} orientation mismatch")
        elif (s.label, s.up) != (lab, up):
            raise TangleTypeError(
                f"{where}: coupon {p.arg!r} input {j} expects {lab}{'^' if up else 'v'}, got {s}"
            )
    return [Strand(lab, up, False) for lab, up in ct.target]
