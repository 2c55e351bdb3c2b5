"""Surgery presentations and the renormalized invariant.

A surgery file is a tangle file plus directives::

    framing C F        one line per red component C = 1..l (in leg-pair order)
    linking            optional, followed by l rows of l integers
    cut LEVEL POS      optional cutting point (default: first projective blue strand)

The red components, in n-bottom form, form the surgery link; the blue part is
the graph.  Framings and linking numbers are also read off the diagram
(writhe plus ``tw`` pieces) and the declared values must agree with them.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..cyclo import CycloNum
from ..hopf import StabilizationParams, stabilization_params
from .evaluate import CouponRegistry, EvaluationError, _walk, default_cut, red_components, renorm_eval
from .parser import TangleAST, TangleError, TangleSyntaxError, parse_tangle

__all__ = [
    "SurgeryError",
    "SurgeryPresentation",
    "parse_surgery",
    "diagram_linking",
    "linking_signature",
    "surgery_invariant",
]


class SurgeryError(TangleError):
    code = "surgery"


@dataclass
class SurgeryPresentation:
    ast: TangleAST
    framings: list
    linking_matrix: list
    cut: tuple | None = None

    @property
    def link(self) -> TangleAST:
        return self.ast

    @property
    def graph(self) -> TangleAST:
        return self.ast

    @property
    def components(self) -> int:
        return self.ast.red_pairs


def diagram_linking(ast: TangleAST, registry_types: dict | None = None) -> list:
    """Linking matrix read off the diagram; the diagonal holds blackboard framings."""
    types = registry_types or ast.coupon_types
    roots, comps = red_components(ast, types)
    n = len(roots)
    comp_of = {}
    for c, root in enumerate(roots):
        for seg in comps[root]:
            comp_of[seg] = c
    twice = [[0] * n for _ in range(n)]
    for si, p, ins, outs in _walk(ast, types):
        lvl = si - 1
        if p.kind == "coupon" and any((lvl, x) in comp_of for x in ins):
            raise SurgeryError(f"slice {si}: a surgery component enters coupon {p.arg!r}")
        if p.kind in ("tw+", "tw-") and (lvl, ins[0]) in comp_of:
            c = comp_of[(lvl, ins[0])]
            twice[c][c] += 2 if p.kind == "tw+" else -2
        if p.kind in ("x+", "x-"):
            a, b = (lvl, ins[0]), (lvl, ins[1])
            if a in comp_of and b in comp_of:
                sa, sb = ast.levels[lvl][ins[0]], ast.levels[lvl][ins[1]]
                sign = (1 if p.kind == "x+" else -1) * (1 if sa.up else -1) * (1 if sb.up else -1)
                i, j = comp_of[a], comp_of[b]
                if i == j:
                    twice[i][i] += 2 * sign
                else:
                    twice[i][j] += sign
                    twice[j][i] += sign
    for i in range(n):
        for j in range(n):
            if twice[i][j] % 2:
                raise SurgeryError("odd crossing count between two components")
    return [[x // 2 for x in row] for row in twice]


def linking_signature(m) -> int:
    """Signature of a symmetric integer matrix by rational congruence diagonalization."""
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    if any(len(row) != n for row in a) or any(a[i][j] != a[j][i] for i in range(n) for j in range(n)):
        raise ValueError("linking matrix must be square and symmetric")
    sig = 0
    live = list(range(n))
    while live:
        piv = next((i for i in live if a[i][i] != 0), None)
        if piv is not None:
            d = a[piv][piv]
            sig += 1 if d > 0 else -1
            live.remove(piv)
            for k in live:
                f = a[k][piv] / d
                if f:
                    for l in live:
                        a[k][l] -= f * a[piv][l]
            continue
        pair = next(((i, j) for i in live for j in live if i < j and a[i][j] != 0), None)
        if pair is None:
            break
        # zero-diagonal 2x2 block [[0, b], [b, 0]] has signature 0
        i, j = pair
        b = a[i][j]
        live.remove(i)
        live.remove(j)
        for k in live:
            ci, cj = a[k][i], a[k][j]
            # [ci, cj] B^-1 with B^-1 = [[0, 1/b], [1/b, 0]]
            fi, fj = cj / b, ci / b
            for l in live:
                a[k][l] -= fi * a[i][l] + fj * a[j][l]
    return sig


def _ints(line: str, ln: int) -> list:
    try:
        return [int(x) for x in line.split()]
    except ValueError:
        raise TangleSyntaxError(f"expected integers, got {line.strip()!r}", ln, 1) from None


def parse_surgery(text: str, registry: CouponRegistry | None = None) -> SurgeryPresentation:
    """Parse a surgery file and validate framings and linking numbers against the diagram."""
    tangle_lines = []
    framings = {}
    linking = None
    cut = None
    lines = text.splitlines()
    k = 0
    while k < len(lines):
        raw = lines[k]
        ln = k + 1
        body = raw.split("#", 1)[0].strip()
        head = body.split(" ", 1)[0] if body else ""
        if head == "framing":
            vals = _ints(body[len("framing"):], ln)
            if len(vals) != 2:
                raise TangleSyntaxError("framing needs a component and an integer", ln, 1)
            if vals[0] in framings:
                raise TangleSyntaxError(f"framing of component {vals[0]} given twice", ln, 1)
            framings[vals[0]] = vals[1]
            tangle_lines.append("")
        elif head == "linking":
            if linking is not None:
                raise TangleSyntaxError("linking block given twice", ln, 1)
            linking = []
            tangle_lines.append("")
            while k + 1 < len(lines):
                nxt = lines[k + 1].split("#", 1)[0].strip()
                if not nxt or not all(t.lstrip("+-").isdigit() for t in nxt.split()):
                    break
                linking.append(_ints(nxt, k + 2))
                tangle_lines.append("")
                k += 1
        elif head == "cut":
            vals = _ints(body[len("cut"):], ln)
            if len(vals) != 2:
                raise TangleSyntaxError("cut needs LEVEL POS", ln, 1)
            cut = (vals[0], vals[1])
            tangle_lines.append("")
        else:
            tangle_lines.append(raw)
        k += 1
    types = registry.types if registry else None
    ast = parse_tangle("\n".join(tangle_lines), types)
    n = ast.red_pairs
    if ast.bottom[2 * n :]:
        raise SurgeryError("a surgery presentation has no blue bottom strands")
    if ast.levels[-1]:
        raise SurgeryError("a surgery presentation must close at the top")
    if sorted(framings) != list(range(1, n + 1)):
        raise SurgeryError(f"need one framing line per red component 1..{n}, got {sorted(framings)}")
    try:
        computed = diagram_linking(ast)
    except EvaluationError as e:
        raise SurgeryError(str(e)) from None
    decl = [framings[c + 1] for c in range(n)]
    for c in range(n):
        if decl[c] != computed[c][c]:
            raise SurgeryError(
                f"component {c + 1}: declared framing {decl[c]} but the diagram gives {computed[c][c]}"
            )
    if linking is not None:
        if len(linking) != n or any(len(row) != n for row in linking):
            raise SurgeryError(f"linking matrix must be {n}x{n}")
        if any(linking[i][j] != linking[j][i] for i in range(n) for j in range(n)):
            raise SurgeryError("linking matrix is not symmetric")
        if any(linking[i][i] != decl[i] for i in range(n)):
            raise SurgeryError("linking matrix diagonal differs from the declared framings")
        if linking != computed:
            raise SurgeryError("declared linking numbers differ from the diagram")
    else:
        linking = computed
    try:
        default_cut(ast) if cut is None else None
    except EvaluationError:
        raise SurgeryError("inadmissible presentation: no blue edge with a projective label") from None
    return SurgeryPresentation(ast, decl, linking, cut)


def surgery_invariant(
    p: SurgeryPresentation,
    params: StabilizationParams | None = None,
    registry: CouponRegistry | None = None,
    H=3,
    cap: int | None = None,
) -> CycloNum:
    """``D^(-1-l) delta^(-sigma) F'_Lambda(L u T)``."""
    reg = registry or CouponRegistry(H)
    params = params or stabilization_params(reg.H)
    try:
        default_cut(p.ast)
    except EvaluationError:
        raise SurgeryError("inadmissible presentation: no blue edge with a projective label") from None
    kw = {} if cap is None else {"cap": cap}
    fprime = renorm_eval(p.ast, p.cut, reg, **kw)
    l = p.components
    sigma = linking_signature(p.linking_matrix)
    D, delta = params.script_d, params.small_delta
    return fprime * D ** (-1 - l) * delta ** (-sigma)
