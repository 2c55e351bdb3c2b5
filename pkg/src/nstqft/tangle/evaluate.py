"""Exact evaluation of slice programs.

Strands are labelled by modules; an upward strand carries ``V`` and a downward
one ``V*``.  Red strands are relabelled by the regular representation.  Each
piece is applied as a local operator on a sparse state batch, so no slice
matrix is ever formed as a Kronecker product with identities.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..hopf import HopfData, small_qsl2
from ..matrix import ExactMatrix, inverse
from ..rep import (
    Morphism,
    ModuleRep,
    braiding,
    braiding_inv,
    dual,
    duality,
    h_endomorphism,
    identity,
    is_intertwiner,
    modified_trace,
    module_by_name,
    normalize_trace,
    standard_modules,
    tensor,
    twist,
    twist_inv,
)
from .engine import DEFAULT_CAP, StateBatch
from .parser import (
    BUILTIN_COUPON_TYPES,
    CouponType,
    Piece,
    Strand,
    TangleAST,
    TangleError,
    parse_tangle,
)

__all__ = [
    "EvaluationError",
    "CouponRegistry",
    "Evaluator",
    "evaluate_rt",
    "evaluate_bichrome",
    "renorm_eval",
    "red_components",
    "PROJECTIVE_LABELS",
]

PROJECTIVE_LABELS = {"P1", "H"}


class EvaluationError(TangleError):
    code = "eval"


def _hopf(H) -> HopfData:
    return small_qsl2(H) if isinstance(H, int) else H


class CouponRegistry:
    """Coupon names mapped to checked morphisms, built lazily per Hopf algebra."""

    def __init__(self, H: HopfData | int):
        self.H = _hopf(H)
        self._makers = {}
        self._types = {}
        self._cache = {}
        std = lambda: standard_modules(self.H)  # noqa: E731
        self.register_lazy("h", BUILTIN_COUPON_TYPES["h"], lambda: h_endomorphism(std()["P1"]))
        self.register_lazy("eta1", BUILTIN_COUPON_TYPES["eta1"], lambda: normalize_trace(std()["P1"])[0])
        self.register_lazy("eps1", BUILTIN_COUPON_TYPES["eps1"], lambda: normalize_trace(std()["P1"])[1])
        from ..mcg import coend_inclusion, coend_j

        self.register_lazy("iH", BUILTIN_COUPON_TYPES["iH"], lambda: coend_inclusion(std()["regular"]))
        self.register_lazy("jH", BUILTIN_COUPON_TYPES["jH"], lambda: coend_j(std()["regular"]))

    def register_lazy(self, name: str, ctype: CouponType, maker):
        self._makers[name] = maker
        self._types[name] = ctype
        self._cache.pop(name, None)

    def register(self, name: str, phi: Morphism, source, target, accepts_red: bool = False):
        """Register ``phi`` under ``name``; ``source``/``target`` are strand tokens like ``P1^``."""
        from .parser import parse_strand

        src = tuple((s.label, s.up) for s in map(parse_strand, source))
        tgt = tuple((s.label, s.up) for s in map(parse_strand, target))
        want_s = tensor(*[self.strand_module(Strand(lab, up)) for lab, up in src]) if src else None
        want_t = tensor(*[self.strand_module(Strand(lab, up)) for lab, up in tgt]) if tgt else None
        if want_s is not None and phi.source.key != want_s.key:
            raise EvaluationError(f"coupon {name!r}: source {phi.source.key} does not match {want_s.key}")
        if want_t is not None and phi.target.key != want_t.key:
            raise EvaluationError(f"coupon {name!r}: target {phi.target.key} does not match {want_t.key}")
        if not is_intertwiner(phi):
            raise EvaluationError(f"coupon {name!r} is not H-linear")
        self.register_lazy(name, CouponType(src, tgt, accepts_red), lambda: phi)

    @property
    def types(self) -> dict:
        return dict(self._types)

    def get(self, name: str) -> Morphism:
        if name not in self._makers:
            raise EvaluationError(f"unregistered coupon {name!r}")
        if name not in self._cache:
            self._cache[name] = self._makers[name]()
        return self._cache[name]

    def strand_module(self, s: Strand) -> ModuleRep:
        V = standard_modules(self.H)["regular"] if s.red else module_by_name(self.H, s.label)
        return V if s.up else dual(V)


def _registry(H, registry) -> CouponRegistry:
    if registry is None:
        return CouponRegistry(H)
    if registry.H is not _hopf(H):
        raise EvaluationError("registry belongs to a different Hopf algebra")
    return registry


def _reparse(ast, registry: CouponRegistry) -> TangleAST:
    if isinstance(ast, str):
        return parse_tangle(ast, registry.types)
    return ast


@dataclass
class Evaluator:
    """Turns slices into local steps and caches the piece matrices."""

    registry: CouponRegistry
    cap: int | None = DEFAULT_CAP
    _mats: dict = field(default_factory=dict)

    @property
    def H(self) -> HopfData:
        return self.registry.H

    def mod(self, s: Strand) -> ModuleRep:
        return self.registry.strand_module(s)

    def piece_matrix(self, p: Piece, ins: list) -> ExactMatrix:
        mods = [self.mod(s) for s in ins]
        key = (p.kind, p.arg if p.kind == "coupon" else None, tuple(m.key for m in mods),
               p.arg.red if p.kind in ("coev", "coev'") else None,
               p.arg.label if p.kind in ("coev", "coev'") else None)
        hit = self._mats.get(key)
        if hit is not None:
            return hit
        k = p.kind
        if k == "id":
            m = identity(mods[0])
        elif k == "x+":
            m = braiding(mods[0], mods[1])
        elif k == "x-":
            m = braiding_inv(mods[1], mods[0])
        elif k == "tw+":
            m = twist(mods[0])
        elif k == "tw-":
            m = twist_inv(mods[0])
        elif k == "ev":
            m = duality("ev_l", mods[1])
        elif k == "ev'":
            m = duality("ev_r", mods[0])
        elif k == "coev":
            m = duality("coev_l", self.mod(p.arg))
        elif k == "coev'":
            m = duality("coev_r", self.mod(p.arg))
        else:
            m = self.registry.get(p.arg)
        self._mats[key] = m.matrix
        return m.matrix

    def slice_steps(self, ast: TangleAST, si: int) -> list:
        """Local steps ``(pos, k, matrix, out_dims)`` of slice ``si`` (1-based)."""
        cur = ast.levels[si - 1]
        steps = []
        out_pos = 0
        i = 0
        for p in ast.slices[si - 1].pieces:
            k = _arity(p, self.registry)
            ins = cur[i : i + k]
            outs = _outs(p, ins, self.registry)
            if p.kind != "id":
                steps.append((out_pos, k, self.piece_matrix(p, ins), [self.mod(s).dim for s in outs]))
            out_pos += len(outs)
            i += k
        return steps

    def run(self, batch: StateBatch, ast: TangleAST, lo: int, hi: int, tag: str = "") -> StateBatch:
        """Apply slices ``lo+1 .. hi``."""
        for si in range(lo + 1, hi + 1):
            for pos, k, A, out_dims in self.slice_steps(ast, si):
                batch = batch.apply(pos, k, A, out_dims, cap=self.cap, where=f"{tag}slice {si}")
        return batch


def _arity(p: Piece, registry: CouponRegistry) -> int:
    if p.kind in ("id", "tw+", "tw-"):
        return 1
    if p.kind in ("x+", "x-", "ev", "ev'"):
        return 2
    if p.kind in ("coev", "coev'"):
        return 0
    return len(registry.types[p.arg].source)


def _outs(p: Piece, ins: list, registry: CouponRegistry) -> list:
    k = p.kind
    if k in ("id", "tw+", "tw-"):
        return ins
    if k in ("x+", "x-"):
        return [ins[1], ins[0]]
    if k in ("ev", "ev'"):
        return []
    if k == "coev":
        return [Strand(p.arg.label, True, p.arg.red), Strand(p.arg.label, False, p.arg.red)]
    if k == "coev'":
        return [Strand(p.arg.label, False, p.arg.red), Strand(p.arg.label, True, p.arg.red)]
    return [Strand(lab, up) for lab, up in registry.types[p.arg].target]


def _basis_batch(ev: Evaluator, strands: list, prefix=None) -> StateBatch:
    """Basis of ``prefix (x) tensor(strands)``; ``prefix`` is a fixed vector on leading strands."""
    f = ev.H.field
    dims = [ev.mod(s).dim for s in strands]
    n = 1
    for d in dims:
        n *= d
    if prefix is None:
        vecs = [{j: f.one} for j in range(n)]
        return StateBatch.from_vectors(f, dims, vecs)
    pdims, pvec = prefix
    vecs = [{a * n + j: c for a, c in pvec.items()} for j in range(n)]
    return StateBatch.from_vectors(f, list(pdims) + dims, vecs)


def _module_of(ev: Evaluator, strands: list) -> ModuleRep:
    return tensor(*[ev.mod(s) for s in strands]) if strands else standard_modules(ev.H)["trivial"]


def evaluate_rt(ast, registry: CouponRegistry | None = None, H=3, cap: int | None = DEFAULT_CAP) -> Morphism:
    """The Reshetikhin-Turaev functor on a slice program (red strands count as ``H``)."""
    reg = _registry(registry.H if registry else H, registry)
    ast = _reparse(ast, reg)
    ev = Evaluator(reg, cap)
    batch = _basis_batch(ev, ast.bottom)
    batch = ev.run(batch, ast, 0, len(ast.slices))
    return Morphism(_module_of(ev, ast.bottom), _module_of(ev, ast.levels[-1]), batch.to_matrix())


# -- red components ----------------------------------------------------------------
class _UF:
    def __init__(self):
        self.p = {}

    def find(self, x):
        self.p.setdefault(x, x)
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.p[max(ra, rb)] = min(ra, rb)


def _walk(ast: TangleAST, registry_types: dict):
    """Yield ``(level, piece, in_positions, out_positions)`` for each piece."""
    for si, sl in enumerate(ast.slices, start=1):
        i = 0
        o = 0
        for p in sl.pieces:
            if p.kind in ("id", "tw+", "tw-"):
                k, m = 1, 1
            elif p.kind in ("x+", "x-"):
                k, m = 2, 2
            elif p.kind in ("ev", "ev'"):
                k, m = 2, 0
            elif p.kind in ("coev", "coev'"):
                k, m = 0, 2
            else:
                ct = registry_types[p.arg]
                k, m = len(ct.source), len(ct.target)
            yield si, p, list(range(i, i + k)), list(range(o, o + m))
            i += k
            o += m


def red_components(ast: TangleAST, registry_types: dict | None = None):
    """Union-find over red strand segments.

    Returns ``(comp_of_pair, segments)``: the component root of each leading red
    leg pair and a map from component root to the set of ``(level, pos)``
    segments.  Raises if a red component does not reach the bottom or meets
    the top.
    """
    types = registry_types or BUILTIN_COUPON_TYPES
    uf = _UF()
    for lvl, strands in enumerate(ast.levels):
        for pos, s in enumerate(strands):
            if s.red:
                uf.find((lvl, pos))
    for si, p, ins, outs in _walk(ast, types):
        a, b = si - 1, si
        if p.kind in ("id", "tw+", "tw-"):
            if ast.levels[a][ins[0]].red:
                uf.union((a, ins[0]), (b, outs[0]))
        elif p.kind in ("x+", "x-"):
            for x, y in ((ins[0], outs[1]), (ins[1], outs[0])):
                if ast.levels[a][x].red:
                    uf.union((a, x), (b, y))
        elif p.kind in ("ev", "ev'"):
            if ast.levels[a][ins[0]].red:
                uf.union((a, ins[0]), (a, ins[1]))
        elif p.kind in ("coev", "coev'"):
            if ast.levels[b][outs[0]].red:
                uf.union((b, outs[0]), (b, outs[1]))
    for pos, s in enumerate(ast.levels[-1]):
        if s.red:
            raise EvaluationError("red strand reaches the top boundary")
    n = ast.red_pairs
    for j in range(n):
        uf.union((0, 2 * j), (0, 2 * j + 1))
    roots = [uf.find((0, 2 * j)) for j in range(n)]
    if len(set(roots)) != n:
        raise EvaluationError("two red leg pairs lie on one red component")
    comps: dict = {}
    for key in list(uf.p):
        comps.setdefault(uf.find(key), set()).add(key)
    for root in comps:
        if root not in roots:
            # a red segment ending in a coupon belongs to the coupon's component
            if not _ends_in_coupon(ast, comps[root], types):
                raise EvaluationError("red component not cut to the bottom")
    return roots, comps


def _ends_in_coupon(ast: TangleAST, segs, types) -> bool:
    for si, p, ins, outs in _walk(ast, types):
        if p.kind == "coupon" and any((si - 1, x) in segs for x in ins):
            return True
    return False


def _lambda_one(H: HopfData) -> dict:
    """``lambda (x) 1`` in ``H* (x) H`` (dual basis on the first factor)."""
    u = H.unit_index()
    return {i * H.dim + u: c for i, c in sorted(H.integral_lambda.items()) if c}


def _red_prefix(H: HopfData, n: int):
    vec = {0: H.field.one}
    dims = []
    lo = _lambda_one(H)
    d2 = H.dim * H.dim
    for _ in range(n):
        vec = {a * d2 + b: x * y for a, x in vec.items() for b, y in lo.items()}
        dims += [H.dim, H.dim]
    return dims, vec


def evaluate_bichrome(ast, registry: CouponRegistry | None = None, H=3, cap: int | None = DEFAULT_CAP) -> Morphism:
    """``F_Lambda`` of an n-bottom bichrome graph.

    The red legs are fed ``(lambda (x) 1)^n``; the result is a morphism from the
    blue bottom to the top.
    """
    reg = _registry(registry.H if registry else H, registry)
    ast = _reparse(ast, reg)
    red_components(ast, reg.types)
    ev = Evaluator(reg, cap)
    n = ast.red_pairs
    blue = ast.bottom[2 * n :]
    batch = _basis_batch(ev, blue, _red_prefix(reg.H, n) if n else None)
    batch = ev.run(batch, ast, 0, len(ast.slices))
    return Morphism(_module_of(ev, blue), _module_of(ev, ast.levels[-1]), batch.to_matrix())


# -- renormalized evaluation -------------------------------------------------------
def _cut_program(ev: Evaluator, ast: TangleAST, level: int, pos: int, init: StateBatch) -> ExactMatrix:
    """Matrix of the cut graph with a kink: input at the cut, output on the far right."""
    strands = ast.levels[level]
    V = ev.mod(strands[pos])
    batch = ev.run(init, ast, 0, level, tag="lower ")
    # move the lower end right, over the strands to its right
    for j in range(pos + 1, len(strands)):
        Y = ev.mod(strands[j])
        batch = batch.apply(j - 1, 2, braiding(V, Y).matrix, [Y.dim, V.dim], ev.cap, "cut")
    # fresh input strand w on the far right
    f = ev.H.field
    cols = []
    for col in batch.cols:
        for e in range(V.dim):
            cols.append({k * V.dim + e: v for k, v in col.items()})
    batch = StateBatch(f, batch.dims + [V.dim], cols, batch.den)
    last = len(strands) - 1
    batch = batch.apply(last, 2, braiding(V, V).matrix, [V.dim, V.dim], ev.cap, "cut")
    # move w back to the cut position
    for j in range(len(strands) - 1, pos, -1):
        Y = ev.mod(strands[j])
        batch = batch.apply(j - 1, 2, braiding_inv(V, Y).matrix, [V.dim, Y.dim], ev.cap, "cut")
    batch = ev.run(batch, ast, level, len(ast.slices), tag="upper ")
    if batch.dims != [V.dim]:
        raise EvaluationError("cut graph does not close to a single strand")
    # batch columns: (state index, e); summed over the lower state
    m = batch.to_matrix()
    nstates = m.ncols // V.dim
    acc = ExactMatrix.zeros(f, V.dim, V.dim)
    for s in range(nstates):
        acc = acc + m.select(col_idx=list(range(s * V.dim, (s + 1) * V.dim)))
    return acc


def _kink(ev: Evaluator, label: str) -> Morphism:
    """The kink produced by the cut construction, computed on a bare loop."""
    H = ev.H
    cache = H._cache.setdefault("cut_kink", {})
    if label in cache:
        return cache[label]
    loop = parse_tangle(f"bottom\nslice coev({label})\nslice ev'\n", ev.registry.types)
    V = ev.mod(Strand(label))
    init = StateBatch.from_vectors(H.field, [], [{0: H.field.one}])
    k = _cut_program(ev, loop, 1, 0, init)
    kink = Morphism(V, V, k)
    if kink.matrix == twist(V).matrix:
        fix = twist_inv(V)
    elif kink.matrix == twist_inv(V).matrix:
        fix = twist(V)
    else:
        fix = Morphism(V, V, inverse(k))
    cache[label] = fix
    return fix


def default_cut(ast: TangleAST):
    """First upward blue strand with a projective label, scanning levels bottom-up."""
    for lvl, strands in enumerate(ast.levels):
        for pos, s in enumerate(strands):
            if not s.red and s.up and s.label in PROJECTIVE_LABELS:
                return lvl, pos
    raise EvaluationError("inadmissible graph: no blue strand with a projective label")


def cut_graph(ast, cut=None, registry: CouponRegistry | None = None, H=3, cap: int | None = DEFAULT_CAP) -> Morphism:
    """``F_Lambda(T_V)`` for the graph cut at ``cut = (level, pos)``."""
    reg = _registry(registry.H if registry else H, registry)
    ast = _reparse(ast, reg)
    if ast.bottom[2 * ast.red_pairs :] or ast.levels[-1]:
        raise EvaluationError("renormalized evaluation needs a closed graph")
    red_components(ast, reg.types)
    level, pos = default_cut(ast) if cut is None else cut
    if not (0 <= level < len(ast.levels)) or not (0 <= pos < len(ast.levels[level])):
        raise EvaluationError(f"cut ({level}, {pos}) is outside the diagram")
    s = ast.levels[level][pos]
    if s.red:
        raise EvaluationError("cannot cut a red strand")
    if s.label not in PROJECTIVE_LABELS:
        raise EvaluationError(f"non-projective cut label {s.label!r}")
    if not s.up:
        raise EvaluationError("cut a strand oriented upward")
    ev = Evaluator(reg, cap)
    f = reg.H.field
    n = ast.red_pairs
    if n:
        dims, vec = _red_prefix(reg.H, n)
        init = StateBatch.from_vectors(f, dims, [vec])
    else:
        init = StateBatch.from_vectors(f, [], [{0: f.one}])
    V = ev.mod(s)
    m = _cut_program(ev, ast, level, pos, init)
    return Morphism(V, V, m) @ _kink(ev, s.label)


def renorm_eval(ast, cut=None, registry: CouponRegistry | None = None, H=3, cap: int | None = DEFAULT_CAP):
    """``F'_Lambda(T) = t_V(F_Lambda(T_V))`` for a closed admissible bichrome graph."""
    return modified_trace(cut_graph(ast, cut, registry, H, cap))
