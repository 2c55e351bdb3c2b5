"""Finite-dimensional modules over a :class:`HopfData` and their morphisms.

A module stores the action matrices of the algebra generators; the action of
any basis element is obtained from the PBW splitting of the Hopf data.  Tensor
products are strict: factors are flattened and trivial factors are dropped, so
``V (x) 1 = V`` on the nose.
"""
from __future__ import annotations

import random

from .cyclo import CycloNum
from .hopf import HopfData
from .matrix import ExactMatrix, LinalgError, _prune, inverse, nullspace

__all__ = [
    "ModuleRep",
    "Morphism",
    "RepError",
    "trivial_module",
    "regular_module",
    "adjoint_module",
    "coadjoint_module",
    "projective_cover_p1",
    "standard_modules",
    "module_by_name",
    "tensor",
    "dual",
    "braiding",
    "braiding_inv",
    "twist",
    "twist_inv",
    "duality",
    "identity",
    "hom_space",
    "is_intertwiner",
    "check_module",
    "h_endomorphism",
    "find_retract",
    "modified_trace",
    "normalize_trace",
    "partial_trace",
    "random_endomorphism",
]


class RepError(ValueError):
    code = "rep"


class ModuleRep:
    """A left module.  ``gens`` maps generator indices to action matrices.

    ``gens`` may also be a callable returning that dict; it is then evaluated
    on first use (tensor products are often only needed as labels).
    """

    def __init__(self, H: HopfData, dim: int, gens, name: str, factors=None, dual_of=None):
        self.H = H
        self.dim = dim
        self.name = name
        self._gens = gens
        self.factors = tuple(factors) if factors is not None else (self,)
        self.dual_of = dual_of
        self._act: dict = {}

    @property
    def key(self) -> str:
        if not self.factors:
            return "1"
        return "(x)".join(f.name for f in self.factors)

    @property
    def gens(self) -> dict:
        if callable(self._gens):
            self._gens = self._gens()
        return self._gens

    @property
    def action(self) -> dict:
        return self.gens

    def __repr__(self):
        return f"ModuleRep({self.key}, dim={self.dim})"

    def act(self, i: int) -> ExactMatrix:
        """Action matrix of the basis element ``e_i``."""
        m = self._act.get(i)
        if m is not None:
            return m
        H = self.H
        if i in self.gens:
            m = self.gens[i]
        elif H.pbw is None:
            raise RepError(f"no action for basis element {i}")
        else:
            w = H.pbw[i]
            if w is None:
                m = ExactMatrix.identity(H.field, self.dim)
            else:
                m = self.act(w[0]) @ self.act(w[1])
        self._act[i] = m
        return m

    def act_elem(self, a: dict) -> ExactMatrix:
        out = ExactMatrix.zeros(self.H.field, self.dim, self.dim)
        for i, x in sorted(a.items()):
            out = out + self.act(i).scale(x)
        return out


class Morphism:
    """An H-linear map ``source -> target`` given by its matrix."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: ModuleRep, target: ModuleRep, matrix: ExactMatrix):
        if matrix.shape != (target.dim, source.dim):
            raise RepError(f"matrix shape {matrix.shape} does not match {target.key} <- {source.key}")
        self.source = source
        self.target = target
        self.matrix = matrix

    def __repr__(self):
        return f"Morphism({self.source.key} -> {self.target.key})"

    def __matmul__(self, other: "Morphism") -> "Morphism":
        if other.target.key != self.source.key:
            raise RepError(f"cannot compose {self.source.key} <- ... with ... -> {other.target.key}")
        return Morphism(other.source, self.target, self.matrix @ other.matrix)

    def __add__(self, other):
        self._same(other)
        return Morphism(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other):
        self._same(other)
        return Morphism(self.source, self.target, self.matrix - other.matrix)

    def scale(self, c) -> "Morphism":
        return Morphism(self.source, self.target, self.matrix.scale(c))

    def tensor(self, other: "Morphism") -> "Morphism":
        return Morphism(
            tensor(self.source, other.source), tensor(self.target, other.target), self.matrix.kron(other.matrix)
        )

    def _same(self, other):
        if self.source.key != other.source.key or self.target.key != other.target.key:
            raise RepError("morphisms have different source or target")


# -- modules ---------------------------------------------------------------------
def _gens_from(H: HopfData, fn) -> dict:
    idx = H.generators if H.generators is not None else range(H.dim)
    return {g: fn(g) for g in idx}


def trivial_module(H: HopfData) -> ModuleRep:
    f = H.field
    c = H._cache.get("mod_triv")
    if c is None:
        c = ModuleRep(H, 1, _gens_from(H, lambda g: ExactMatrix.scalar(f, 1, H.counit[g])), "triv", factors=())
        H._cache["mod_triv"] = c
    return c


def regular_module(H: HopfData) -> ModuleRep:
    return ModuleRep(H, H.dim, _gens_from(H, lambda g: H.left_matrix(H.basis(g))), "H")


def adjoint_module(H: HopfData) -> ModuleRep:
    """``x . y = x_(1) y S(x_(2))``."""

    def m(g):
        out = ExactMatrix.zeros(H.field, H.dim, H.dim)
        for (i, j), c in sorted(H.comult[g].items()):
            out = out + (H.left_matrix(H.basis(i)) @ H.right_matrix(H.S(H.basis(j)))).scale(c)
        return out

    return ModuleRep(H, H.dim, _gens_from(H, m), "ad")


def coadjoint_module(H: HopfData) -> ModuleRep:
    """``(x . phi)(y) = phi(S(x_(1)) y x_(2))`` on the dual basis."""

    def m(g):
        out = ExactMatrix.zeros(H.field, H.dim, H.dim)
        for (i, j), c in sorted(H.comult[g].items()):
            out = out + (H.left_matrix(H.S(H.basis(i))) @ H.right_matrix(H.basis(j))).scale(c)
        return out.T

    return ModuleRep(H, H.dim, _gens_from(H, m), "coad")


def projective_cover_p1(H: HopfData) -> ModuleRep:
    """The projective cover of the trivial module for the small quantum group.

    Basis ``a0, x_0..x_{r-2}, y_0..y_{r-2}, b0`` (dimension 2r).
    """
    if not H.name.startswith("Uq(sl2)"):
        raise RepError("P1 is only tabulated for the small quantum group")
    F = H.field
    r = F.r
    E, Fg, K = H.generators
    a0 = 0
    xs = [1 + k for k in range(r - 1)]
    ys = [r + k for k in range(r - 1)]
    b0 = 2 * r - 1
    n = 2 * r
    eK, eE, eF = [], [], []
    eK.append((a0, a0, 1))
    eK.append((b0, b0, 1))
    for k in range(r - 1):
        w = F.q_pow(-2 * k - 2)
        eK.append((xs[k], xs[k], w))
        eK.append((ys[k], ys[k], w))
        c = -(F.qint(k) * F.qint(k + 1))
        if k > 0:
            eE.append((xs[k - 1], xs[k], c))
            eE.append((ys[k - 1], ys[k], c))
        if k + 1 < r - 1:
            eF.append((xs[k + 1], xs[k], 1))
            eF.append((ys[k + 1], ys[k], 1))
    eF.append((a0, xs[r - 2], 1))
    eE.append((a0, ys[0], 1))
    eE.append((xs[r - 2], b0, 1))
    eF.append((ys[0], b0, 1))
    gens = {
        E: ExactMatrix.from_entries(F, n, n, eE),
        Fg: ExactMatrix.from_entries(F, n, n, eF),
        K: ExactMatrix.from_entries(F, n, n, eK),
    }
    return ModuleRep(H, n, gens, "P1")


def standard_modules(H: HopfData) -> dict:
    c = H._cache.get("std_modules")
    if c is None:
        c = {
            "regular": regular_module(H),
            "trivial": trivial_module(H),
            "adjoint": adjoint_module(H),
            "coadjoint": coadjoint_module(H),
        }
        if H.name.startswith("Uq(sl2)"):
            c["P1"] = projective_cover_p1(H)
        H._cache["std_modules"] = c
    return c


_TOKENS = {"triv": "trivial", "H": "regular", "ad": "adjoint", "coad": "coadjoint", "P1": "P1"}


def module_by_name(H: HopfData, name: str) -> ModuleRep:
    """Look up a module by its token (``triv``, ``H``, ``ad``, ``coad``, ``P1``), or ``NAME*``."""
    if name.endswith("*"):
        return dual(module_by_name(H, name[:-1]))
    std = standard_modules(H)
    key = _TOKENS.get(name)
    if key is None or key not in std:
        raise RepError(f"unknown module label {name!r}")
    return std[key]


def tensor(*mods: ModuleRep) -> ModuleRep:
    """Strict tensor product (trivial factors dropped)."""
    factors = [f for m in mods for f in m.factors]
    if not factors:
        return trivial_module(mods[0].H)
    if len(factors) == 1:
        return factors[0]
    H = mods[0].H
    cache = H._cache.setdefault("tensor", {})
    key = tuple(id(f) for f in factors)
    hit = cache.get(key)
    if hit is not None:
        return hit[0]
    left = factors[0]
    right = tensor(*factors[1:])

    def m(g):
        out = ExactMatrix.zeros(H.field, left.dim * right.dim, left.dim * right.dim)
        for (i, j), c in sorted(H.comult[g].items()):
            out = out + left.act(i).kron(right.act(j)).scale(c)
        return out

    mod = ModuleRep(H, left.dim * right.dim, lambda: _gens_from(H, m), "", factors=factors)
    mod.name = mod.key
    # keep the factors alive so that id() keys stay valid
    cache[key] = (mod, factors)
    return mod


def dual(V: ModuleRep) -> ModuleRep:
    """``(x . phi)(v) = phi(S(x) v)`` on the dual basis."""
    if V.dual_of is not None:
        raise RepError("double duals are not formed; use the pivotal identification")
    if not V.factors:
        return V
    cached = V._act.get("dual")
    if cached is not None:
        return cached
    H = V.H
    D = ModuleRep(H, V.dim, _gens_from(H, lambda g: V.act_elem(H.S(H.basis(g))).T), V.name + "*", dual_of=V)
    V._act["dual"] = D
    return D


def identity(V: ModuleRep) -> Morphism:
    return Morphism(V, V, ExactMatrix.identity(V.H.field, V.dim))


# -- braiding, twist, dualities ---------------------------------------------------
def _r_terms(H: HopfData, inverse_r=False):
    R = H.r_matrix_inv if inverse_r else H.r_matrix
    return sorted(R.items())


def _cached(kind):
    """Memoize a structure morphism per Hopf algebra and module keys."""

    def wrap(fn):
        def call(*mods):
            cache = mods[0].H._cache.setdefault("morphisms", {})
            key = (kind,) + tuple(m.key for m in mods)
            hit = cache.get(key)
            if hit is None:
                hit = cache[key] = fn(*mods)
            return hit

        call.__name__ = fn.__name__
        call.__doc__ = fn.__doc__
        return call

    return wrap


@_cached("c")
def braiding(V: ModuleRep, W: ModuleRep) -> Morphism:
    """``c(v (x) w) = R'' w (x) R' v``."""
    H = V.H
    f = H.field
    dv, dw = V.dim, W.dim
    acc = ExactMatrix.zeros(f, dv * dw, dv * dw)
    for (a, b), c in _r_terms(H):
        acc = acc + V.act(a).kron(W.act(b)).scale(c)
    # swap v (x) w -> w (x) v
    swap = ExactMatrix(f, dw * dv, dv * dw, {k * dv + j: {j * dw + k: f.one} for j in range(dv) for k in range(dw)})
    return Morphism(tensor(V, W), tensor(W, V), swap @ acc)


@_cached("c-")
def braiding_inv(V: ModuleRep, W: ModuleRep) -> Morphism:
    """Inverse of ``braiding(V, W)``: ``w (x) v -> R^-1 (v (x) w)``."""
    H = V.H
    f = H.field
    dv, dw = V.dim, W.dim
    acc = ExactMatrix.zeros(f, dv * dw, dv * dw)
    for (a, b), c in _r_terms(H, inverse_r=True):
        acc = acc + V.act(a).kron(W.act(b)).scale(c)
    swap = ExactMatrix(f, dv * dw, dw * dv, {j * dw + k: {k * dv + j: f.one} for j in range(dv) for k in range(dw)})
    return Morphism(tensor(W, V), tensor(V, W), acc @ swap)


@_cached("theta")
def twist(V: ModuleRep) -> Morphism:
    """``theta_V`` = action of the inverse ribbon element."""
    return Morphism(V, V, V.act_elem(V.H.ribbon_v_inv))


@_cached("theta-")
def twist_inv(V: ModuleRep) -> Morphism:
    return Morphism(V, V, V.act_elem(V.H.ribbon_v))


def duality(kind: str, V: ModuleRep) -> Morphism:
    """Duality morphisms of the pivotal structure.

    ``ev_l(phi (x) v) = phi(v)``, ``coev_l(1) = sum v_i (x) phi^i``,
    ``ev_r(v (x) phi) = phi(g v)``, ``coev_r(1) = sum phi^i (x) g^-1 v_i``.
    """
    H = V.H
    f = H.field
    n = V.dim
    one = trivial_module(H)
    D = dual(V)
    if kind == "ev_l":
        m = ExactMatrix(f, 1, n * n, {0: {i * n + i: f.one for i in range(n)}})
        return Morphism(tensor(D, V), one, m)
    if kind == "coev_l":
        m = ExactMatrix(f, n * n, 1, {i * n + i: {0: f.one} for i in range(n)})
        return Morphism(one, tensor(V, D), m)
    if kind == "ev_r":
        G = V.act_elem(H.pivotal_g)
        row = {j * n + i: v for i, j, v in G.entries}
        return Morphism(tensor(V, D), one, ExactMatrix(f, 1, n * n, {0: row} if row else {}))
    if kind == "coev_r":
        G = V.act_elem(H.pivotal_g_inv)
        rows = {i * n + l: {0: v} for l, i, v in G.entries}
        return Morphism(one, tensor(D, V), ExactMatrix(f, n * n, 1, rows))
    raise RepError(f"unknown duality kind {kind!r}")


# -- hom spaces ------------------------------------------------------------------
def hom_space(V: ModuleRep, W: ModuleRep) -> list:
    """Basis of ``Hom_H(V, W)``: nullspace of ``rho_W(g) f - f rho_V(g)`` over generators."""
    H = V.H
    f = H.field
    dv, dw = V.dim, W.dim
    ent: dict = {}
    row0 = 0
    for g in H.check_generators():
        A = W.act(g)
        B = V.act(g)
        # row (i, j): sum_k A[i,k] f[k,j] - sum_k f[i,k] B[k,j]
        for i, arow in A.rows.items():
            for k, a in arow.items():
                for j in range(dv):
                    key = (row0 + i * dv + j, k * dv + j)
                    ent[key] = ent[key] + a if key in ent else a
        for k, brow in B.rows.items():
            for j, b in brow.items():
                for i in range(dw):
                    key = (row0 + i * dv + j, i * dv + k)
                    ent[key] = ent[key] - b if key in ent else -b
        row0 += dw * dv
    M = ExactMatrix.from_entries(f, row0, dw * dv, ((i, j, v) for (i, j), v in ent.items()))
    out = []
    for vec in nullspace(M):
        rows: dict = {}
        for idx, v in vec.items():
            i, j = divmod(idx, dv)
            rows.setdefault(i, {})[j] = v
        out.append(Morphism(V, W, ExactMatrix(f, dw, dv, rows)))
    return out


def is_intertwiner(phi: Morphism) -> bool:
    V, W = phi.source, phi.target
    return all(W.act(g) @ phi.matrix == phi.matrix @ V.act(g) for g in V.H.check_generators())


def check_module(V: ModuleRep) -> bool:
    """``rho(e_g) rho(e_j) = rho(e_g e_j)`` for generators g and all basis j."""
    H = V.H
    for g in H.check_generators():
        for j in range(H.dim):
            if V.act(g) @ V.act(j) != V.act_elem(H.prod[g][j]):
                return False
    return True


def h_endomorphism(P1: ModuleRep) -> Morphism:
    """The nilpotent endomorphism ``b0 -> a0`` of P1 (zero on the other basis vectors)."""
    f = P1.H.field
    m = ExactMatrix(f, P1.dim, P1.dim, {0: {P1.dim - 1: f.one}})
    return Morphism(P1, P1, m)


# -- modified trace --------------------------------------------------------------
def find_retract(P: ModuleRep):
    """Find ``iota: P -> H`` and ``pi: H -> P`` with ``pi iota = id_P``.

    Pairs of Hom-space basis vectors are scanned in order; the first pair whose
    composite is invertible is normalised by that inverse.
    """
    H = P.H
    cache = H._cache.setdefault("retracts", {})
    if P.key in cache:
        return cache[P.key]
    reg = standard_modules(H)["regular"]
    ins = hom_space(P, reg)
    outs = hom_space(reg, P)
    for iota in ins:
        for pi in outs:
            comp = (pi @ iota).matrix
            try:
                cinv = inverse(comp)
            except LinalgError:
                continue
            res = (iota, Morphism(reg, P, cinv @ pi.matrix))
            cache[P.key] = res
            return res
    raise RepError(f"{P.key} is not a retract of the regular representation")


def _t_regular(H: HopfData, m: ExactMatrix):
    """``lambda(g f(1))`` for an endomorphism matrix ``m`` of the regular module."""
    u = H.unit_index()
    f1 = {i: m[i, u] for i in range(H.dim) if m[i, u]}
    return H.lam(H.mul(H.pivotal_g, f1))


def modified_trace(phi: Morphism) -> CycloNum:
    """Modified trace of an endomorphism of a projective module.

    Regular module: ``t(f) = lambda(g f(1))``.  ``H (x) V``: through the free
    isomorphism ``a (x) v -> a_(1) (x) a_(2) v``.  Other modules: through a
    retract into the regular module.
    """
    V = phi.source
    if V.key != phi.target.key:
        raise RepError("modified trace needs an endomorphism")
    H = V.H
    m = phi.matrix
    if V.factors and V.factors[0].name == "H" and V.factors[0].dual_of is None:
        if len(V.factors) == 1:
            return _t_regular(H, m)
        return _t_free(H, V, m)
    iota, pi = find_retract(V)
    return _t_regular(H, iota.matrix @ m @ pi.matrix)


def _t_free(H: HopfData, V: ModuleRep, m: ExactMatrix):
    """``sum_i t_H(block_ii)`` of ``Psi^-1 f Psi`` with ``Psi(a (x) v) = a_(1) (x) a_(2) v``.

    Only ``Psi(1 (x) v_i) = 1 (x) v_i`` is needed, so the blocks are read from
    ``Psi^-1 (f (1 (x) v_i))``.
    """
    rest = tensor(*V.factors[1:])
    n = rest.dim
    u = H.unit_index()
    f = H.field
    total = f.zero
    # Psi^-1(a (x) v) = a_(1) (x) S(a_(2)) v
    for i in range(n):
        col = m.col(u * n + i)
        if not col:
            continue
        elem: dict = {}
        for idx, x in col.items():
            a, w = divmod(idx, n)
            for (a1, a2), c in H.comult[a].items():
                s = H.antipode[a2]
                for sidx, sc in s.items():
                    coeff = rest.act(sidx)[i, w]
                    if coeff:
                        elem[a1] = elem.get(a1, f.zero) + x * c * sc * coeff
        elem = {k: v for k, v in elem.items() if v}
        total = total + H.lam(H.mul(H.pivotal_g, elem))
    return total


def partial_trace(phi: Morphism, X: ModuleRep, Y: ModuleRep) -> Morphism:
    """``(id_X (x) ev_r) (f (x) id_{Y*}) (id_X (x) coev_l)`` for ``f`` on ``X (x) Y``.

    Contracted directly: ``ptr(f)[x', x] = sum f[(x', y'), (x, i)] g[i, y']``.
    """
    H = X.H
    dy = Y.dim
    G = Y.act_elem(H.pivotal_g)
    zero = H.field.zero
    rows: dict = {}
    for r, row in phi.matrix.rows.items():
        xp, y = divmod(r, dy)
        for c, v in row.items():
            x, i = divmod(c, dy)
            gv = G[i, y]
            if gv:
                acc = rows.setdefault(xp, {})
                acc[x] = acc.get(x, zero) + v * gv
    return Morphism(X, X, ExactMatrix(H.field, X.dim, X.dim, _prune(rows)))


def partial_trace_categorical(phi: Morphism, X: ModuleRep, Y: ModuleRep) -> Morphism:
    """The same map composed literally from the duality morphisms (reference)."""
    idX = identity(X)
    Ys = dual(Y)
    return idX.tensor(duality("ev_r", Y)) @ phi.tensor(identity(Ys)) @ idX.tensor(duality("coev_l", Y))


def normalize_trace(P1: ModuleRep):
    """Return ``(eta1, eps1, c)`` with ``t_{P1}(eta1 eps1) = 1`` and ``eps1`` unscaled.

    ``eps1`` spans ``Hom(P1, 1)`` and ``eta1`` spans ``Hom(1, P1)``; ``c`` is the
    factor applied to the raw ``eta1``.
    """
    H = P1.H
    one = trivial_module(H)
    (eps1,) = hom_space(P1, one)
    (eta1,) = hom_space(one, P1)
    t = modified_trace(eta1 @ eps1)
    if t.is_zero():
        raise RepError("modified trace of eta1 eps1 vanishes")
    c = t.inv()
    return eta1.scale(c), eps1, c


def random_endomorphism(V: ModuleRep, seed: int = 0, terms: int = 3) -> Morphism:
    """A deterministic pseudo-random element of ``End_H(V)`` for ``V = H (x) ... (x) H``.

    Built from right multiplications on each factor, braidings and twists.
    """
    H = V.H
    rng = random.Random(seed)
    f = H.field
    acc = ExactMatrix.zeros(f, V.dim, V.dim)
    for _ in range(terms):
        m = ExactMatrix.identity(f, 1)
        for fac in V.factors:
            if fac.name != "H":
                raise RepError("random_endomorphism expects tensor powers of H")
            y = {rng.randrange(H.dim): f.from_int(rng.randint(1, 3)), rng.randrange(H.dim): f.one}
            m = m.kron(H.right_matrix(y))
        if len(V.factors) == 2 and rng.random() < 0.7:
            A, B = V.factors
            c = braiding(B, A).matrix @ braiding(A, B).matrix
            m = m @ c
        if rng.random() < 0.5:
            m = m @ twist(V).matrix
        acc = acc + m.scale(f.from_int(rng.randint(-2, 2) or 1))
    return Morphism(V, V, acc)
