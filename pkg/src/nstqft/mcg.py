"""Coend operators and mapping class group representations.

The coend of ``H``-mod is the coadjoint module ``L`` on ``H*``.  Every coend
operator is obtained from a dinatural family evaluated at the regular module:
``f_C(alpha) = alpha_(H..H) o ((id (x) eta)^n (x) id_W)``, where the family is
given as a slice program on strands ``H*, H, ...``.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .cyclo import CycloNum
from .hopf import HopfData, small_qsl2
from .matrix import ExactMatrix, inverse, min_poly, poly_derivative, poly_gcd, rref
from .rep import (
    ModuleRep,
    Morphism,
    braiding,
    braiding_inv,
    dual,
    hom_space,
    identity,
    is_intertwiner,
    standard_modules,
    tensor,
    trivial_module,
    twist,
)
from .tangle.engine import StateBatch, run_program

__all__ = [
    "MCGError",
    "DinaturalFamily",
    "CoendOps",
    "MCGRep",
    "coend_inclusion",
    "coend_j",
    "from_dinatural_at_H",
    "coend_operators",
    "radford_copairing",
    "nested_copairing",
    "hom_basis",
    "braid_generator",
    "lyu_rep",
    "rhoX_rep",
    "intertwiner_phi",
    "proportional",
    "infinite_order_witness",
    "sl2z_report",
]


class MCGError(ValueError):
    code = "mcg"


# -- coend structure maps ------------------------------------------------------------
def coend_inclusion(V: ModuleRep, L: ModuleRep | None = None) -> Morphism:
    """``i_V : V* (x) V -> L``, ``i_V(phi (x) v)(x) = phi(x . v)``."""
    H = V.H
    L = L or standard_modules(H)["coadjoint"]
    n = V.dim
    ent = []
    for k in range(H.dim):
        for i, j, c in V.act(k).entries:
            ent.append((k, i * n + j, c))
    m = ExactMatrix.from_entries(H.field, H.dim, n * n, ent)
    return Morphism(tensor(dual(V), V), L, m)


def coend_j(V: ModuleRep) -> Morphism:
    """``j_V : ad -> V (x) V*``, ``j_V(x) = sum (x . v_i) (x) phi^i``."""
    H = V.H
    ad = standard_modules(H)["adjoint"]
    n = V.dim
    ent = []
    for k in range(H.dim):
        for a, i, c in V.act(k).entries:
            ent.append((a * n + i, k, c))
    return Morphism(ad, tensor(V, dual(V)), ExactMatrix.from_entries(H.field, n * n, H.dim, ent))


@dataclass
class DinaturalFamily:
    """Component at ``X_1 = .. = X_n = H`` of a dinatural family.

    ``steps`` is a slice program ``(pos, k, matrix, out_dims)`` on the strands
    ``left, (H*, H) * n, right``; it must end on the strands of ``target``.
    """

    n: int
    target: ModuleRep
    steps: list
    left: ModuleRep | None = None
    right: ModuleRep | None = None


def from_dinatural_at_H(family, shape=None, check: bool = True) -> Morphism:
    """``f_C(alpha) = alpha_(H..H) o ((id_H* (x) eta)^n (x) id_W)``.

    ``family`` is a :class:`DinaturalFamily`, or a :class:`Morphism` out of
    ``left (x) (H* (x) H)^n (x) right`` with ``shape = (n, left, right)``.
    """
    if isinstance(family, Morphism):
        n, left, right = shape if shape is not None else (1, None, None)
        fam = family
        H = fam.source.H
        src_dims = [fam.source.dim]
        family = DinaturalFamily(n, fam.target, [(0, 1, fam.matrix, [fam.target.dim])], left, right)
        flat = True
    else:
        H = family.target.H
        flat = False
    n = family.n
    f = H.field
    u = H.unit_index()
    d = H.dim
    ld = family.left.dim if family.left is not None else 1
    rd = family.right.dim if family.right is not None else 1
    dims = ([ld] if family.left is not None else []) + [d, d] * n + ([rd] if family.right is not None else [])
    vecs = []
    for a in range(ld):
        for mid in range(d**n):
            digits = []
            x = mid
            for _ in range(n):
                x, dig = divmod(x, d)
                digits.append(dig)
            digits.reverse()
            for b in range(rd):
                idx = a
                for dig in digits:
                    idx = (idx * d + dig) * d + u
                idx = idx * rd + b
                vecs.append({idx: f.one})
    if flat:
        batch = StateBatch.from_vectors(f, src_dims, vecs)
    else:
        batch = StateBatch.from_vectors(f, dims, vecs)
    batch = run_program(batch, family.steps)
    m = batch.to_matrix()
    L = standard_modules(H)["coadjoint"]
    parts = ([family.left] if family.left is not None else []) + [L] * n
    parts += [family.right] if family.right is not None else []
    src = tensor(*parts) if parts else trivial_module(H)
    out = Morphism(src, family.target, m)
    if check and not is_intertwiner(out):
        raise MCGError("f_C of the family is not H-linear; the family is malformed")
    return out


def _counit_row(H: HopfData) -> ExactMatrix:
    """``eps_bar(phi) = phi(1)`` as a 1 x dim matrix."""
    return ExactMatrix(H.field, 1, H.dim, {0: {i: c for i, c in H.unit.items()}})


def _lambda_col(H: HopfData) -> ExactMatrix:
    """``Lambda(1) = lambda`` in the dual basis."""
    return ExactMatrix(H.field, H.dim, 1, {i: {0: c} for i, c in H.integral_lambda.items() if c})


@dataclass
class CoendOps:
    H: HopfData
    L: ModuleRep
    T_op: Morphism
    S_op: Morphism
    Omega: Morphism
    integral_Lambda: Morphism
    counit: Morphism
    copairing_R: Morphism
    _cache: dict = dc_field(default_factory=dict, repr=False)

    @property
    def T_inv(self) -> Morphism:
        if "Tinv" not in self._cache:
            self._cache["Tinv"] = Morphism(self.L, self.L, inverse(self.T_op.matrix))
        return self._cache["Tinv"]

    def Omega_L(self, X: ModuleRep) -> Morphism:
        """Left partial monodromy on ``X (x) L``."""
        key = ("OL", X.key)
        if key not in self._cache:
            H = self.H
            Hm = standard_modules(H)["regular"]
            Hs = dual(Hm)
            d = H.dim
            steps = [
                (0, 2, braiding(X, Hs).matrix, [d, X.dim]),
                (0, 2, braiding(Hs, X).matrix, [X.dim, d]),
                (1, 2, coend_inclusion(Hm).matrix, [d]),
            ]
            fam = DinaturalFamily(1, tensor(X, self.L), steps, left=X)
            self._cache[key] = from_dinatural_at_H(fam)
        return self._cache[key]

    def Omega_R(self, Y: ModuleRep) -> Morphism:
        """Right partial monodromy on ``L (x) Y``."""
        key = ("OR", Y.key)
        if key not in self._cache:
            H = self.H
            Hm = standard_modules(H)["regular"]
            d = H.dim
            steps = [
                (1, 2, braiding(Hm, Y).matrix, [Y.dim, d]),
                (1, 2, braiding(Y, Hm).matrix, [d, Y.dim]),
                (0, 2, coend_inclusion(Hm).matrix, [d]),
            ]
            fam = DinaturalFamily(1, tensor(self.L, Y), steps, right=Y)
            self._cache[key] = from_dinatural_at_H(fam)
        return self._cache[key]

    @property
    def H_op(self) -> Morphism:
        """``Omega o (T (x) T)``."""
        if "H" not in self._cache:
            self._cache["H"] = self.Omega @ self.T_op.tensor(self.T_op)
        return self._cache["H"]

    def H_L(self, X: ModuleRep) -> Morphism:
        """``Omega_L,X o (theta_X (x) T)``."""
        return self.Omega_L(X) @ twist(X).tensor(self.T_op)

    def H_R(self, Y: ModuleRep) -> Morphism:
        """``Omega_R,Y o (T (x) theta_Y)``."""
        return self.Omega_R(Y) @ self.T_op.tensor(twist(Y))


def coend_operators(H: HopfData | int) -> CoendOps:
    if isinstance(H, int):
        H = small_qsl2(H)
    if "coend_ops" in H._cache:
        return H._cache["coend_ops"]
    std = standard_modules(H)
    L = std["coadjoint"]
    Hm = std["regular"]
    Hs = dual(Hm)
    d = H.dim
    one = trivial_module(H)
    iH = coend_inclusion(Hm, L)
    # T: i_H o (id (x) theta_H)
    T = from_dinatural_at_H(iH @ identity(Hs).tensor(twist(Hm)), (1, None, None))
    # Omega: (i_H (x) i_H) o (id (x) c_{H*,H} c_{H,H*} (x) id)
    steps = [
        (1, 2, braiding(Hm, Hs).matrix, [d, d]),
        (1, 2, braiding(Hs, Hm).matrix, [d, d]),
        (0, 2, iH.matrix, [d]),
        (1, 2, iH.matrix, [d]),
    ]
    Omega = from_dinatural_at_H(DinaturalFamily(2, tensor(L, L), steps))
    Lam = Morphism(one, L, _lambda_col(H))
    eps = Morphism(L, one, _counit_row(H))
    # S = (eps (x) id) o Omega o (id (x) Lambda)
    S = eps.tensor(identity(L)) @ Omega @ identity(L).tensor(Lam)
    ops = CoendOps(H, L, T, S, Omega, Lam, eps, radford_copairing(H))
    H._cache["coend_ops"] = ops
    return ops


# -- Radford copairing ---------------------------------------------------------------
def radford_copairing(H: HopfData) -> Morphism:
    """``R(1)(x (x) y) = lambda(x y)`` as a vector in ``L (x) L``.

    With the coadjoint action on each factor and ``Delta`` acting left to
    right, this is the invariant copairing; ``lambda(y x)`` is not H-linear.
    """
    L = standard_modules(H)["coadjoint"]
    d = H.dim
    B = H.lambda_form_matrix()  # B[i, j] = lambda(e_i e_j)
    rows = {}
    for i, j, c in B.entries:
        rows[i * d + j] = {0: c}
    return Morphism(trivial_module(H), tensor(L, L), ExactMatrix(H.field, d * d, 1, rows))


def nested_copairing(H: HopfData, n: int) -> Morphism:
    """``R^(n) = (id (x) R^(n-1) (x) id) o R``, a vector in ``L^n (x) L^n``."""
    one = trivial_module(H)
    if n == 0:
        return identity(one)
    L = standard_modules(H)["coadjoint"]
    d = H.dim
    R1 = radford_copairing(H).matrix
    inner = nested_copairing(H, n - 1).matrix
    w = d ** (2 * n - 2)
    rows = {}
    for a, _, c in R1.entries:
        i, j = divmod(a, d)
        for b, _, e in inner.entries:
            rows[(i * w + b) * d + j] = {0: c * e}
    return Morphism(one, tensor(*([L] * (2 * n))), ExactMatrix(H.field, d ** (2 * n), 1, rows))


# -- hom-space bases with coordinates ------------------------------------------------
class HomBasis:
    """A deterministic basis of ``Hom_H(V, W)`` with a coordinate map."""

    def __init__(self, V: ModuleRep, W: ModuleRep):
        self.source = V
        self.target = W
        self.basis = hom_space(V, W)
        f = V.H.field
        vecs = [self._flat(b.matrix) for b in self.basis]
        self.dim = len(vecs)
        if self.dim == 0:
            self.pos = []
            self._inv = None
            return
        M = ExactMatrix.from_row_vectors(f, V.dim * W.dim, vecs)
        pivots, _ = rref(M)
        self.pos = list(pivots)
        sub = ExactMatrix.from_dense(f, [[v.get(p, f.zero) for v in vecs] for p in self.pos])
        self._inv = inverse(sub)
        self._vecs = vecs

    def _flat(self, m: ExactMatrix) -> dict:
        nc = m.ncols
        return {i * nc + j: v for i, j, v in m.entries}

    def coords(self, phi: Morphism) -> list:
        f = self.source.H.field
        v = self._flat(phi.matrix)
        rhs = ExactMatrix.from_dense(f, [[v.get(p, f.zero)] for p in self.pos])
        c = (self._inv @ rhs).col(0)
        coords = [c.get(k, f.zero) for k in range(self.dim)]
        # verify membership
        acc: dict = {}
        for ck, bv in zip(coords, self._vecs):
            if ck:
                for idx, x in bv.items():
                    acc[idx] = acc.get(idx, f.zero) + ck * x
        acc = {k: x for k, x in acc.items() if x}
        if acc != v:
            raise MCGError("image is not in the span of the hom basis")
        return coords

    def matrix_of(self, fn, into: "HomBasis | None" = None) -> ExactMatrix:
        """Matrix of the linear map ``fn`` from this space to ``into`` (default: itself).

        Column k holds the coordinates of ``fn(basis[k])``.
        """
        into = into or self
        f = self.source.H.field
        cols = []
        for b in self.basis:
            cs = into.coords(fn(b))
            cols.append({k: c for k, c in enumerate(cs) if c})
        return ExactMatrix.from_columns(f, into.dim, cols)


def hom_basis(V: ModuleRep, W: ModuleRep) -> HomBasis:
    H = V.H
    cache = H._cache.setdefault("hom_basis", {})
    key = (V.key, W.key)
    if key not in cache:
        cache[key] = HomBasis(V, W)
    return cache[key]


# -- braid group generators ----------------------------------------------------------
def _braid_word(mods: list, word) -> Morphism:
    """``F_C`` of a braid word; letters ``(k, +1)`` = ``c`` on positions k, k+1."""
    cur = list(mods)
    out = identity(tensor(*cur))
    for k, sgn in word:
        a, b = cur[k], cur[k + 1]
        c = braiding(a, b) if sgn > 0 else braiding_inv(b, a)
        left = identity(tensor(*cur[:k])) if k else None
        right = identity(tensor(*cur[k + 2 :])) if k + 2 < len(cur) else None
        step = c
        if left is not None:
            step = left.tensor(step)
        if right is not None:
            step = step.tensor(right)
        out = step @ out
        cur[k], cur[k + 1] = b, a
    return out


def braid_generator(mods: list, name: str, i: int, j: int | None = None) -> Morphism:
    """``F_C`` of ``x_{i,j}``, ``w_{i,j}`` or ``v_i`` (1-based indices) on ``V_1 (x) .. (x) V_m``.

    ``x_{i,j}``: strand i passes over to position j and strand j returns to i,
    ``(s_i .. s_{j-2}) s_{j-1} (s_{j-2}^-1 .. s_i^-1)``.  ``w_{i,j}``: the pure
    braid ``(s_{j-1} .. s_{i+1}) s_i^2 (s_{i+1}^-1 .. s_{j-1}^-1)``.  ``v_i``:
    the twist on strand i.
    """
    m = len(mods)
    if name == "v":
        parts = [twist(V) if k == i - 1 else identity(V) for k, V in enumerate(mods)]
        out = parts[0]
        for p in parts[1:]:
            out = out.tensor(p)
        return out
    a, b = i - 1, j - 1
    if not (0 <= a < b < m):
        raise MCGError(f"bad strand pair ({i}, {j})")
    if name == "x":
        if mods[a].key != mods[b].key:
            raise MCGError("x_{i,j} needs equal labels")
        word = [(k, 1) for k in range(a, b - 1)] + [(b - 1, 1)] + [(k, -1) for k in range(b - 2, a - 1, -1)]
        return _braid_word(mods, word)
    if name == "w":
        word = [(k, 1) for k in range(b - 1, a, -1)] + [(a, 1), (a, 1)] + [(k, -1) for k in range(a + 1, b)]
        return _braid_word(mods, word)
    raise MCGError(f"unknown braid generator {name!r}")


# -- representations -----------------------------------------------------------------
@dataclass
class MCGRep:
    genus: int
    labels: list
    side: str
    basis: HomBasis
    generator_matrices: list  # [(name, ExactMatrix)]

    def matrix(self, name: str) -> ExactMatrix:
        for k, m in self.generator_matrices:
            if k == name:
                return m
        raise KeyError(name)

    @property
    def names(self) -> list:
        return [k for k, _ in self.generator_matrices]


def _generator_names(g: int, labels: list) -> list:
    m = len(labels)
    names = []
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            if labels[i - 1] == labels[j - 1]:
                names.append(f"x{i},{j}")
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            names.append(f"w{i},{j}")
    names += [f"v{i}" for i in range(1, m + 1)]
    names += [f"H{k}" for k in range(2, g + 1)]
    names += [f"S{j}" for j in range(1, g + 1)]
    names += [f"T{j}" for j in range(1, g + 1)]
    names += [f"H{i},{j}" for i in range(1, m + 1) for j in range(1, g + 1)]
    return names


def _ids(mods) -> Morphism | None:
    mods = [m for m in mods]
    if not mods:
        return None
    return identity(tensor(*mods))


def _sandwich(left_mods, op: Morphism, right_mods) -> Morphism:
    out = op
    lft = _ids(left_mods)
    rgt = _ids(right_mods)
    if lft is not None:
        out = lft.tensor(out)
    if rgt is not None:
        out = out.tensor(rgt)
    return out


def _resolve(H: HopfData, labels) -> list:
    from .rep import module_by_name

    return [module_by_name(H, x) if isinstance(x, str) else x for x in labels]


def _multi_coev(H: HopfData, Ws: list):
    """``coev_l`` of ``W = W_1 (x) .. (x) W_k`` into ``W (x) (W_k* (x) .. (x) W_1*)``."""
    W = tensor(*Ws)
    Ds = [dual(w) for w in reversed(Ws)]
    Wd = tensor(*Ds)
    dims = [w.dim for w in Ws]
    rows = {}
    for idx in range(W.dim):
        digits = []
        x = idx
        for dmm in reversed(dims):
            x, r = divmod(x, dmm)
            digits.append(r)
        # digits are now W_k .. W_1 order
        didx = 0
        for dmm, r in zip(reversed(dims), digits):
            didx = didx * dmm + r
        rows[idx * W.dim + didx] = {0: H.field.one}
    coev = Morphism(trivial_module(H), tensor(W, Wd), ExactMatrix(H.field, W.dim * W.dim, 1, rows))
    ev_rows = {0: {didx_idx: H.field.one for didx_idx in _ev_pairs(dims, W.dim)}}
    ev = Morphism(tensor(Wd, W), trivial_module(H), ExactMatrix(H.field, 1, W.dim * W.dim, ev_rows))
    return coev, ev, Wd


def _ev_pairs(dims, n):
    out = []
    for idx in range(n):
        digits = []
        x = idx
        for dmm in reversed(dims):
            x, r = divmod(x, dmm)
            digits.append(r)
        didx = 0
        for dmm, r in zip(reversed(dims), digits):
            didx = didx * dmm + r
        out.append(didx * n + idx)
    return out


def lyu_rep(H: HopfData | int, g: int, labels=()) -> MCGRep:
    """Lyubashenko's action on ``C(V_1 (x) .. (x) V_m, L^g)`` (projective)."""
    if isinstance(H, int):
        H = small_qsl2(H)
    ops = coend_operators(H)
    L = ops.L
    mods = _resolve(H, labels)
    src = tensor(*mods) if mods else trivial_module(H)
    tgt = tensor(*([L] * g)) if g else trivial_module(H)
    hb = hom_basis(src, tgt)
    if hb.dim == 0:
        raise MCGError("the representation space is zero")
    gens = []
    names = [str(x) if isinstance(x, str) else x.key for x in labels]
    for name in _generator_names(g, names):
        if name[0] in "xwv":
            kind = name[0]
            ij = [int(t) for t in name[1:].split(",")]
            F = braid_generator(mods, kind, *ij)
            Finv = Morphism(F.target, F.source, inverse(F.matrix))
            mat = hb.matrix_of(lambda ell, Finv=Finv: ell @ Finv)
        elif name[0] in "ST":
            j = int(name[1:])
            op = ops.S_op if name[0] == "S" else ops.T_op
            post = _sandwich([L] * (g - j), op, [L] * (j - 1))
            mat = hb.matrix_of(lambda ell, post=post: post @ ell)
        elif "," not in name:
            k = int(name[1:])
            post = _sandwich([L] * (g - k), ops.H_op, [L] * (k - 2))
            mat = hb.matrix_of(lambda ell, post=post: post @ ell)
        else:
            i, j = (int(t) for t in name[1:].split(","))
            mat = hb.matrix_of(lambda ell, i=i, j=j: _lyu_Hij(ops, mods, g, i, j, ell))
        gens.append((name, mat))
    return MCGRep(g, names, "lyu", hb, gens)


def _lyu_Hij(ops: CoendOps, mods, g, i, j, ell: Morphism) -> Morphism:
    """``eviso_W((id_{L^{g-j}} (x) H_R,Y) o coeviso_W(ell))`` with ``W = V_i..V_m``."""
    H = ops.H
    L = ops.L
    Ws = mods[i - 1 :]
    X = tensor(*mods[: i - 1]) if i > 1 else trivial_module(H)
    coev, ev, Wd = _multi_coev(H, Ws)
    tgt = ell.target
    # coeviso: (ell (x) id_W*) o (id_X (x) coev_W)
    a = identity(X).tensor(coev) if X.factors else coev
    b = ell.tensor(identity(Wd))
    ce = b @ a
    Y = tensor(*([L] * (j - 1) + [Wd]))
    HR = ops.H_R(Y)
    post = _sandwich([L] * (g - j), HR, [])
    k = post @ ce
    # eviso: (id_{L^g} (x) ev_W) o (k (x) id_W)
    W = tensor(*Ws)
    ev_part = identity(tgt).tensor(ev) if tgt.factors else ev
    return ev_part @ k.tensor(identity(W))


def rhoX_rep(H: HopfData | int, g: int, labels=()) -> MCGRep:
    """The TQFT action on ``C(V_1 (x) .. (x) V_m (x) L^g, 1)`` with scalars dropped."""
    if isinstance(H, int):
        H = small_qsl2(H)
    ops = coend_operators(H)
    L = ops.L
    mods = _resolve(H, labels)
    src = tensor(*(mods + [L] * g)) if (mods or g) else trivial_module(H)
    hb = hom_basis(src, trivial_module(H))
    if hb.dim == 0:
        raise MCGError("the representation space is zero")
    names = [str(x) if isinstance(x, str) else x.key for x in labels]
    gens = []
    for name in _generator_names(g, names):
        if name[0] in "xwv":
            kind = name[0]
            ij = [int(t) for t in name[1:].split(",")]
            F = braid_generator(mods, kind, *ij)
            Finv = Morphism(F.target, F.source, inverse(F.matrix))
            pre = _sandwich([], Finv, [L] * g)
        elif name[0] in "ST":
            j = int(name[1:])
            op = ops.S_op if name[0] == "S" else ops.T_op
            pre = _sandwich(mods + [L] * (j - 1), op, [L] * (g - j))
        elif "," not in name:
            k = int(name[1:])
            pre = _sandwich(mods + [L] * (k - 2), ops.H_op, [L] * (g - k))
        else:
            i, j = (int(t) for t in name[1:].split(","))
            X = tensor(*(mods[i - 1 :] + [L] * (j - 1)))
            pre = _sandwich(mods[: i - 1], ops.H_L(X), [L] * (g - j))
        mat = hb.matrix_of(lambda x, pre=pre: x @ pre)
        gens.append((name, mat))
    return MCGRep(g, names, "rhoX", hb, gens)


def intertwiner_phi(H: HopfData | int, g: int, labels=()) -> ExactMatrix:
    """Matrix of ``x' -> (x' (x) id_{L^g}) o (id_V (x) R^(g))`` between the two hom bases."""
    if isinstance(H, int):
        H = small_qsl2(H)
    L = coend_operators(H).L
    mods = _resolve(H, labels)
    src = tensor(*mods) if mods else trivial_module(H)
    tgt = tensor(*([L] * g)) if g else trivial_module(H)
    hx = hom_basis(tensor(*(mods + [L] * g)) if (mods or g) else trivial_module(H), trivial_module(H))
    hl = hom_basis(src, tgt)
    d = H.dim
    w = d**g
    Rg = nested_copairing(H, g).matrix
    # Rm[a, b]: first g factors a, last g factors b
    Rm_rows: dict = {}
    for idx, _, c in Rg.entries:
        a, b = divmod(idx, w)
        Rm_rows.setdefault(a, {})[b] = c
    Rm = ExactMatrix(H.field, w, w, Rm_rows)
    dv = src.dim

    def phi(xp: Morphism) -> Morphism:
        rows = {}
        for _, idx, c in xp.matrix.entries:
            v, a = divmod(idx, w)
            rows.setdefault(v, {})[a] = c
        X = ExactMatrix(H.field, dv, w, rows)
        return Morphism(src, tgt, (X @ Rm).T)

    return hx.matrix_of(phi, into=hl)


# -- projective comparisons ----------------------------------------------------------
@dataclass
class Proportionality:
    scalar: CycloNum | None
    witness: tuple | None = None

    def __bool__(self):
        return self.scalar is not None


def proportional(A: ExactMatrix, B: ExactMatrix) -> Proportionality:
    """Return ``c`` with ``A = c B`` or a witness entry ``(i, j)`` where it fails."""
    if A.shape != B.shape:
        raise ValueError("shape mismatch")
    f = A.field
    if B.is_zero():
        if A.is_zero():
            return Proportionality(f.one)
        i, j, _ = A.entries[0]
        return Proportionality(None, (i, j))
    i0, j0, b0 = B.entries[0]
    c = A[i0, j0] / b0
    if c.is_zero():
        return Proportionality(None, (i0, j0))
    keys = sorted(set((i, j) for i, j, _ in A.entries) | set((i, j) for i, j, _ in B.entries))
    for i, j in keys:
        if A[i, j] != c * B[i, j]:
            return Proportionality(None, (i, j))
    return Proportionality(c)


@dataclass
class InfiniteOrderReport:
    min_poly: list
    repeated_root: bool
    bound: int
    proportional_powers: list  # k <= bound with A^k proportional to id

    @property
    def certified(self) -> bool:
        return self.repeated_root and not self.proportional_powers


def infinite_order_witness(A: ExactMatrix, bound: int) -> InfiniteOrderReport:
    """Repeated root of the minimal polynomial and projective non-periodicity up to ``bound``.

    A repeated root means ``A`` is not diagonalizable, so no power of ``A``
    is a scalar multiple of the identity.
    """
    mp = min_poly(A)
    g = poly_gcd(mp, poly_derivative(mp))
    repeated = len(g) > 1
    I = ExactMatrix.identity(A.field, A.nrows)
    hits = []
    P = I
    for k in range(1, bound + 1):
        P = P @ A
        if proportional(P, I):
            hits.append(k)
    return InfiniteOrderReport(mp, repeated, bound, hits)


def sl2z_report(S: ExactMatrix, T: ExactMatrix) -> dict:
    """Check ``(ST)^3 ~ S^2`` and ``S^4 ~ id``; return the scalars (or None)."""
    I = ExactMatrix.identity(S.field, S.nrows)
    ST = S @ T
    S2 = S @ S
    a = proportional((ST @ ST) @ ST, S2)
    b = proportional(S2 @ S2, I)
    return {"(ST)^3 ~ S^2": a.scalar, "S^4 ~ id": b.scalar}
