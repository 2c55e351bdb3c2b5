"""Verification suites shared by ``nstqft verify`` and the acceptance tests.

Every check returns a :class:`Check` with a deterministic detail string, so a
report rendered twice from scratch is byte-identical.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .hopf import (
    HopfData,
    delta_closed_forms,
    drinfeld_map,
    drinfeld_map_inv,
    drinfeld_map_inv_closed_form,
    dump_structure,
    integral_checks,
    load_structure,
    m_matrix,
    m_matrix_closed_form,
    scale,
    small_qsl2,
    stabilization_params,
    verify_hopf_axioms,
)
from .matrix import ExactMatrix, LinalgError, rank

__all__ = ["Check", "hopf_suite", "rep_suite", "tangle_suite", "mcg_suite", "acceptance", "CRITERIA", "render"]


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        tail = f"  ({self.detail})" if self.detail else ""
        return f"{'PASS' if self.ok else 'FAIL'}  {self.suite:<8} {self.name}{tail}"


def render(checks) -> str:
    return "\n".join(c.line() for c in checks) + "\n"


def _hopf(r) -> HopfData:
    return small_qsl2(r) if isinstance(r, int) else r


def _failed(rep: dict) -> list:
    return sorted(k for k, v in rep.items() if not v)


# -- hopf ----------------------------------------------------------------------------
def corrupted_copy(H: HopfData) -> HopfData:
    """A reloaded copy of ``H`` with one antipode image and one R-matrix entry scaled by 2."""
    C = load_structure(dump_structure(H))
    i = next(k for k in range(C.dim) if len(C.antipode[k]) > 1)
    C.antipode[i] = scale(C.antipode[i], C.field.from_int(2))
    key = sorted(C.r_matrix)[1]
    C.r_matrix[key] = C.r_matrix[key] * 2
    return C


def hopf_suite(r=3, negative_control: bool = True) -> list:
    H = _hopf(r)
    tag = f"r={H.field.r}"
    out = []
    ax = verify_hopf_axioms(H)
    out.append(Check("hopf", f"axioms {tag}", not _failed(ax), f"{len(ax)} identities" + (
        f"; failed {','.join(_failed(ax))}" if _failed(ax) else "")))
    ic = integral_checks(H)
    out.append(Check("hopf", f"integrals {tag}", not _failed(ic), ",".join(sorted(ic))))
    if negative_control:
        bad = verify_hopf_axioms(corrupted_copy(H))
        out.append(Check("hopf", f"negative control {tag}", bool(_failed(bad)), "detected " + ",".join(_failed(bad))))
    out.append(Check("hopf", f"M closed form {tag}", m_matrix(H) == m_matrix_closed_form(H)))
    return out


def stabilization_suite(rs=(3, 5, 7)) -> list:
    out = []
    for r in rs:
        H = _hopf(r)
        p = stabilization_params(H)
        dm, dp, small = delta_closed_forms(H.field)
        ok = p.delta_minus == dm and p.delta_plus == dp and p.small_delta == small
        out.append(Check("hopf", f"Delta closed forms r={r}", ok, f"Delta_- = {p.delta_minus}; Delta_+ = {p.delta_plus}"))
        out.append(Check("hopf", f"zeta = r^3 r={r}", p.zeta == H.field.from_int(r**3), f"zeta = {p.zeta}"))
    return out


def drinfeld_suite(rs=(3, 5), closed_form_rs=(3,)) -> list:
    out = []
    for r in rs:
        H = _hopf(r)
        D = drinfeld_map(H)
        try:
            Dinv = drinfeld_map_inv(H)
            ok = (D @ Dinv).is_identity()
        except LinalgError:
            ok = False
        out.append(Check("hopf", f"Drinfeld map invertible r={r}", ok, f"rank {rank(D)} of {H.dim}"))
        if r in closed_form_rs and ok:
            cf = drinfeld_map_inv_closed_form(H)
            literal = drinfeld_map_inv_closed_form(H, m_power=2)
            out.append(Check(
                "hopf",
                f"closed-form D^-1 r={r}",
                cf == Dinv,
                "S^-2 on M''; literal S^2 form " + ("agrees" if literal == Dinv else "differs (see ledger)"),
            ))
    return out


# -- rep -----------------------------------------------------------------------------
def _random_combo(basis, rng):
    acc = None
    for b in basis:
        c = rng.randint(-3, 3)
        if c:
            t = b.scale(b.source.H.field.from_int(c))
            acc = t if acc is None else acc + t
    return acc if acc is not None else basis[0]


def trace_suite(r=3, samples: int = 5) -> list:
    from .rep import (
        duality,
        h_endomorphism,
        hom_space,
        is_intertwiner,
        modified_trace,
        normalize_trace,
        partial_trace,
        random_endomorphism,
        standard_modules,
        tensor,
    )

    H = _hopf(r)
    std = standard_modules(H)
    P1, reg = std["P1"], std["regular"]
    out = []
    eta1, eps1, c = normalize_trace(P1)
    t = modified_trace(eta1 @ eps1)
    out.append(Check("rep", "t_P1(eta1 eps1) = 1", t == H.field.one, f"eta1 rescaled by {c}"))
    e = (eps1 @ eta1).matrix
    out.append(Check("rep", "eps1 eta1 = 0", e.is_zero()))
    th = modified_trace(h_endomorphism(P1))
    out.append(Check("rep", "t_P1(h) != 0", not th.is_zero(), f"t_P1(h) = {th}"))
    qd = (duality("ev_r", P1) @ duality("coev_l", P1)).matrix
    out.append(Check("rep", "qdim P1 = 0", qd.is_zero()))
    rng = random.Random(7)
    # cyclicity: H (x) H endomorphisms, and P1 <-> H
    HH = tensor(reg, reg)
    cyc_ok, nonzero = True, 0
    for k in range(samples):
        f = random_endomorphism(HH, seed=2 * k + 1, terms=2)
        g = random_endomorphism(HH, seed=2 * k + 2, terms=2)
        a, b = modified_trace(f @ g), modified_trace(g @ f)
        cyc_ok &= a == b and is_intertwiner(f) and is_intertwiner(g)
        nonzero += not a.is_zero()
    ins, outs = hom_space(P1, reg), hom_space(reg, P1)
    for k in range(samples):
        x, y = _random_combo(ins, rng), _random_combo(outs, rng)
        a, b = modified_trace(x @ y), modified_trace(y @ x)
        cyc_ok &= a == b
        nonzero += not a.is_zero()
    out.append(Check("rep", "cyclicity", cyc_ok, f"{2 * samples} pairs, {nonzero} with nonzero trace"))
    pt_ok, nonzero = True, 0
    for k in range(samples):
        f = random_endomorphism(HH, seed=100 + k, terms=2)
        a = modified_trace(f)
        p = partial_trace(f, reg, reg)
        pt_ok &= a == modified_trace(p) and is_intertwiner(p)
        nonzero += not a.is_zero()
    out.append(Check("rep", "partial trace", pt_ok, f"{samples} endomorphisms of H(x)H, {nonzero} nonzero"))
    return out


def rep_suite(r=3) -> list:
    from .rep import (
        braiding,
        check_module,
        dual,
        duality,
        hom_space,
        identity,
        is_intertwiner,
        standard_modules,
        twist,
    )

    H = _hopf(r)
    std = standard_modules(H)
    out = []
    for name in sorted(std):
        out.append(Check("rep", f"module {name}", check_module(std[name])))
    P1 = std["P1"]
    out.append(Check("rep", "dim End(P1) = 2", len(hom_space(P1, P1)) == 2))
    Ps = dual(P1)
    # snake identities for the left duality
    left = identity(P1).tensor(duality("ev_l", P1)) @ duality("coev_l", P1).tensor(identity(P1))
    right = duality("ev_l", P1).tensor(identity(Ps)) @ identity(Ps).tensor(duality("coev_l", P1))
    out.append(Check("rep", "snake identities", left.matrix.is_identity() and right.matrix.is_identity()))
    c = braiding(P1, P1)
    out.append(Check("rep", "braiding and twist are H-linear", is_intertwiner(c) and is_intertwiner(twist(P1))))
    return out + trace_suite(H)


# -- tangle --------------------------------------------------------------------------
UNKNOT_H = "bottom\nslice coev(P1)\nslice coupon(h), id\nslice ev'\n"

HOPF_LINK_P1 = """bottom
slice coev(P1)
slice id, coev(P1), id
slice x+, id, id
slice x+, id, id
slice id, ev', id
slice ev'
"""

KNOT_P1_H = """bottom
slice coev(P1)
slice id, coev(P1), id
slice x+, id, id
slice x+, id, id
slice x+, id, id
slice coupon(h), id, id, id
slice id, ev', id
slice ev'
"""

RED_LINKED_P1 = """bottom red:Hv red:H^
slice id, tw+, coev(P1)
slice id, x+, id
slice id, x+, id
slice id, id, ev'
slice ev
"""


def all_cuts(ast) -> list:
    from .tangle.evaluate import PROJECTIVE_LABELS

    return [
        (lvl, pos)
        for lvl, strands in enumerate(ast.levels)
        for pos, s in enumerate(strands)
        if not s.red and s.up and s.label in PROJECTIVE_LABELS
    ]


def cut_independence(text: str, registry) -> tuple:
    from .tangle.evaluate import renorm_eval
    from .tangle.parser import parse_tangle

    ast = parse_tangle(text, registry.types)
    vals = [renorm_eval(ast, cut, registry) for cut in all_cuts(ast)]
    return all(v == vals[0] for v in vals), vals[0], len(vals)


def stabilized(text_body: str, sign: int) -> str:
    """Prepend a disjoint red unknot of framing ``sign`` to a closed blue graph."""
    lines = [ln for ln in text_body.splitlines() if ln.strip()]
    assert lines[0].strip() == "bottom"
    tw = "tw+" if sign > 0 else "tw-"
    out = ["bottom red:Hv red:H^", f"slice id, {tw}" + "".join(", " + p for p in lines[1][6:].split(", "))]
    for ln in lines[2:-1]:
        out.append("slice id, id, " + ln[6:])
    out.append("slice ev, " + lines[-1][6:])
    out.append(f"framing 1 {sign}")
    return "\n".join(out) + "\n"


def tangle_suite(r=3) -> list:
    from .rep import standard_modules, twist
    from .tangle.evaluate import CouponRegistry, evaluate_bichrome, evaluate_rt, renorm_eval
    from .tangle.surgery import linking_signature, parse_surgery, surgery_invariant

    H = _hopf(r)
    reg = CouponRegistry(H)
    p = stabilization_params(H)
    P1 = standard_modules(H)["P1"]
    out = []
    for tw, want, name in (("tw+", p.delta_plus, "O+ = Delta_+"), ("tw-", p.delta_minus, "O- = Delta_-")):
        m = evaluate_bichrome(f"bottom red:Hv red:H^\nslice id, {tw}\nslice ev\n", reg).matrix
        out.append(Check("tangle", name, m[0, 0] == want, f"{m[0, 0]}"))
    m = evaluate_bichrome("bottom red:Hv red:H^\nslice ev\n", reg).matrix
    out.append(Check("tangle", "0-framed red unknot = lambda(1) = 0", m[0, 0].is_zero()))
    m = evaluate_rt("bottom\nslice coev(P1)\nslice ev'\n", reg).matrix
    out.append(Check("tangle", "P1 loop = qdim = 0", m[0, 0].is_zero()))
    m = evaluate_rt("bottom P1^ P1^\nslice x+\nslice x-\n", reg).matrix
    out.append(Check("tangle", "x+ then x- = id", m.is_identity()))
    m = evaluate_rt("bottom P1^\nslice id, coev(P1)\nslice x+, id\nslice id, ev'\n", reg).matrix
    out.append(Check("tangle", "positive kink = theta", m == twist(P1).matrix))
    th = renorm_eval(UNKNOT_H, registry=reg)
    out.append(Check("tangle", "F'(P1 unknot with h) = t_P1(h)", th == H.field.one, f"{th}"))
    for name, text in (("Hopf link P1-P1", HOPF_LINK_P1), ("knotted P1 with h", KNOT_P1_H), ("P1 through red unknot", RED_LINKED_P1)):
        ok, v, n = cut_independence(text, reg)
        out.append(Check("tangle", f"cut independence: {name}", ok and not v.is_zero(), f"{n} cuts, F' = {v}"))
    base = surgery_invariant(parse_surgery(UNKNOT_H, reg), p, reg)
    out.append(Check("tangle", "L'(S^3, P1 unknot with h) = D^-1 t_P1(h)", base == p.script_d.inv() * th, f"{base}"))
    for sign in (1, -1):
        v = surgery_invariant(parse_surgery(stabilized(UNKNOT_H, sign), reg), p, reg)
        out.append(Check("tangle", f"Kirby stabilization {sign:+d}", v == base))
    sig = [linking_signature(m) for m in ([[1]], [[0, 1], [1, 0]], [[3]])]
    out.append(Check("tangle", "signatures", sig == [1, 0, 1], f"{sig}"))
    return out


# -- mcg -----------------------------------------------------------------------------
def genus1_relations(r=3) -> list:
    from .mcg import lyu_rep, proportional, rhoX_rep

    H = _hopf(r)
    out = []
    for labels in ((), ("P1",)):
        for rep in (lyu_rep(H, 1, labels), rhoX_rep(H, 1, labels)):
            S, T = rep.matrix("S1"), rep.matrix("T1")
            ST = S @ T
            S2 = S @ S
            a = proportional(ST @ ST @ ST, S2)
            I = ExactMatrix.identity(H.field, S.nrows)
            S4 = S2 @ S2
            b = proportional(S4, I)
            where = f"{rep.side} m={len(labels)} dim {S.nrows}"
            out.append(Check("mcg", f"(ST)^3 ~ S^2 [{where}]", bool(a), f"scalar {a.scalar}"))
            if labels:
                v = proportional(S4, rep.matrix("v1"))
                out.append(Check("mcg", f"S^4 ~ v1 [{where}]", bool(v), f"scalar {v.scalar}"))
            else:
                out.append(Check("mcg", f"S^4 ~ id [{where}]", bool(b), f"scalar {b.scalar}"))
    return out


def equivalence_suite(r=3) -> list:
    from .mcg import intertwiner_phi, lyu_rep, proportional, rhoX_rep

    H = _hopf(r)
    out = []
    for labels in ((), ("P1",)):
        phi = intertwiner_phi(H, 1, labels)
        L = lyu_rep(H, 1, labels)
        X = rhoX_rep(H, 1, labels)
        full = rank(phi) == phi.nrows == phi.ncols
        bad = []
        scalars = set()
        for name in L.names:
            pr = proportional(phi @ X.matrix(name), L.matrix(name) @ phi)
            if not pr:
                bad.append(name)
            else:
                scalars.add(str(pr.scalar))
        out.append(Check(
            "mcg",
            f"phi rho_X(f) ~ rho_L(f) phi (g,m)=(1,{len(labels)})",
            full and not bad,
            f"phi {phi.nrows}x{phi.ncols} invertible={full}; {len(L.names)} generators; scalars {sorted(scalars)}"
            + (f"; failed {bad}" if bad else ""),
        ))
    return out


def radford_suite(r=3) -> list:
    from .mcg import coend_operators, nested_copairing
    from .rep import dual, duality, identity, standard_modules, tensor
    from .tangle.engine import StateBatch

    H = _hopf(r)
    ops = coend_operators(H)
    d = H.dim
    L = ops.L
    R = ops.copairing_R.matrix
    Rm = ExactMatrix.from_entries(H.field, d, d, [(i // d, i % d, c) for i, _, c in R.entries])
    out = [Check("mcg", "Radford copairing full rank", rank(Rm) == d, f"rank {rank(Rm)}")]
    for name, op in (("S", ops.S_op), ("T", ops.T_op)):
        a = op.tensor(identity(L)).matrix @ R
        b = identity(L).tensor(op).matrix @ R
        out.append(Check("mcg", f"{name} symmetry of R", a == b))
    R2 = nested_copairing(H, 2).matrix
    B = StateBatch.from_matrix(R2, [d] * 4)
    A1 = B.apply(0, 2, ops.Omega.matrix, [d, d])
    A2 = B.apply(2, 2, ops.Omega.matrix, [d, d])
    out.append(Check("mcg", "monodromy identity on R^(2)", A1.vectors() == A2.vectors()))
    P1 = standard_modules(H)["P1"]
    Ps = dual(P1)
    f = duality("coev_l", P1)
    Rf = identity(P1).tensor(ops.copairing_R).tensor(identity(Ps)) @ f
    lhs = ops.Omega_L(P1).tensor(identity(tensor(L, Ps))) @ Rf
    rhs = identity(tensor(P1, L)).tensor(ops.Omega_R(Ps)) @ Rf
    out.append(Check("mcg", "partial monodromy identity X=P1, Y=P1*", lhs.matrix == rhs.matrix, "f = coev_l(P1)"))
    return out


def infinite_order_suite(r=3, bound: int = 36) -> list:
    from .mcg import coend_operators, infinite_order_witness

    H = _hopf(r)
    rep = infinite_order_witness(coend_operators(H).T_op.matrix, bound)
    return [Check(
        "mcg",
        f"T has infinite order (bound {bound})",
        rep.certified,
        f"min_poly degree {len(rep.min_poly) - 1}, repeated root {rep.repeated_root}, "
        f"proportional powers {rep.proportional_powers}",
    )]


def coend_sl2z(r=3) -> list:
    from .mcg import coend_operators, sl2z_report

    H = _hopf(r)
    ops = coend_operators(H)
    rep = sl2z_report(ops.S_op.matrix, ops.T_op.matrix)
    out = []
    for k, v in rep.items():
        out.append(Check("mcg", f"coend L: {k}", v is not None, f"scalar {v}" if v is not None else "not proportional"))
    return out


def mcg_suite(r=3) -> list:
    return genus1_relations(r) + equivalence_suite(r) + radford_suite(r) + infinite_order_suite(r)


def verify_all(r=3) -> list:
    """All module suites at ``r``; representation-level suites run at r=3 only."""
    H = _hopf(r)
    out = hopf_suite(H) + stabilization_suite((r,)) + drinfeld_suite((r,))
    if r == 3:
        out += rep_suite(H) + tangle_suite(H) + mcg_suite(H)
    return out


# -- acceptance ----------------------------------------------------------------------
def _c1():
    return hopf_suite(3) + hopf_suite(5)


def _c2():
    return stabilization_suite((3, 5, 7))


def _c3():
    return drinfeld_suite((3, 5), (3,))


def _c4():
    return [c for c in tangle_suite(3) if c.name.startswith("O")]


def _c5():
    return trace_suite(3)


def _c6():
    return radford_suite(3)


def _c7():
    return [c for c in genus1_relations(3) if c.name.startswith(("(ST)", "S^4 ~ id"))]


def _c8():
    return equivalence_suite(3)


def _c9():
    return infinite_order_suite(3, 36)


def _c10():
    return [c for c in tangle_suite(3) if c.name.startswith(("L'", "Kirby", "cut"))]


CRITERIA = [
    (1, "Hopf axiom suite at r=3,5 with negative control", _c1),
    (2, "stabilization closed forms and zeta = r^3 at r=3,5,7", _c2),
    (3, "Drinfeld map invertible; closed-form inverse at r=3", _c3),
    (4, "red +-1-framed unknots give Delta_+-", _c4),
    (5, "modified trace normalization, cyclicity, partial trace", _c5),
    (6, "Radford copairing rank and identities", _c6),
    (7, "genus-1 projective SL(2,Z) relations", _c7),
    (8, "equivalence phi rho_X ~ rho_L phi at (1,0), (1,1)", _c8),
    (9, "T infinite order", _c9),
    (10, "surgery invariant well-definedness", _c10),
]


def acceptance(number: int) -> list:
    for k, _, fn in CRITERIA:
        if k == number:
            return fn()
    raise KeyError(number)
