"""Named representations, forms and printed vectors for the worked examples.

Every fixture carries the working ring for colorings (the module quotient
already applied) and, when a twisted Alexander polynomial makes sense, a second
representation over a ring where the twist variable ``t`` is free.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .coloring import Representation, extend_coloring, as_vector
from .diagram import LinkDiagram, builtin
from .exactalg import GF, QQ, Matrix, Ring, RingElem, Variable, laurent_ring
from .pairing import BilinearFormSpec


@dataclass(frozen=True)
class Expectation:
    value: str
    tag: str  # "PUBLISHED" or "DERIVED"
    note: str = ""


@dataclass
class FixtureSpec:
    name: str
    diagram: LinkDiagram
    rep: Representation
    psi: BilinearFormSpec
    alexander_rep: Representation | None = None
    printed: dict[str, tuple[RingElem, ...]] = field(default_factory=dict)
    expected: dict[str, Expectation] = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    @property
    def ring(self) -> Ring:
        return self.rep.ring

    def to_config(self) -> dict:
        """Export in the representation-config schema."""
        return rep_to_config(self.diagram, self.rep, self.psi)


# ---------------------------------------------------------------------------
# helpers


def _scalar_rep(d: LinkDiagram, ring: Ring, value, **kw) -> Representation:
    m = Matrix(ring, [[ring.convert(value)]])
    return Representation.from_generators(d, ring, {a: m for a in d.arcs}, **kw)


def _rho(d: LinkDiagram) -> tuple[tuple[int, ...], ...]:
    return tuple((1,) for _ in d.arcs)


def _sl2_pair(ring: Ring, s, lower) -> tuple[Matrix, Matrix]:
    s = ring.convert(s)
    return (Matrix(ring, [[s, 1], [0, s.inverse()]]),
            Matrix(ring, [[s, 0], [ring.convert(lower), s.inverse()]]))


def _zero(ring: Ring, n: int):
    return tuple(ring.zero() for _ in range(n))


def _printed_vector(d: LinkDiagram, f: Representation, second_arc_color) -> tuple[RingElem, ...]:
    """Color 0 on arc 1 and the given color on arc 2, extended to all arcs."""
    c = extend_coloring(d, f, {1: _zero(f.ring, f.n), 2: tuple(second_arc_color)})
    return as_vector(c)


def _frac_str(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# trefoil


def trefoil_abelian() -> FixtureSpec:
    d = builtin("trefoil")
    ring = laurent_ring(QQ, "t").quotient("t", "t^2 - t + 1")
    f = _scalar_rep(d, ring, ring.gen("t"))
    lr = laurent_ring(QQ, "t")
    fa = _scalar_rep(d, lr, 1, rho=_rho(d))
    return FixtureSpec("trefoil_abelian", d, f, BilinearFormSpec("hermitian_dot"), fa, expected={
        "q_multiplier": Expectation("2*t - 1", "PUBLISHED", "Q(x, x') = psi(x, x'(2t - 1))"),
        "one_minus_t_q": Expectation("t + 1", "PUBLISHED", "(1 - t) Q = (1 + t) conj(x) x'"),
        "delta": Expectation("t^2 - t + 1", "PUBLISHED"),
        "red_dim": Expectation("2", "PUBLISHED", "red part is M, of base-field dimension 2"),
    })


def trefoil_sl2() -> FixtureSpec:
    d = builtin("trefoil")
    vs = [Variable("s", "self"), Variable("t")]
    pre = Ring(QQ, vs)
    ring = pre.quotient("t", "t^2 + 1")
    s, t = ring.gen("s"), ring.gen("t")
    a1, a2 = _sl2_pair(ring, s, 1 - s ** 2 - s ** -2)
    a1 = Matrix(ring, [[s, 1], [0, s ** -1]])
    f = Representation.from_generators(d, ring, {1: a1.scale(t), 2: a2.scale(t)})
    p1, p2 = _sl2_pair(pre, pre.gen("s"), "1 - s^2 - s^-2")
    p1 = Matrix(pre, [[pre.gen("s"), 1], [0, pre.gen("s") ** -1]])
    fa = Representation.from_generators(d, pre, {1: p1, 2: p2}, rho=_rho(d))
    printed = _printed_vector(d, f, (1 - s ** -1 * t + s * t, s * t))
    return FixtureSpec("trefoil_sl2", d, f, BilinearFormSpec("det2"), fa, printed={"printed_basis": printed},
                       expected={
                           "q_printed": Expectation("2*s^2 + 2", "PUBLISHED", "Q on the printed basis vector, x = x' = 1"),
                           "q_localized": Expectation("2", "PUBLISHED", "after inverting (t - s)(t - s^-1) and rescaling"),
                           "module": Expectation("t^2 + 1", "PUBLISHED"),
                       })


def trefoil_2t(p: int | None) -> FixtureSpec | None:
    """Scalar representation ``alpha_i -> 2t`` over ``F[t]/(1 - 2t + 4t^2)``; ``p=None`` means QQ.

    Returns ``None`` when the quotient ring is zero (characteristic 2).
    """
    d = builtin("trefoil")
    base = QQ if p is None else GF(p)
    lr = laurent_ring(base, "t")
    mod = lr.convert("4*t^2 - 2*t + 1")
    if not mod.terms or mod.degree_in("t")[1] < 1:
        return None
    try:
        ring = lr.quotient("t", mod)
    except ValueError:
        return None
    f = _scalar_rep(d, ring, 2 * ring.gen("t"))
    return FixtureSpec(f"trefoil_2t_{'0' if p is None else p}", d, f, BilinearFormSpec("hermitian_dot"),
                       params={"characteristic": 0 if p is None else p})


def trefoil_char3() -> FixtureSpec:
    fx = trefoil_2t(3)
    fx.name = "trefoil_char3"
    fx.expected = {
        "one_minus_t_q": Expectation("0", "PUBLISHED", "(1 - t) Q = 0"),
        "q_multiplier": Expectation("1 - t", "PUBLISHED", "Q(x1 - x2, x1' - x2') = (1 - t) conj(x1 - x2)(x1' - x2')"),
        "characteristics": Expectation("3", "PUBLISHED", "a nontrivial invariant form exists only in characteristic 3"),
    }
    return fx


# ---------------------------------------------------------------------------
# figure-eight


def fig8_abelian() -> FixtureSpec:
    d = builtin("figure8")
    ring = laurent_ring(QQ, "t").quotient("t", "t^2 - 3*t + 1")
    f = _scalar_rep(d, ring, ring.gen("t"))
    lr = laurent_ring(QQ, "t")
    fa = _scalar_rep(d, lr, 1, rho=_rho(d))
    return FixtureSpec("fig8_abelian", d, f, BilinearFormSpec("hermitian_dot"), fa,
                       expected={"delta": Expectation("t^2 - 3*t + 1", "DERIVED", "Alexander polynomial of 4_1")})


P_SU = "u^2 + (s^2 + s^-2 - 1)*u + 1"
ELLIPTIC_DELTA = "t^2 - 2*(s + s^-1)*t + 1"


def _elliptic_rings():
    vs = [Variable("s", "self"), Variable("u", "self"), Variable("t")]
    pre = Ring(QQ, vs).quotient("u", P_SU)
    return pre, pre.quotient("t", ELLIPTIC_DELTA)


def fig8_elliptic() -> FixtureSpec:
    d = builtin("figure8")
    pre, ring = _elliptic_rings()
    s, u, t = ring.gen("s"), ring.gen("u"), ring.gen("t")
    a1, a2 = _sl2_pair(ring, s, u + 1)
    f = Representation.from_generators(d, ring, {1: a1.scale(t), 2: a2.scale(t)})
    p1, p2 = _sl2_pair(pre, pre.gen("s"), pre.gen("u") + 1)
    fa = Representation.from_generators(d, pre, {1: p1, 2: p2}, rho=_rho(d))
    # printed color (x, c x) with c = num/den; cleared to (den, num)
    num = s ** 2 - 2 * s * t + t ** 2 + s * t * u
    den = s - t - s ** 2 * t
    printed = {}
    for key, color in (("printed_basis_cleared", (den, num)), ("swapped_cleared", (num, den))):
        try:
            printed[key] = _printed_vector(d, f, color)
        except ValueError:
            pass
    return FixtureSpec("fig8_elliptic", d, f, BilinearFormSpec("det2"), fa, printed=printed,
                       params={"cleared_scale": den},
                       expected={
                           "delta": Expectation(ELLIPTIC_DELTA, "PUBLISHED"),
                           "q_printed": Expectation("2*(1 + s^2)*(1 - s + s^2)*(1 + s + s^2)", "PUBLISHED",
                                                    "Q on the printed basis, coefficient of conj(x) x'"),
                       })


def fig8_elliptic_at(s_value) -> FixtureSpec:
    """The elliptic family at a rational ``s`` (``u`` stays a root of the quadratic)."""
    d = builtin("figure8")
    sq = Fraction(s_value)
    c = sq ** 2 + 1 / sq ** 2 - 1
    pre = Ring(QQ, [Variable("u", "self"), Variable("t")]).quotient("u", f"u^2 + ({_frac_str(c)})*u + 1")
    tr = 2 * (sq + 1 / sq)
    ring = pre.quotient("t", f"t^2 - ({_frac_str(tr)})*t + 1")
    s = ring.from_base(sq)
    u, t = ring.gen("u"), ring.gen("t")
    a1, a2 = _sl2_pair(ring, s, u + 1)
    f = Representation.from_generators(d, ring, {1: a1.scale(t), 2: a2.scale(t)})
    ps = pre.from_base(sq)
    p1, p2 = _sl2_pair(pre, ps, pre.gen("u") + 1)
    fa = Representation.from_generators(d, pre, {1: p1, 2: p2}, rho=_rho(d))
    return FixtureSpec(f"fig8_elliptic_s{_frac_str(sq)}", d, f, BilinearFormSpec("det2"), fa,
                       params={"s": sq},
                       expected={"delta": Expectation(f"t^2 - {_frac_str(tr)}*t + 1", "DERIVED",
                                                      "elliptic polynomial at this s")})


def fig8_hyperbolic(u_choice: str = "valid") -> FixtureSpec:
    """``s = 1`` over ``QQ[w]/(w^2 + 3)``.

    ``u_choice="printed"`` uses ``u = (1 + w)/2``, which does not satisfy the
    constraint at ``s = 1``; ``"valid"`` uses the root ``u = (-1 + w)/2``.
    """
    d = builtin("figure8")
    pre = Ring(QQ, [Variable("w", "self"), Variable("t")]).quotient("w", "w^2 + 3")
    ring = pre.quotient("t", "t^2 - 4*t + 1")
    w, t = ring.gen("w"), ring.gen("t")
    u = (1 + w) * ring.from_base(Fraction(1, 2)) if u_choice == "printed" else (w - 1) * ring.from_base(Fraction(1, 2))
    a1, a2 = _sl2_pair(ring, 1, u + 1)
    f = Representation.from_generators(d, ring, {1: a1.scale(t), 2: a2.scale(t)})
    s = ring.one()
    num = s ** 2 - 2 * s * t + t ** 2 + s * t * u
    den = s - t - s ** 2 * t
    printed = {}
    for key, color in (("printed_basis_cleared", (den, num)), ("swapped_cleared", (num, den))):
        printed[key] = _printed_vector(d, f, color)
    name = "fig8_hyperbolic" if u_choice == "valid" else "fig8_hyperbolic_printed_u"
    return FixtureSpec(name, d, f, BilinearFormSpec("det2"), printed=printed,
                       params={"u": u, "cleared_scale": den},
                       expected={"q_printed": Expectation("12", "PUBLISHED", "coefficient of conj(x) x")})


def fig8_case2() -> FixtureSpec:
    """``s + s^-1 = 1``, ``u = 1``, ``t = 1`` over ``QQ[w]/(w^2 + 3)`` with ``s = (1 + w)/2``."""
    d = builtin("figure8")
    ring = Ring(QQ, [Variable("w", "self")]).quotient("w", "w^2 + 3")
    w = ring.gen("w")
    half = ring.from_base(Fraction(1, 2))
    s = (1 + w) * half
    a1, a2 = _sl2_pair(ring, s, 2)
    f = Representation.from_generators(d, ring, {1: a1, 2: a2})
    # Arc-2 colors (s, 1) and (s^-1, -1) are orthogonal with values s^-1 and s;
    # since s + s^-1 = 1 their sum and s, -s^-1 combination are orthonormal.
    xa = (ring.one(), ring.zero())
    xb = (w, ring.one())
    printed = {"orthonormal_a": _printed_vector(d, f, xa), "orthonormal_b": _printed_vector(d, f, xb)}
    return FixtureSpec("fig8_case2", d, f, BilinearFormSpec("det2"), printed=printed,
                       params={"s": s},
                       expected={"gram": Expectation("[[1, 0], [0, 1]]", "PUBLISHED",
                                                     "Q = conj(a) a' + conj(b) b' in a suitable basis")})


# ---------------------------------------------------------------------------
# adjoint representation


SL2_BASIS = ("E", "F", "H")
KILLING_TRACE = (("0", "1", "0"), ("1", "0", "0"), ("0", "0", "2"))


def sl2_coords(x: Matrix) -> list[RingElem]:
    """Coordinates of a traceless 2x2 matrix in the basis E, F, H."""
    return [x[0, 1], x[1, 0], x[0, 0]]


def sl2_matrix(ring: Ring, c) -> Matrix:
    e, f_, h = (ring.convert(a) for a in c)
    return Matrix(ring, [[h, e], [f_, -h]])


def adjoint_matrix(g: Matrix) -> Matrix:
    """Right action ``X -> g^-1 X g`` on coordinates (row vectors)."""
    ring = g.ring
    gi = g.inverse()
    rows = []
    for c in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        b = sl2_matrix(ring, c)
        rows.append(sl2_coords(gi @ b @ g))
    return Matrix(ring, rows)


ADJOINT_DELTA = "t^2 + (2*u + 2*u^-1 - 3)*t + 1"


def _adjoint_printed(ring: Ring, s) -> Matrix:
    u, t = ring.gen("u"), ring.gen("t")
    k = u * s ** 2 + s ** 4 + s ** 6 + t + s ** 2 * t + u * s ** 4 * t
    n = (s ** 2 - 2 * s ** 4 + (4 * s ** 2 - 2) * t - 4 * s ** 2 * t ** 2
         + (2 + 5 * s ** 2 - 6 * u ** 2 * s ** 2) * t ** 3 - 2 * t ** 4
         + u * (s ** 2 * t ** 4 - 4 * (1 + 3 * s ** 2) * t ** 3 + 5 * s ** 2 * t ** 2 + 4 * (1 - s ** 2) * t - s ** 2))
    return Matrix(ring, [[(1 - t) * k, s * (1 - 3 * t ** 2 + 4 * u * t ** 2 + t ** 4)], [n, (t - 1) * k]])


def _adjoint(d, pre, ring, s_ring, s_pre, name, params) -> FixtureSpec:
    t = ring.gen("t")
    a1, a2 = _sl2_pair(ring, s_ring, ring.gen("u") + 1)
    f = Representation.from_generators(d, ring, {1: adjoint_matrix(a1).scale(t), 2: adjoint_matrix(a2).scale(t)})
    p1, p2 = _sl2_pair(pre, s_pre, pre.gen("u") + 1)
    fa = Representation.from_generators(d, pre, {1: adjoint_matrix(p1), 2: adjoint_matrix(p2)}, rho=_rho(d))
    x = _adjoint_printed(ring, s_ring)
    printed = {"printed_basis": _printed_vector(d, f, sl2_coords(x)),
               "printed_basis_transposed": _printed_vector(d, f, sl2_coords(x.transpose()))}
    return FixtureSpec(name, d, f, BilinearFormSpec("custom", KILLING_TRACE), fa, printed=printed, params=params,
                       expected={
                           "delta": Expectation(ADJOINT_DELTA, "PUBLISHED"),
                           "q_printed": Expectation(
                               "2*(t - t^-1)*(u + u^-1 - 1)*(1 - u)*(u^3 - u^2 - 2*u - 1)", "PUBLISHED",
                               "coefficient of x conj(x') on the printed basis"),
                       })


def fig8_adjoint() -> FixtureSpec:
    d = builtin("figure8")
    vs = [Variable("s", "self"), Variable("u", "self"), Variable("t")]
    pre = Ring(QQ, vs).quotient("u", P_SU)
    ring = pre.quotient("t", ADJOINT_DELTA)
    return _adjoint(d, pre, ring, ring.gen("s"), pre.gen("s"), "fig8_adjoint", {})


def fig8_adjoint_at(s_value) -> FixtureSpec:
    d = builtin("figure8")
    sq = Fraction(s_value)
    c = sq ** 2 + 1 / sq ** 2 - 1
    pre = Ring(QQ, [Variable("u", "self"), Variable("t")]).quotient("u", f"u^2 + ({_frac_str(c)})*u + 1")
    ring = pre.quotient("t", ADJOINT_DELTA)
    return _adjoint(d, pre, ring, ring.from_base(sq), pre.from_base(sq), f"fig8_adjoint_s{_frac_str(sq)}",
                    {"s": sq})


# ---------------------------------------------------------------------------
# torus links and finite fixtures


def hopf_symbolic() -> FixtureSpec:
    """Scalar colors ``a``, ``b`` and meridian images ``z1``, ``z2`` all symbolic (no kernel)."""
    d = builtin("hopf")
    ring = Ring(QQ, [Variable("a", "self"), Variable("b", "self"), Variable("z1"), Variable("z2")])
    f = Representation.from_generators(d, ring, {1: Matrix(ring, [[ring.gen("z1")]]),
                                                 2: Matrix(ring, [[ring.gen("z2")]])})
    return FixtureSpec("hopf_symbolic", d, f, BilinearFormSpec("hermitian_dot"),
                       expected={"q": Expectation("0", "PUBLISHED", "every form on the Hopf link vanishes")})


def finite_scalar(knot: str, p: int, z: int) -> FixtureSpec:
    """``M = F_p`` with every meridian acting by the scalar ``z`` (e.g. ``-1``: dihedral)."""
    d = builtin(knot)
    ring = Ring(GF(p), [])
    f = _scalar_rep(d, ring, z)
    return FixtureSpec(f"{knot}_F{p}_z{z}", d, f, BilinearFormSpec("hermitian_dot"), params={"p": p, "z": z})


def trefoil_z3() -> FixtureSpec:
    fx = finite_scalar("trefoil", 3, -1)
    fx.expected = {"count": Expectation("9", "DERIVED", "3 constant colorings times 3 reduced")}
    return fx


def fig8_z5() -> FixtureSpec:
    fx = finite_scalar("figure8", 5, -1)
    fx.expected = {"count": Expectation("25", "DERIVED", "determinant 5")}
    return fx


def fig8_z3() -> FixtureSpec:
    fx = finite_scalar("figure8", 3, -1)
    fx.expected = {"count": Expectation("3", "DERIVED", "5 is prime to 3: constant colorings only")}
    return fx


FIXTURES: dict[str, Callable[[], FixtureSpec]] = {
    "trefoil_abelian": trefoil_abelian,
    "trefoil_sl2": trefoil_sl2,
    "trefoil_char3": trefoil_char3,
    "fig8_abelian": fig8_abelian,
    "fig8_elliptic": fig8_elliptic,
    "fig8_elliptic_s2": lambda: fig8_elliptic_at(2),
    "fig8_hyperbolic": lambda: fig8_hyperbolic("valid"),
    "fig8_hyperbolic_printed_u": lambda: fig8_hyperbolic("printed"),
    "fig8_case2": fig8_case2,
    "fig8_adjoint": fig8_adjoint,
    "fig8_adjoint_s2": lambda: fig8_adjoint_at(2),
    "hopf_symbolic": hopf_symbolic,
    "trefoil_z3": trefoil_z3,
    "fig8_z5": fig8_z5,
    "fig8_z3": fig8_z3,
}


def fixture(name: str) -> FixtureSpec:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {sorted(FIXTURES)}") from None


# ---------------------------------------------------------------------------
# config export


def ring_to_config(ring: Ring) -> dict:
    base = ring.base
    out = {"base": "QQ" if base.kind == "QQ" else "ZZ" if base.kind == "ZZ" else f"GF({base.p})",
           "variables": [{"name": v.name, "involution": v.involution} for v in ring.variables]}
    if ring.designated:
        out["moduli"] = [{"variable": var, "polynomial": str(poly)} for var, poly in ring.moduli]
    return out


def rep_to_config(d: LinkDiagram, f: Representation, psi: BilinearFormSpec | None = None) -> dict:
    cfg = {
        "ring": ring_to_config(f.ring),
        "dimension": f.n,
        "generators": {str(a): m.to_strings() for a, m in zip(d.arcs, f.images)},
    }
    if f.rho is not None:
        cfg["rho"] = {str(a): list(w) for a, w in zip(d.arcs, f.rho)}
        cfg["t_vars"] = list(f.t_vars)
    if psi is not None:
        cfg["psi"] = psi.to_dict()
    if d.name:
        cfg["knot"] = d.name
    return cfg


def export_fixture(name: str) -> str:
    return json.dumps(fixture(name).to_config(), indent=2)
