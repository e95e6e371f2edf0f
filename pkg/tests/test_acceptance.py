"""Acceptance criteria, one check per criterion, each printing a PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) for the 14-line report, or
through pytest, where the same lines appear in the terminal summary.
"""

from __future__ import annotations

import random
import sys
import time

import pytest

from twpair import oracle
from twpair import repcatalog as rc
from twpair.alexander import (
    LocalElem,
    adj_map,
    adj_rank,
    associates,
    chain_residual,
    exact_divide,
    fundamental_identity,
    rescaled_value,
    twisted_alexander,
    twisted_gram,
)
from twpair.coloring import (
    Representation,
    as_coloring,
    check_rep,
    colorings,
    first_failure,
    vecmat,
    vsub,
)
from twpair.diagram import builtin, wirtinger
from twpair.exactalg import GF, Matrix, Ring, Variable
from twpair.pairing import (
    BilinearFormSpec,
    _bind,
    invariant_forms,
    q_value,
    torus_long_arc_colors,
    torus_q,
    torus_splitting_check,
)

REPORT: list[str] = []


def _line(number: int, title: str, ok: bool, detail: str) -> str:
    text = f"{'PASS' if ok else 'FAIL'} [{number:2d}] {title} :: {detail}"
    REPORT.append(text)
    print(text)
    return text


def _pairs(basis):
    return [(a, b) for a in basis for b in basis]


# ---------------------------------------------------------------------------


def check_1():
    """Trefoil reduced pairing equals psi(x1 - x2, (x1' - x2')(z1 - z1^-1))."""
    results = []
    for name in ("trefoil_abelian", "trefoil_sl2", "trefoil_char3"):
        fx = rc.fixture(name)
        d, f = fx.diagram, fx.rep
        psi = _bind(fx.psi, f)
        kern = f.images[0] - f.inverses[0]
        cm = colorings(d, f)
        ok = True
        for a, b in _pairs(cm.full_basis):
            ca, cb = as_coloring(d, f, a), as_coloring(d, f, b)
            rhs = psi(vsub(ca.x[0], ca.x[1]), vecmat(vsub(cb.x[0], cb.x[1]), kern))
            ok &= q_value(d, f, f, psi, 0, ca, cb) == rhs
        results.append((name, ok))
    ok = all(r for _, r in results)
    return ok, ", ".join(f"{n}={'ok' if r else 'mismatch'}" for n, r in results) + " (all basis pairs, exact)"


def check_2():
    fx = rc.fixture("trefoil_abelian")
    d, f = fx.diagram, fx.rep
    ring = f.ring
    t = ring.gen("t")
    psi = _bind(fx.psi, f)
    cm = colorings(d, f)
    ok_q = ok_b = True
    for a, b in _pairs(cm.full_basis):
        ca, cb = as_coloring(d, f, a), as_coloring(d, f, b)
        x, x2 = vsub(ca.x[0], ca.x[1]), vsub(cb.x[0], cb.x[1])
        q = q_value(d, f, f, psi, 0, ca, cb)
        ok_q &= q == psi(x, tuple(c * (2 * t - 1) for c in x2))
        ok_b &= (1 - t) * q == (1 + t) * x[0].involute() * x2[0]
    return ok_q and ok_b, f"Q = psi(x, x'(2t-1)): {ok_q}; (1-t)Q = (1+t) conj(x) x': {ok_b}"


def check_3():
    fx = rc.fixture("trefoil_sl2")
    d, f = fx.diagram, fx.rep
    ring = f.ring
    s, t = ring.gen("s"), ring.gen("t")
    psi = _bind(fx.psi, f)
    v = fx.printed["printed_basis"]
    c = as_coloring(d, f, v)
    bad = first_failure(d, c)
    q_printed = q_value(d, f, f, psi, 0, c, c, check=False)
    expected = 2 * s ** 2 + 2
    local = rescaled_value(q_printed, t - s, t - s)
    ok = bad is None and q_printed == expected and local == LocalElem(ring.convert(2), ring.one())
    # our own reduced generator, for the ledger
    cm = colorings(d, f)
    gen = as_coloring(d, f, cm.red_basis[1])
    q_ours = q_value(d, f, f, psi, 0, gen, gen)
    ratio = LocalElem(q_ours, expected)
    unit = LocalElem(-s.inverse(), ring.one())
    detail = (f"printed vector is a coloring: {bad is None}"
              + ("" if bad is None else f" (fails at {bad})")
              + f"; Q(printed) = {q_printed} vs {expected}; localized = {local}"
              + f"; solver generator arc-2 color ({', '.join(map(str, gen.x[1]))}) gives Q = {q_ours}"
              + f" = -s^-1 * expected: {ratio == unit}")
    return ok, detail


def check_4():
    rows = []
    nontrivial = []
    for p in (None, 2, 3, 5):
        fx = rc.trefoil_2t(p)
        label = 0 if p is None else p
        if fx is None:
            rows.append(f"char {label}: zero ring")
            continue
        forms = invariant_forms(fx.rep)
        rows.append(f"char {label}: {forms.dim}")
        if forms.dim:
            nontrivial.append(label)
    fx = rc.fixture("trefoil_char3")
    d, f = fx.diagram, fx.rep
    t = f.ring.gen("t")
    psi = _bind(fx.psi, f)
    cm = colorings(d, f)
    qs = [q_value(d, f, f, psi, 0, a, b) for a, b in _pairs(cm.full_basis)]
    annihilated = all(not ((1 - t) * q).terms for q in qs)
    nonzero = any(q.terms for q in qs)
    ok = nontrivial == [3] and annihilated and nonzero
    return ok, (f"invariant-form dims: {'; '.join(rows)}; (1-t)Q = 0 on all pairs: {annihilated};"
                f" Q not identically zero: {nonzero}")


def _fig8_kernel(f):
    z1, z2, i1, i2 = f.images[0], f.images[1], f.inverses[0], f.inverses[1]
    return f.identity - i1 - i2 + z1 @ i2 + z2 @ i1


def check_5():
    results = []
    for name in ("fig8_abelian", "fig8_elliptic", "fig8_case2", "fig8_hyperbolic"):
        fx = rc.fixture(name)
        d, f = fx.diagram, fx.rep
        psi = _bind(fx.psi, f)
        kern = _fig8_kernel(f)
        cm = colorings(d, f)
        ok = True
        for a, b in _pairs(cm.full_basis):
            ca, cb = as_coloring(d, f, a), as_coloring(d, f, b)
            rhs = psi(vsub(ca.x[0], ca.x[1]), vecmat(vsub(cb.x[0], cb.x[1]), kern))
            ok &= q_value(d, f, f, psi, 0, ca, cb) == rhs
        results.append((name, ok))
    return all(r for _, r in results), ", ".join(f"{n}={'ok' if r else 'mismatch'}" for n, r in results)


def check_6():
    fx = rc.fixture("fig8_elliptic")
    d, f, fa = fx.diagram, fx.rep, fx.alexander_rep
    ring = f.ring
    s = ring.gen("s")
    delta = twisted_alexander(d, fa).delta
    target = fa.ring.convert(rc.ELLIPTIC_DELTA)
    ok_delta = delta is not None and associates(delta, target)
    psi = _bind(fx.psi, f)
    expected = ring.convert(fx.expected["q_printed"].value)
    # the printed color (x, c x) with c = num/den, cleared of its denominator
    printed = as_coloring(d, f, fx.printed["printed_basis_cleared"])
    bad = first_failure(d, printed)
    q_printed = q_value(d, f, f, psi, 0, printed, printed, check=False)
    ok_q = bad is None and q_printed == expected
    swapped = as_coloring(d, f, fx.printed["swapped_cleared"])
    q_swapped = q_value(d, f, f, psi, 0, swapped, swapped)
    swapped_ratio = q_swapped == -s.inverse() * expected
    # hyperbolic point
    hp = rc.fixture("fig8_hyperbolic_printed_u")
    printed_u_ok = check_rep(hp.diagram, hp.rep).ok
    hv = rc.fixture("fig8_hyperbolic")
    hf = hv.rep
    hc = as_coloring(hv.diagram, hf, hv.printed["swapped_cleared"])
    h_val = q_value(hv.diagram, hf, hf, _bind(hv.psi, hf), 0, hc, hc)
    ok = ok_delta and ok_q and printed_u_ok and h_val == 12
    detail = (f"Delta_f = {delta} ~ {rc.ELLIPTIC_DELTA}: {ok_delta}; printed basis is a coloring: {bad is None}"
              + ("" if bad is None else f" (fails at {bad})")
              + f"; Q(printed) = expected: {ok_q}; swapped basis gives -s^-1 * expected: {swapped_ratio}"
              + f"; hyperbolic u=(1+w)/2 satisfies the constraint: {printed_u_ok}"
              + f"; valid root u=(-1+w)/2 gives {h_val} (expected 12)")
    return ok, detail


def check_7():
    fx = rc.fixture("fig8_case2")
    d, f = fx.diagram, fx.rep
    psi = _bind(fx.psi, f)
    basis = [fx.printed["orthonormal_a"], fx.printed["orthonormal_b"]]
    cs = [as_coloring(d, f, v) for v in basis]
    gram = [[q_value(d, f, f, psi, 0, a, b) for b in cs] for a in cs]
    ident = [[f.ring.one(), f.ring.zero()], [f.ring.zero(), f.ring.one()]]
    cm = colorings(d, f)
    full = cm.dim_red == cm.dim_module  # every element of M^2 extends
    ok = gram == ident and full
    return ok, (f"Col^red = M^2: {full}; Gram on the explicit basis = "
                f"{[[str(e) for e in r] for r in gram]}")


def check_8():
    fx = rc.fixture("fig8_adjoint")
    d, fa = fx.diagram, fx.alexander_rep
    data = twisted_alexander(d, fa)
    target = fa.ring.convert(rc.ADJOINT_DELTA)
    ok_delta = data.delta is not None and associates(data.delta, target)
    extra = None
    if data.delta is not None and not ok_delta:
        try:
            t = fa.ring.gen("t")
            rest = exact_divide(data.delta, target, "t")
            extra = f"{rest}" if associates(rest, t - 1) else str(rest)
        except ArithmeticError:
            extra = "not a multiple"
    f = fx.rep
    fails = {k: first_failure(d, as_coloring(d, f, v)) for k, v in fx.printed.items()}
    colored = any(v is None for v in fails.values())
    psi = _bind(fx.psi, f)
    v = as_coloring(d, f, fx.printed["printed_basis"])
    q = q_value(d, f, f, psi, 0, v, v, check=False)
    expected = f.ring.convert(fx.expected["q_printed"].value)
    ok_q = colored and q == expected
    ok = ok_delta and colored and ok_q
    detail = (f"Delta_f ~ expected: {ok_delta}" + (f" (quotient by expected = {extra})" if extra else "")
              + f"; printed vector is a coloring: {colored} (first failure {fails['printed_basis']})"
              + f"; Q(printed) = expected: {ok_q}")
    return ok, detail


def _sl2_power(ring, g, k):
    out = Matrix.identity(ring, 2)
    h = g if k >= 0 else g.inverse()
    for _ in range(abs(k)):
        out = out @ h
    return out


def _random_sl2(rng, ring, p):
    while True:
        a, b, c = (rng.randrange(p) for _ in range(3))
        if a:
            return Matrix(ring, [[a, b], [c, (1 + b * c) * pow(a, -1, p) % p]])


def check_9():
    # symbolic scalar meridians: Q lies in the ideal of the coloring relation
    fx = rc.fixture("hopf_symbolic")
    d, f = fx.diagram, fx.rep
    ring = f.ring
    a, b, z1, z2 = (ring.gen(n) for n in ("a", "b", "z1", "z2"))
    ring2 = Ring(ring.base, list(ring.variables) + [Variable("a2", "self"), Variable("b2", "self")])
    f2 = f.change_ring(ring2)
    a, b, a2, b2 = (ring2.gen(n) for n in ("a", "b", "a2", "b2"))
    zs = {0: ring2.gen("z2"), 1: ring2.gen("z1")}
    c1 = as_coloring(d, f2, [a, b])
    c2 = as_coloring(d, f2, [a2, b2])
    sym_ok = True
    for ell in range(2):
        q = q_value(d, f2, f2, "hermitian_dot", ell, c1, c2, check=False)
        z = zs[ell]
        try:
            # the crossing passed under on component ell has over-arc meridian z
            r = exact_divide(q, 1 - z, "z2" if ell == 0 else "z1")
            exact_divide(r, a - b if ell == 0 else b - a, "a")
        except ArithmeticError:
            sym_ok = False
    # random finite instances: commuting SL2(F_p) meridians, the det form
    rng = random.Random(9)
    zero_ok = 0
    for trial in range(100):
        p = rng.choice((3, 5, 7, 11))
        R = Ring(GF(p), [])
        g = _random_sl2(rng, R, p)
        z_1, z_2 = _sl2_power(R, g, rng.randrange(-5, 6)), _sl2_power(R, g, rng.randrange(-5, 6))
        fr = Representation.from_generators(d, R, {1: z_1, 2: z_2})
        cm = colorings(d, fr)
        form = BilinearFormSpec("det2").bind(R, 2)
        if all(not q_value(d, fr, fr, form, ell, x, y).terms
               for ell in range(2) for x, y in _pairs(cm.full_basis)):
            zero_ok += 1
    ok = sym_ok and zero_ok == 100
    return ok, f"symbolic z1, z2: Q in the relation ideal: {sym_ok}; finite instances with Q = 0: {zero_ok}/100"


def check_10():
    rng = random.Random(10)
    p = 7
    R = Ring(GF(p), [])
    form = BilinearFormSpec("det2").bind(R, 2)
    parts = []
    ok = True
    for m in (2, 3, 4):
        d = builtin(f"torus_mm:{m}")
        agree = total = 0
        while total < 100 * m:
            g = _random_sl2(rng, R, p)
            zs = [_sl2_power(R, g, rng.randrange(1, 12)) for _ in range(m)]
            f = Representation.from_generators(d, R, {i + 1: zs[i] for i in range(m)})
            basis = colorings(d, f).full_basis
            for _ in range(10):
                va = [sum((c * x for c, x in zip(cs, col)), R.zero())
                      for cs in [[rng.randrange(p) for _ in basis]] for col in zip(*basis)]
                vb = [sum((c * x for c, x in zip(cs, col)), R.zero())
                      for cs in [[rng.randrange(p) for _ in basis]] for col in zip(*basis)]
                ca, cb = as_coloring(d, f, va), as_coloring(d, f, vb)
                xa, xb = torus_long_arc_colors(d, ca), torus_long_arc_colors(d, cb)
                for ell in range(m):
                    total += 1
                    agree += q_value(d, f, f, form, ell, ca, cb) == torus_q(m, zs, form, ell + 1, xa, xb)
        ks = [rng.randrange(1, 12) for _ in range(m - 1)]
        ks.append(-sum(ks))
        g = _random_sl2(rng, R, p)
        split = torus_splitting_check(m, [_sl2_power(R, g, k) for k in ks]).split
        ok &= agree == total and split
        parts.append(f"m={m}: {agree}/{total} agree, split={split}")
    return ok, "; ".join(parts)


def check_11():
    parts = []
    ok = True
    for name in ("trefoil_z3", "fig8_z5", "fig8_z3"):
        fx = rc.fixture(name)
        d, f = fx.diagram, fx.rep
        X = oracle.FiniteQuandle.from_representation(f)
        cs = oracle.enumerate_colorings(d, X, oracle.group_labels(X, f))
        expected = oracle.kernel_size(d, f)
        form = _bind(fx.psi, f)
        B = oracle.form_matrix(form.b)
        agree = 0
        for a, b in _pairs(cs):
            qv = q_value(d, f, f, form, 0, oracle.to_coloring(X, f, a), oracle.to_coloring(X, f, b))
            agree += oracle._from_ring_vector(f.ring, [qv]) == oracle.brute_q(d, X, X, B, 0, a, b)
        good = len(cs) == expected and agree == len(cs) ** 2
        ok &= good
        parts.append(f"{name}: {len(cs)} colorings (kernel {expected}), Q {agree}/{len(cs) ** 2}")
    return ok, "; ".join(parts)


SYMBOLIC = ("trefoil_abelian", "trefoil_sl2", "trefoil_char3", "fig8_abelian", "fig8_elliptic",
            "fig8_hyperbolic", "fig8_case2", "fig8_adjoint_s2")


def check_12():
    parts = []
    ok = True
    for name in SYMBOLIC:
        fx = rc.fixture(name)
        d, f = fx.diagram, fx.rep
        cm = colorings(d, f)
        cs = oracle.cocycle_space(d, f)
        good = cs.dim_h_rel == cm.dim_red and cs.dim_z_rel == cm.dim_full
        diag = check_rep(d, f)
        if all(diag.meridian_unit):
            good &= cs.dim_h_rel == cs.dim_h_abs
            tag = f"rel=abs {cs.dim_h_abs}"
        else:
            tag = "meridians not invertible"
        ok &= good
        parts.append(f"{name}: red {cm.dim_red} = H1 {cs.dim_h_rel} ({tag})")
    return ok, "; ".join(parts)


def check_13():
    ok_free = ok_eval = ok_delta = True
    parts = []
    for name in ("trefoil_abelian", "trefoil_sl2", "fig8_abelian", "fig8_elliptic", "fig8_elliptic_s2",
                 "fig8_adjoint", "trefoil_z3", "fig8_case2"):
        fx = rc.fixture(name)
        d = fx.diagram
        p = wirtinger(d)
        for r in p.relators:
            ok_free &= fundamental_identity(r, p.generators).is_zero()
        for f in filter(None, (fx.rep, fx.alexander_rep)):
            res = chain_residual(p, f)
            ok_eval &= all(not e.terms for row in res.entries for e in row)
        fa = fx.alexander_rep
        if fa is None:
            continue
        datas = [twisted_alexander(d, fa, deleted=a) for a in d.arcs]
        ref = datas[0]
        same = all(associates(x.numerator * ref.denominator, ref.numerator * x.denominator) for x in datas)
        ok_delta &= same
        parts.append(f"{name}:{'same' if same else 'differs'}")
    ok = ok_free and ok_eval and ok_delta
    return ok, (f"free-group identity on all relators: {ok_free}; evaluated chain condition: {ok_eval};"
                f" Delta_f over deleted generators: {', '.join(parts)}")


def check_14():
    fx = rc.fixture("fig8_elliptic_s2")
    d, fa = fx.diagram, fx.alexander_rep
    data = twisted_alexander(d, fa)
    quotient = fa.ring.quotient("t", data.delta)
    adj = adj_map(d, fa, quotient)
    rank = adj_rank(adj)
    cm = colorings(d, adj.quotient_rep)
    gram = twisted_gram(adj, fx.psi, 0)
    det = gram.det()
    ok = rank == cm.dim_red and det.is_unit()
    return ok, (f"Delta_f = {data.delta}; adjugate rank {rank} vs dim Col^red {cm.dim_red};"
                f" Gram {gram.nrows}x{gram.ncols} determinant {det} is a unit: {det.is_unit()}")


CRITERIA = [
    (1, "trefoil reduced pairing", check_1),
    (2, "trefoil abelian pairing", check_2),
    (3, "trefoil SL2 printed basis", check_3),
    (4, "trefoil characteristic-3 form", check_4),
    (5, "figure-eight reduced pairing", check_5),
    (6, "figure-eight elliptic family", check_6),
    (7, "figure-eight case (ii) Gram", check_7),
    (8, "figure-eight adjoint", check_8),
    (9, "Hopf link pairing vanishes", check_9),
    (10, "torus T(m,m) closed form", check_10),
    (11, "finite oracle equivalence", check_11),
    (12, "cohomology oracle", check_12),
    (13, "Fox identities and deletion independence", check_13),
    (14, "adjugate rank and twisted Gram", check_14),
]


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"criterion_{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(number, title, check):
    ok, detail = check()
    _line(number, title, ok, detail)
    assert ok, detail


def main() -> int:
    failures = 0
    start = time.time()
    for number, title, check in CRITERIA:
        try:
            ok, detail = check()
        except Exception as exc:  # report and keep going
            ok, detail = False, f"error: {type(exc).__name__}: {exc}"
        failures += not ok
        _line(number, title, ok, detail)
    print(f"{len(CRITERIA) - failures}/{len(CRITERIA)} passed in {time.time() - start:.1f}s")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
