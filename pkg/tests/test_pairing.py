import json
import random

import pytest
from hypothesis import given, strategies as st

from twpair import repcatalog as rc
from twpair.coloring import Representation, as_coloring, colorings
from twpair.diagram import builtin
from twpair.exactalg import GF, Matrix, Ring, UnsupportedRing
from twpair.pairing import (
    BilinearFormSpec,
    PairingError,
    _bind,
    diagonal_correction,
    invariant_forms,
    pairing_matrix,
    phi_cocycle,
    q_value,
    q_value_path,
    state_sum,
    torus_long_arc_colors,
    torus_q,
    torus_splitting_check,
)

from strategies import GF5_QUOT

NAMES = ["trefoil_abelian", "trefoil_sl2", "trefoil_char3", "fig8_elliptic", "fig8_case2", "fig8_z5",
         "trefoil_z3"]
_CACHE = {}


def setup(name):
    if name not in _CACHE:
        fx = rc.fixture(name)
        cm = colorings(fx.diagram, fx.rep)
        _CACHE[name] = (fx, cm, _bind(fx.psi, fx.rep))
    return _CACHE[name]


def combo(ring, basis, coeffs):
    out = [ring.zero()] * len(basis[0])
    for c, v in zip(coeffs, basis):
        out = [a + ring.convert(c) * b for a, b in zip(out, v)]
    return out


def scalar(ring, k, c):
    """A simple non-constant ring element: ``c + g^k`` for the first generator ``g``."""
    if not ring.names:
        return ring.convert(c)
    return ring.convert(c) + ring.gen(ring.names[0]) ** k


def draw_colorings(data, cm, count=2):
    n = len(cm.full_basis)
    out = []
    for _ in range(count):
        coeffs = data.draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n))
        out.append(as_coloring(cm.diagram, cm.rep, combo(cm.ring, cm.full_basis, coeffs)))
    return out


@pytest.mark.parametrize("name", NAMES)
@given(data=st.data())
def test_sesquilinear(name, data):
    fx, cm, psi = setup(name)
    d, f, ring = fx.diagram, fx.rep, fx.rep.ring
    a, b = draw_colorings(data, cm)
    lam = scalar(ring, data.draw(st.integers(-2, 2)), data.draw(st.integers(-2, 2)))
    q = q_value(d, f, f, psi, 0, a, b)
    la = as_coloring(d, f, [lam * x for v in a.x for x in v])
    lb = as_coloring(d, f, [lam * x for v in b.x for x in v])
    assert q_value(d, f, f, psi, 0, la, b) == lam.involute() * q
    assert q_value(d, f, f, psi, 0, a, lb) == lam * q


@pytest.mark.parametrize("name", NAMES)
@given(data=st.data())
def test_path_recomputation_agrees(name, data):
    fx, cm, psi = setup(name)
    a, b = draw_colorings(data, cm)
    d, f = fx.diagram, fx.rep
    assert q_value(d, f, f, psi, 0, a, b) == q_value_path(d, f, f, psi, 0, a, b)


@pytest.mark.parametrize("name", NAMES)
def test_diagonal_first_argument_gives_zero(name):
    fx, cm, psi = setup(name)
    d, f = fx.diagram, fx.rep
    for u in cm.diag_basis:
        for v in cm.full_basis:
            assert not q_value(d, f, f, psi, 0, u, v).terms


@pytest.mark.parametrize("name", NAMES)
@given(data=st.data())
def test_state_sum_splits_into_components_and_diagonal_term(name, data):
    fx, cm, psi = setup(name)
    d, f = fx.diagram, fx.rep
    (c,) = draw_colorings(data, cm, 1)
    total = sum((q_value(d, f, f, psi, k, c, c) for k in range(d.n_components)), psi.ring.zero())
    assert state_sum(d, c, phi_cocycle(psi), psi.ring.zero()) == total + diagonal_correction(d, c, psi)


@pytest.mark.parametrize("name", NAMES)
def test_fixture_forms_are_invariant(name):
    fx, _, psi = setup(name)
    assert psi.invariance_failures(fx.rep) == []


@pytest.mark.parametrize("name", ["trefoil_sl2", "fig8_case2", "trefoil_char3", "fig8_z5"])
def test_invariant_form_basis_is_invariant(name):
    fx = rc.fixture(name)
    forms = invariant_forms(fx.rep)
    assert forms.dim >= 1
    for b in forms.basis:
        for h in fx.rep.images:
            assert h.involute() @ b @ h.transpose() == b


def test_no_forms_on_non_self_conjugate_ring():
    f = Representation(GF5_QUOT, 1, (Matrix(GF5_QUOT, [[GF5_QUOT.gen("t")]]),) * 3)
    forms = invariant_forms(f)
    assert forms.dim == 0 and forms.reason
    with pytest.raises(UnsupportedRing):
        BilinearFormSpec().bind(GF5_QUOT, 1)


def test_form_spec_validation():
    R = Ring(GF(5), [])
    with pytest.raises(PairingError):
        BilinearFormSpec("nope")
    with pytest.raises(PairingError):
        BilinearFormSpec("custom")
    with pytest.raises(PairingError):
        BilinearFormSpec("det2").gram(R, 3)
    with pytest.raises(PairingError):
        BilinearFormSpec("trace_form").gram(R, 3)
    spec = BilinearFormSpec("custom", (("1", "2"), ("0", "1")))
    assert BilinearFormSpec.from_dict(spec.to_dict()) == spec
    with pytest.raises(PairingError):
        BilinearFormSpec.from_dict({"kind": "det2", "extra": 1})


def test_non_coloring_argument_is_rejected():
    fx, cm, psi = setup("trefoil_sl2")
    d, f = fx.diagram, fx.rep
    v = list(cm.red_basis[0])
    v[-1] = v[-1] + f.ring.one()
    with pytest.raises(PairingError):
        q_value(d, f, f, psi, 0, v, cm.red_basis[0])


def test_pairing_report_json():
    fx, cm, psi = setup("fig8_case2")
    rep = pairing_matrix(fx.diagram, fx.rep, fx.rep, psi, 0, cm.red_basis, cm.red_basis)
    doc = json.loads(rep.to_json())
    assert doc["component"] == 1
    assert len(doc["gram"]) == len(cm.red_basis)
    assert doc["flags"]["diagonal_input"] is False
    assert rep.to_json() == pairing_matrix(fx.diagram, fx.rep, fx.rep, psi, 0, cm.red_basis,
                                           cm.red_basis).to_json()


def _random_sl2(rng, ring, p):
    while True:
        a, b, c = (rng.randrange(p) for _ in range(3))
        if a:
            return Matrix(ring, [[a, b], [c, (1 + b * c) * pow(a, -1, p) % p]])


def _power(ring, g, k):
    out = Matrix.identity(ring, 2)
    for _ in range(k):
        out = out @ g
    return out


@given(st.sampled_from([2, 3]), st.integers(0, 10 ** 6))
def test_torus_closed_form(m, seed):
    rng = random.Random(seed)
    p = 5
    R = Ring(GF(p), [])
    form = BilinearFormSpec("det2").bind(R, 2)
    d = builtin(f"torus_mm:{m}")
    g = _random_sl2(rng, R, p)
    zs = [_power(R, g, rng.randrange(1, 8)) for _ in range(m)]
    f = Representation.from_generators(d, R, {i + 1: zs[i] for i in range(m)})
    basis = colorings(d, f).full_basis
    va = combo(R, basis, [rng.randrange(p) for _ in basis])
    vb = combo(R, basis, [rng.randrange(p) for _ in basis])
    ca, cb = as_coloring(d, f, va), as_coloring(d, f, vb)
    xa, xb = torus_long_arc_colors(d, ca), torus_long_arc_colors(d, cb)
    for ell in range(m):
        assert q_value(d, f, f, form, ell, ca, cb) == torus_q(m, zs, form, ell + 1, xa, xb)


def test_torus_splitting_needs_trivial_product():
    R = Ring(GF(7), [])
    g = Matrix(R, [[1, 1], [0, 1]])
    with pytest.raises(PairingError):
        torus_splitting_check(2, [g, g])
    assert torus_splitting_check(2, [g, g.inverse()]).split
