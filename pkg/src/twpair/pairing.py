"""The crossing-sum bilinear form on colorings, its path and closed forms.

``Q_l(C, C') = sum over crossings whose under-strand lies on component l of
sign * psi(x_src - y_over, y'_over · (1 - h'_over^-1))`` where ``x_src`` is the
color of the under-arc on the source side of the crossing (the incoming arc at
a positive crossing, the outgoing one at a negative crossing).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .coloring import (
    Coloring,
    Representation,
    Vector,
    as_coloring,
    first_failure,
    vecmat,
    vscale,
    vsub,
)
from .diagram import LinkDiagram
from .exactalg import Matrix, Ring, RingElem, UnsupportedRing, flat_rank

PSI_KINDS = ("hermitian_dot", "det2", "trace_form", "custom")


class PairingError(ValueError):
    pass


@dataclass(frozen=True)
class BilinearFormSpec:
    """``psi(x, y) = conj(x) B y^T`` for row vectors, conjugate-linear in ``x``."""

    kind: str = "hermitian_dot"
    matrix: tuple[tuple[str, ...], ...] | None = None

    def __post_init__(self):
        if self.kind not in PSI_KINDS:
            raise PairingError(f"unknown form kind {self.kind!r}; expected one of {PSI_KINDS}")
        if self.kind == "custom" and not self.matrix:
            raise PairingError("custom form needs a matrix")

    def gram(self, ring: Ring, n: int) -> Matrix:
        if self.kind == "hermitian_dot":
            return Matrix.identity(ring, n)
        if self.kind == "det2":
            if n != 2:
                raise PairingError(f"det2 form needs rank 2, got {n}")
            return Matrix(ring, [[0, 1], [-1, 0]])
        if self.kind == "trace_form":
            k = round(n ** 0.5)
            if k * k != n:
                raise PairingError(f"trace form needs rank k^2, got {n}")
            rows = [[0] * n for _ in range(n)]
            for i in range(k):
                for j in range(k):
                    rows[i * k + j][j * k + i] = 1
            return Matrix(ring, rows)
        b = Matrix(ring, [[ring.convert(e) for e in row] for row in self.matrix])
        if b.shape != (n, n):
            raise PairingError(f"custom form is {b.shape}, module rank is {n}")
        return b

    def bind(self, ring: Ring, n: int) -> "BoundForm":
        if not ring.is_self_conjugate():
            raise UnsupportedRing(f"forms need a ring closed under the involution; {ring!r} is not")
        return BoundForm(self, ring, n, self.gram(ring, n))

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.matrix:
            d["matrix"] = [list(r) for r in self.matrix]
        return d

    @classmethod
    def from_dict(cls, data: dict | str) -> "BilinearFormSpec":
        if isinstance(data, str):
            return cls(data)
        extra = set(data) - {"kind", "matrix"}
        if extra:
            raise PairingError(f"unknown form keys {sorted(extra)}")
        mat = data.get("matrix")
        return cls(data.get("kind", "hermitian_dot"),
                   tuple(tuple(str(e) for e in r) for r in mat) if mat else None)


@dataclass(frozen=True, eq=False)
class BoundForm:
    spec: BilinearFormSpec
    ring: Ring
    n: int
    b: Matrix

    def __call__(self, x: Sequence[RingElem], y: Sequence[RingElem]) -> RingElem:
        acc = self.ring.zero()
        for i, xi in enumerate(x):
            if not xi.terms:
                continue
            xc = xi.involute()
            row = self.b.entries[i]
            inner = self.ring.zero()
            for j, yj in enumerate(y):
                if row[j].terms and yj.terms:
                    inner = inner + row[j] * yj
            if inner.terms:
                acc = acc + xc * inner
        return acc

    def invariance_failures(self, f: Representation) -> list[int]:
        """Indices of generator images ``h`` with ``conj(h) B h^T != B``."""
        bad = []
        for k, h in enumerate(f.images):
            if h.involute() @ self.b @ h.transpose() != self.b:
                bad.append(k)
        return bad

    def require_invariant(self, f: Representation):
        bad = self.invariance_failures(f)
        if bad:
            raise PairingError(f"form is not invariant under the image of generator {bad[0] + 1}")


def _bind(psi, f: Representation) -> BoundForm:
    if isinstance(psi, BoundForm):
        return psi
    if isinstance(psi, str):
        psi = BilinearFormSpec(psi)
    return psi.bind(f.ring, f.n)


def _coloring(d: LinkDiagram, f: Representation, c) -> Coloring:
    return c if isinstance(c, Coloring) else as_coloring(d, f, c)


def _check(d: LinkDiagram, c: Coloring, which: str):
    bad = first_failure(d, c)
    if bad is not None:
        raise PairingError(f"{which} argument is not a coloring: fails at crossing {bad}")


def q_value(d: LinkDiagram, f: Representation, f2: Representation, psi, component: int,
            c1, c2, check: bool = True) -> RingElem:
    """Crossing sum over the crossings with under-strand on ``component`` (0-based)."""
    form = _bind(psi, f)
    c1, c2 = _coloring(d, f, c1), _coloring(d, f2, c2)
    if check:
        _check(d, c1, "first")
        _check(d, c2, "second")
    idx = d._positions()
    total = form.ring.zero()
    for cr in d.crossings_under(component):
        o, s = idx[cr.over], idx[cr.source]
        left = vsub(c1.x[s], c1.x[o])
        y2 = c2.x[o]
        right = vsub(y2, vecmat(y2, c2.z_inv[o]))
        term = form(left, right)
        total = total + term if cr.sign > 0 else total - term
    return total


def q_value_path(d: LinkDiagram, f: Representation, f2: Representation, psi, component: int,
                 c1, c2, check: bool = True) -> RingElem:
    """The same sum recomputed from the base-arc color and the over-arc colors only.

    Walking the component from its base arc, the under color is propagated with
    ``x_next - y = (x - y)·h^sign`` rather than read off the coloring.
    """
    form = _bind(psi, f)
    c1, c2 = _coloring(d, f, c1), _coloring(d, f2, c2)
    if check:
        _check(d, c1, "first")
        _check(d, c2, "second")
    idx = d._positions()
    base = d.base_arc(component)
    steps = d.path(component, base)
    if not steps or steps[0][1] is None:
        return form.ring.zero()
    x = c1.x[idx[base]]
    total = form.ring.zero()
    for _arc, cr in steps:
        o = idx[cr.over]
        y, h, hi = c1.x[o], c1.z[o], c1.z_inv[o]
        diff = vsub(x, y)
        moved = vecmat(diff, h if cr.sign > 0 else hi)
        y2 = c2.x[o]
        right = vsub(y2, vecmat(y2, c2.z_inv[o]))
        term = form(diff if cr.sign > 0 else moved, right)
        total = total + term if cr.sign > 0 else total - term
        x = tuple(a + b for a, b in zip(moved, y))
    return total


# ---------------------------------------------------------------------------
# Gram matrices


@dataclass
class PairingReport:
    component: int
    gram: Matrix
    ring: Ring
    basis: list[Vector] = field(repr=False)
    basis2: list[Vector] = field(repr=False)
    symmetric: bool = False
    skew: bool = False
    hermitian: bool = False
    determinant: RingElem | None = None
    flat_rank: int | None = None
    diagonal_input: bool = False

    @property
    def degenerate(self) -> bool | None:
        if self.determinant is None:
            return None
        return not self.determinant.terms

    def to_dict(self) -> dict:
        return {
            "component": self.component + 1,
            "ring": repr(self.ring),
            "gram": self.gram.to_strings(),
            "rank": self.flat_rank,
            "flags": {
                "symmetric": self.symmetric,
                "skew": self.skew,
                "hermitian": self.hermitian,
                "degenerate": self.degenerate,
                "diagonal_input": self.diagonal_input,
            },
            "determinant": None if self.determinant is None else str(self.determinant),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _is_diagonal(v: Sequence[RingElem], n: int) -> bool:
    first = tuple(v[:n])
    return any(a.terms for a in first) and all(tuple(v[i:i + n]) == first for i in range(0, len(v), n))


def pairing_matrix(d: LinkDiagram, f: Representation, f2: Representation, psi, component: int,
                   basis: Sequence[Sequence], basis2: Sequence[Sequence]) -> PairingReport:
    form = _bind(psi, f)
    width = f.n * d.n_arcs
    for b in list(basis) + list(basis2):
        if len(b) != width:
            raise PairingError(f"basis vector of length {len(b)}, expected {width}")
    cs1 = [as_coloring(d, f, b) for b in basis]
    cs2 = [as_coloring(d, f2, b) for b in basis2]
    for c in cs1:
        _check(d, c, "first")
    for c in cs2:
        _check(d, c, "second")
    rows = [[q_value(d, f, f2, form, component, a, b, check=False) for b in cs2] for a in cs1]
    ring = form.ring
    gram = Matrix(ring, rows, ncols=len(cs2))
    square = gram.nrows == gram.ncols
    sym = square and gram == gram.transpose()
    skew = square and gram == -gram.transpose()
    herm = square and gram.involute() == gram.transpose()
    det = gram.det() if square else None
    try:
        rank = flat_rank(gram) if gram.nrows and gram.ncols else 0
    except UnsupportedRing:
        rank = None
    diag = any(_is_diagonal([ring.convert(a) for a in v], f.n) for v in list(basis) + list(basis2))
    return PairingReport(component, gram, ring, [tuple(b) for b in basis], [tuple(b) for b in basis2],
                         sym, skew, herm, det, rank, diag)


# ---------------------------------------------------------------------------
# the quandle 2-cocycle and the state sum


def phi_cocycle(psi: BoundForm) -> Callable:
    """``phi((y1, g1), (y2, g2)) = psi(y1, y2·(1 - g2^-1))``; colors as (vector, matrix) pairs."""

    def phi(a, b):
        y1, _g1 = a
        y2, g2 = b
        g2i = g2.inverse() if not isinstance(b, _WithInverse) else b.inv
        return psi(y1, vsub(y2, vecmat(y2, g2i)))

    return phi


class _WithInverse(tuple):
    """A (vector, matrix) color carrying the matrix inverse, to skip recomputation."""

    def __new__(cls, x, g, inv):
        obj = super().__new__(cls, (x, g))
        obj.inv = inv
        return obj


def state_sum(d: LinkDiagram, c: Coloring, phi: Callable, zero: RingElem) -> RingElem:
    """``sum over crossings of sign * phi(C(source), C(over))``."""
    idx = d._positions()
    total = zero
    for cr in d.crossings:
        s, o = idx[cr.source], idx[cr.over]
        term = phi(_WithInverse(c.x[s], c.z[s], c.z_inv[s]), _WithInverse(c.x[o], c.z[o], c.z_inv[o]))
        total = total + term if cr.sign > 0 else total - term
    return total


def cocycle_invariant(d: LinkDiagram, colorings: Sequence[Coloring], phi: Callable, zero: RingElem,
                      guard: int = 10 ** 6) -> dict[str, int]:
    """Multiset ``{state_sum(C)}`` over the given colorings, as value string -> multiplicity."""
    if len(colorings) > guard:
        raise PairingError(f"{len(colorings)} colorings exceed the guard {guard}")
    out: dict[str, int] = {}
    for c in colorings:
        key = str(state_sum(d, c, phi, zero))
        out[key] = out.get(key, 0) + 1
    return dict(sorted(out.items()))


def diagonal_correction(d: LinkDiagram, c: Coloring, psi: BoundForm) -> RingElem:
    """``sum sign * psi(y, y·(1 - h^-1))`` over all crossings: state sum minus total diagonal Q."""
    idx = d._positions()
    total = psi.ring.zero()
    for cr in d.crossings:
        o = idx[cr.over]
        y = c.x[o]
        term = psi(y, vsub(y, vecmat(y, c.z_inv[o])))
        total = total + term if cr.sign > 0 else total - term
    return total


# ---------------------------------------------------------------------------
# torus links T(m, m)


def _prod(zs: Sequence[Matrix], start: int, stop: int, ident: Matrix) -> Matrix:
    """``z_start z_(start+1) ... z_stop`` with 1-based indices taken mod m; empty if stop < start."""
    m = len(zs)
    out = ident
    for j in range(start, stop + 1):
        out = out @ zs[(j - 1) % m]
    return out


def torus_gamma(zs: Sequence[Matrix], x: Sequence[Vector]) -> list[Vector]:
    """Left sides of the per-component closing equations for T(m, m).

    Component ``l`` starts on long arc ``l`` and passes under arcs ``l+1 .. l+m-1``;
    closing up gives ``(x_(l-1) - x_l) + sum_j (x_j - x_(j+1))·z_(j+1)...z_(l+m-1)``.
    """
    m = len(zs)
    ident = Matrix.identity(zs[0].ring, zs[0].nrows)
    X = lambda i: x[(i - 1) % m]  # noqa: E731
    out = []
    for ell in range(1, m + 1):
        acc = vsub(X(ell - 1), X(ell))
        for j in range(ell, ell + m - 1):
            acc = tuple(a + b for a, b in zip(acc, vecmat(vsub(X(j), X(j + 1)), _prod(zs, j + 1, ell + m - 1, ident))))
        out.append(acc)
    return out


def torus_q(m: int, zs: Sequence[Matrix], psi: BoundForm, component: int,
            x: Sequence[Vector], y2: Sequence[Vector], check: bool = True) -> RingElem:
    """Closed form of ``Q_l`` on T(m, m) in terms of the long-arc colors; ``component`` is 1-based."""
    if len(zs) != m or len(x) != m or len(y2) != m:
        raise PairingError("torus data must have length m")
    if check:
        for name, v in (("first", x), ("second", y2)):
            if any(a.terms for g in torus_gamma(zs, v) for a in g):
                raise PairingError(f"{name} vector is not in the kernel of the torus coloring map")
    ident = Matrix.identity(zs[0].ring, zs[0].nrows)
    X = lambda i: x[(i - 1) % m]  # noqa: E731
    Y = lambda i: y2[(i - 1) % m]  # noqa: E731
    ell = component
    total = psi.ring.zero()
    for k in range(1, m):
        left = tuple(psi.ring.zero() for _ in range(zs[0].nrows))
        for j in range(1, k + 1):
            p = _prod(zs, j + ell, k + ell - 1, ident)
            left = tuple(a + b for a, b in zip(left, vecmat(vsub(X(j + ell - 1), X(j + ell)), p)))
        yk = Y(k + ell)
        zi = zs[(k + ell - 1) % m].inverse()
        total = total + psi(left, vsub(yk, vecmat(yk, zi)))
    return total


def torus_long_arc_colors(d: LinkDiagram, c: Coloring) -> list[Vector]:
    """Colors of arcs ``1 .. m`` (the long arcs) of a built-in T(m, m) diagram."""
    idx = d._positions()
    return [c.x[idx[a]] for a in range(1, d.n_components + 1)]


@dataclass
class SplittingReport:
    m: int
    diagonal_in_kernel: bool
    kernel_dim: int
    complement_dim: int
    module_dim: int
    split: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def torus_splitting_check(m: int, zs: Sequence[Matrix]) -> SplittingReport:
    """Check that the diagonal ``M -> Ker`` splits, with the slice ``x_1 = 0`` as complement."""
    from .exactalg import flat_kernel

    if len(zs) != m:
        raise PairingError("need m matrices")
    ring = zs[0].ring
    n = zs[0].nrows
    ident = Matrix.identity(ring, n)
    if _prod(zs, 1, m, ident) != ident:
        raise PairingError("hypothesis violated: z_1 ... z_m is not the identity")
    # Assemble the torus map column by column on unit vectors.
    cols = []
    for a in range(m):
        for i in range(n):
            x = [tuple(ring.zero() for _ in range(n)) for _ in range(m)]
            e = [ring.zero()] * n
            e[i] = ring.one()
            x[a] = tuple(e)
            cols.append([c for g in torus_gamma(zs, x) for c in g])
    gam = Matrix.from_columns(ring, cols, nrows=m * n) if cols else Matrix(ring, [], ncols=0)
    full = flat_kernel(gam)
    sl = [[ring.one() if (r == c) else ring.zero() for c in range(m * n)] for r in range(n)]
    red = flat_kernel(Matrix(ring, gam.entries + sl, ncols=m * n))
    k = ring.rank_over_coefficients
    diag_ok = True
    for i in range(n):
        e = [ring.zero()] * n
        e[i] = ring.one()
        if any(a.terms for g in torus_gamma(zs, [tuple(e)] * m) for a in g):
            diag_ok = False
    mod_dim = n * k
    return SplittingReport(m, diag_ok, full.dim, red.dim, mod_dim, diag_ok and full.dim == red.dim + mod_dim)


def scalar_torus_reps(ring: Ring, zs: Sequence) -> list[Matrix]:
    return [Matrix(ring, [[ring.convert(z)]]) for z in zs]


def scale_vector(c: RingElem, v: Sequence[RingElem]) -> Vector:
    return vscale(c, v)


# ---------------------------------------------------------------------------
# invariant forms


@dataclass
class InvariantForms:
    """Gram matrices ``B`` with ``conj(h) B h^T = B`` for every generator image ``h``."""

    ring: Ring
    n: int
    basis: list[Matrix]
    reason: str = ""

    @property
    def dim(self) -> int:
        """Dimension over the coefficient ring."""
        return len(self.basis)


def invariant_forms(f: Representation) -> InvariantForms:
    """Solve the invariance equations for the ``n*n`` entries of ``B``.

    A ring that the involution does not preserve carries no sesquilinear forms
    at all; that case returns an empty basis with a reason.
    """
    from .exactalg import flat_kernel

    ring, n = f.ring, f.n
    if not ring.is_self_conjugate():
        return InvariantForms(ring, n, [], "the involution does not preserve the defining ideal")
    rows = []
    for h in f.images:
        hb = h.involute()
        for i in range(n):
            for j in range(n):
                row = [ring.zero()] * (n * n)
                for a in range(n):
                    if not hb[i, a].terms:
                        continue
                    for b in range(n):
                        row[a * n + b] = row[a * n + b] + hb[i, a] * h[j, b]
                row[i * n + j] = row[i * n + j] - 1
                rows.append(row)
    k = flat_kernel(Matrix(ring, rows, ncols=n * n))
    basis = [Matrix(ring, [list(v[i * n:(i + 1) * n]) for i in range(n)]) for v in k.ring_vectors()]
    return InvariantForms(ring, n, basis)
