"""Colorings by the product quandle ``M x G`` over a representation.

The quandle operation is ``(a, g) ◁ (b, h) = ((a - b)·h + b, h^-1 g h)`` with
``M = R^n`` as row vectors and ``G`` acting by right multiplication.  Linear
maps are stored as matrices acting on column vectors, so the right action by
``h`` appears as ``h^T``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .diagram import Crossing, LinkDiagram, WirtingerPresentation, wirtinger
from .exactalg import Matrix, NotInvertible, Ring, RingElem, flat_kernel
from .exactalg.linalg import FlatKernel

Vector = tuple[RingElem, ...]


class RepresentationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# row-vector helpers


def vecmat(x: Sequence[RingElem], h: Matrix) -> Vector:
    """Row vector times matrix."""
    ring = h.ring
    out = []
    for j in range(h.ncols):
        acc = ring.zero()
        for i, xi in enumerate(x):
            hij = h.entries[i][j]
            if xi.terms and hij.terms:
                acc = acc + xi * hij
        out.append(acc)
    return tuple(out)


def vadd(x: Sequence[RingElem], y: Sequence[RingElem]) -> Vector:
    return tuple(a + b for a, b in zip(x, y))


def vsub(x: Sequence[RingElem], y: Sequence[RingElem]) -> Vector:
    return tuple(a - b for a, b in zip(x, y))


def vscale(c: RingElem, x: Sequence[RingElem]) -> Vector:
    return tuple(c * a for a in x)


def quandle_op(a: Vector, g: Matrix, b: Vector, h: Matrix, h_inv: Matrix) -> tuple[Vector, Matrix]:
    return vadd(vecmat(vsub(a, b), h), b), h_inv @ g @ h


# ---------------------------------------------------------------------------
# representations


@dataclass(frozen=True, eq=False)
class Representation:
    """Images ``f(m_arc)`` of the arc meridians, in diagram arc order."""

    ring: Ring
    n: int
    images: tuple[Matrix, ...]
    rho: tuple[tuple[int, ...], ...] | None = None
    t_vars: tuple[str, ...] = ("t",)
    inverses: tuple[Matrix, ...] = field(default=(), repr=False)

    def __post_init__(self):
        for m in self.images:
            if m.shape != (self.n, self.n):
                raise RepresentationError(f"generator image has shape {m.shape}, expected {(self.n, self.n)}")
        if not self.inverses:
            invs = []
            for k, m in enumerate(self.images):
                try:
                    invs.append(m.inverse())
                except NotInvertible as exc:
                    raise RepresentationError(f"image of generator {k + 1} is singular: {exc}") from exc
            object.__setattr__(self, "inverses", tuple(invs))

    @property
    def identity(self) -> Matrix:
        return Matrix.identity(self.ring, self.n)

    def change_ring(self, ring: Ring) -> "Representation":
        return Representation(ring, self.n, tuple(m.change_ring(ring) for m in self.images), self.rho,
                              self.t_vars, tuple(m.change_ring(ring) for m in self.inverses))

    def map_entries(self, fn, ring: Ring) -> "Representation":
        return Representation(ring, self.n, tuple(m.map(fn, ring) for m in self.images), self.rho, self.t_vars)

    def twisted(self) -> "Representation":
        """``rho ⊗ f``: scale each image by ``prod t_i^{rho_i}``."""
        if self.rho is None:
            return self
        imgs = []
        for m, weights in zip(self.images, self.rho):
            scale = self.ring.one()
            for v, w in zip(self.t_vars, weights):
                scale = scale * self.ring.gen(v) ** w
            imgs.append(m.scale(scale))
        return Representation(self.ring, self.n, tuple(imgs), None, self.t_vars)

    def conjugate_by(self, g: Matrix) -> "Representation":
        """``g^-1 f g``."""
        gi = g.inverse()
        return Representation(self.ring, self.n, tuple(gi @ m @ g for m in self.images), self.rho, self.t_vars)

    def evaluate(self, word) -> Matrix:
        return word.evaluate(self.images, self.inverses, self.identity)

    @classmethod
    def from_generators(cls, d: LinkDiagram, ring: Ring, gens: Mapping[int, Matrix], **kw) -> "Representation":
        """Extend images given on some arcs to all arcs using the crossing relations."""
        known: dict[int, Matrix] = {a: m if isinstance(m, Matrix) else Matrix(ring, m) for a, m in gens.items()}
        for a in known:
            if a not in d.arcs:
                raise RepresentationError(f"generator given for unknown arc {a}")
        invs: dict[int, Matrix] = {}

        def inv(a):
            if a not in invs:
                try:
                    invs[a] = known[a].inverse()
                except NotInvertible as exc:
                    raise RepresentationError(f"image of arc {a} is singular") from exc
            return invs[a]

        changed = True
        while changed and len(known) < d.n_arcs:
            changed = False
            for c in d.crossings:
                if c.over not in known:
                    continue
                h = known[c.over]
                if c.source in known and c.target not in known:
                    known[c.target] = inv(c.over) @ known[c.source] @ h
                    changed = True
                elif c.target in known and c.source not in known:
                    known[c.source] = h @ known[c.target] @ inv(c.over)
                    changed = True
        missing = [a for a in d.arcs if a not in known]
        if missing:
            raise RepresentationError(f"cannot determine images of arcs {missing} from the given generators")
        n = next(iter(known.values())).nrows
        imgs = tuple(known[a].change_ring(ring) if known[a].ring != ring else known[a] for a in d.arcs)
        return cls(ring, n, imgs, **kw)


@dataclass
class RepDiagnostics:
    ok: bool
    violations: list[int]  # crossing indices whose relator fails
    meridian_dets: list[RingElem]  # det(id - f(m_l)) per component
    meridian_nonzero: list[bool]
    meridian_unit: list[bool]

    def summary(self) -> str:
        lines = ["relators: " + ("all satisfied" if self.ok else f"violated at crossings {self.violations}")]
        for k, (dv, nz, un) in enumerate(zip(self.meridian_dets, self.meridian_nonzero, self.meridian_unit)):
            lines.append(f"component {k + 1}: det(id - f(m)) = {dv} ({'unit' if un else 'nonzero' if nz else 'zero'})")
        return "\n".join(lines)


def check_rep(p: WirtingerPresentation | LinkDiagram, f: Representation,
              base_arcs: Sequence[int] | None = None) -> RepDiagnostics:
    """Evaluate every relator and the meridian determinants ``det(id - f(m_l))``.

    ``base_arcs`` are generator indices of the component meridians; when a
    diagram is passed they default to its base arcs.
    """
    if isinstance(p, LinkDiagram):
        d = p
        p = wirtinger(d)
        base_arcs = [d.arc_index(d.base_arc(k)) for k in range(d.n_components)]
    if p.generators != len(f.images):
        raise RepresentationError(f"presentation has {p.generators} generators, representation {len(f.images)}")
    ident = f.identity
    bad = [k for k, r in enumerate(p.relators) if f.evaluate(r) != ident]
    dets, nz, unit = [], [], []
    for g in base_arcs or []:
        dv = (ident - f.images[g]).det()
        dets.append(dv)
        nz.append(bool(dv.terms))
        unit.append(dv.is_unit() if dv.terms else False)
    return RepDiagnostics(not bad, bad, dets, nz, unit)


def require_valid(d: LinkDiagram, f: Representation) -> RepDiagnostics:
    diag = check_rep(d, f)
    if not diag.ok:
        c = d.crossings[diag.violations[0]]
        raise RepresentationError(f"Wirtinger relator violated at crossing {diag.violations[0] + 1} ({c})")
    return diag


# ---------------------------------------------------------------------------
# the coloring map


def build_gamma(d: LinkDiagram, f: Representation) -> Matrix:
    """Block matrix (one block row per crossing) whose kernel is the coloring module.

    Row block of a crossing encodes ``x_target - (x_source - y_over)·h - y_over = 0``.
    """
    n = f.n
    ring = f.ring
    idx = d._positions()
    rows = [[ring.zero()] * (n * d.n_arcs) for _ in range(n * len(d.crossings))]
    ident = f.identity

    def put(r0, arc, block: Matrix):
        c0 = idx[arc] * n
        for i in range(n):
            row = rows[r0 + i]
            for j in range(n):
                b = block.entries[i][j]
                if b.terms:
                    row[c0 + j] = row[c0 + j] + b

    for k, c in enumerate(d.crossings):
        h = f.images[idx[c.over]]
        hT = h.transpose()
        r0 = k * n
        put(r0, c.target, ident)
        put(r0, c.source, -hT)
        put(r0, c.over, hT - ident)
    return Matrix(ring, rows, ncols=n * d.n_arcs)


@dataclass
class ColoringModule:
    diagram: LinkDiagram
    rep: Representation
    gamma: Matrix
    full: FlatKernel
    red: FlatKernel
    n: int

    @property
    def ring(self) -> Ring:
        return self.rep.ring

    @property
    def k(self) -> int:
        return self.ring.rank_over_coefficients

    @property
    def full_basis(self) -> list[Vector]:
        return [tuple(v) for v in self.full.ring_vectors()]

    @property
    def red_basis(self) -> list[Vector]:
        return [tuple(v) for v in self.red.ring_vectors()]

    @property
    def diag_basis(self) -> list[Vector]:
        ring = self.ring
        out = []
        for i in range(self.n):
            e = [ring.zero()] * self.n
            e[i] = ring.one()
            out.append(tuple(e) * self.diagram.n_arcs)
        return out

    @property
    def dim_full(self) -> int:
        return self.full.dim

    @property
    def dim_red(self) -> int:
        return self.red.dim

    @property
    def dim_module(self) -> int:
        return self.n * self.k

    def ring_rank(self, dim: int) -> tuple[int, bool]:
        """Rank over the ring when the coefficient dimension is divisible by k."""
        return (dim // self.k, True) if dim % self.k == 0 else (dim, False)


def slice_matrix(d: LinkDiagram, n: int, ring: Ring) -> Matrix:
    """Rows selecting the color of the first component's base arc."""
    g = d.arc_index(d.base_arc(0))
    rows = []
    for i in range(n):
        r = [ring.zero()] * (n * d.n_arcs)
        r[g * n + i] = ring.one()
        rows.append(r)
    return Matrix(ring, rows, ncols=n * d.n_arcs)


def colorings(d: LinkDiagram, f: Representation, validate: bool = True) -> ColoringModule:
    """Kernel of the coloring map split as (reduced part) ⊕ (diagonal part).

    The reduced part is the slice where the base arc of the first component has
    color zero; it meets the diagonal trivially and together they span.
    """
    if validate:
        require_valid(d, f)
    gamma = build_gamma(d, f)
    full = flat_kernel(gamma)
    if d.n_arcs == 0:
        red = full
    else:
        sl = slice_matrix(d, f.n, f.ring)
        stacked = Matrix(f.ring, gamma.entries + sl.entries, ncols=gamma.ncols)
        red = flat_kernel(stacked)
    return ColoringModule(d, f, gamma, full, red, f.n)


# ---------------------------------------------------------------------------
# colorings as assignments


@dataclass(frozen=True)
class Coloring:
    """Arc colors in diagram arc order: vectors ``x`` and group elements ``z``."""

    x: tuple[Vector, ...]
    z: tuple[Matrix, ...]
    z_inv: tuple[Matrix, ...]


def split_vector(v: Sequence[RingElem], n: int) -> tuple[Vector, ...]:
    return tuple(tuple(v[i:i + n]) for i in range(0, len(v), n))


def as_coloring(d: LinkDiagram, f: Representation, v: Sequence) -> Coloring:
    ring = f.ring
    v = [ring.convert(a) for a in v]
    if len(v) != f.n * d.n_arcs:
        raise ValueError(f"vector length {len(v)} does not match {d.n_arcs} arcs of rank {f.n}")
    return Coloring(split_vector(v, f.n), f.images, f.inverses)


def from_arc_colors(f: Representation, xs: Sequence[Sequence]) -> Coloring:
    ring = f.ring
    return Coloring(tuple(tuple(ring.convert(a) for a in x) for x in xs), f.images, f.inverses)


def as_vector(c: Coloring) -> Vector:
    return tuple(a for x in c.x for a in x)


def first_failure(d: LinkDiagram, c: Coloring) -> Crossing | None:
    idx = d._positions()
    for cr in d.crossings:
        o, s, t = idx[cr.over], idx[cr.source], idx[cr.target]
        x, g = quandle_op(c.x[s], c.z[s], c.x[o], c.z[o], c.z_inv[o])
        if x != c.x[t] or g != c.z[t]:
            return cr
    return None


def verify_coloring(d: LinkDiagram, c: Coloring) -> bool:
    return first_failure(d, c) is None


def extend_coloring(d: LinkDiagram, f: Representation, partial: Mapping[int, Sequence]) -> Coloring:
    """Propagate colors given on some arcs through the crossing relations."""
    ring = f.ring
    idx = d._positions()
    known = {a: tuple(ring.convert(v) for v in x) for a, x in partial.items()}
    changed = True
    while changed and len(known) < d.n_arcs:
        changed = False
        for cr in d.crossings:
            if cr.over not in known:
                continue
            y = known[cr.over]
            h = f.images[idx[cr.over]]
            hi = f.inverses[idx[cr.over]]
            if cr.source in known and cr.target not in known:
                known[cr.target] = vadd(vecmat(vsub(known[cr.source], y), h), y)
                changed = True
            elif cr.target in known and cr.source not in known:
                known[cr.source] = vadd(vecmat(vsub(known[cr.target], y), hi), y)
                changed = True
    missing = [a for a in d.arcs if a not in known]
    if missing:
        raise ValueError(f"colors of arcs {missing} are not determined")
    return Coloring(tuple(known[a] for a in d.arcs), f.images, f.inverses)


def conjugate_coloring(c: Coloring, g: Matrix) -> Coloring:
    """``(x, h) -> (x·g, g^-1 h g)``: a coloring over ``g^-1 f g``."""
    gi = g.inverse()
    z = tuple(gi @ h @ g for h in c.z)
    zi = tuple(gi @ h @ g for h in c.z_inv)
    return Coloring(tuple(vecmat(x, g) for x in c.x), z, zi)


def _monomial_multiples(ring: Ring, v: Sequence[RingElem]) -> list[list[RingElem]]:
    """``b·v`` for each non-constant element ``b`` of the ring's basis over its coefficients."""
    out = []
    for b in ring.flat_basis()[1:]:
        e = [0] * ring.nvars
        for (var, _), k in zip(ring.moduli, b):
            e[ring.index(var)] = k
        mono = ring.from_terms({tuple(e): 1})
        out.append([mono * a for a in v])
    return out


def ring_span_rank(ring: Ring, vectors: Sequence[Sequence[RingElem]]) -> int:
    """Coefficient-ring rank of the ring-span of ``vectors``."""
    from .exactalg import span_rank

    cols = []
    for v in vectors:
        cols.append(list(v))
        cols.extend(_monomial_multiples(ring, v))
    return span_rank(cols, ring) if cols else 0


def ring_basis(cm: ColoringModule) -> list[Vector]:
    """Reduced basis vectors that stay independent over the ring (greedy, in basis order)."""
    ring = cm.ring
    chosen: list[Vector] = []
    rank = 0
    for v in cm.red_basis:
        r2 = ring_span_rank(ring, chosen + [v])
        if r2 > rank:
            chosen.append(v)
            rank = r2
        if rank >= cm.dim_red:
            break
    return chosen
