"""Independent checks: brute-force colorings over finite quandles and 1-cocycles.

The finite side works with plain integers mod ``p`` (modules are flattened to
``F_p^k`` using the ring's multiplication matrices), so it shares no arithmetic
with the kernel computations it is compared against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .alexander import fox_derivative
from .coloring import Coloring, Representation, vecmat, vsub
from .diagram import LinkDiagram, WirtingerPresentation, longitude, meridian, wirtinger
from .exactalg import Matrix, RingElem, UnsupportedRing, flat_kernel, flat_rank

IntMat = tuple[tuple[int, ...], ...]


class GuardExceeded(RuntimeError):
    pass


class QuandleAxiomError(ValueError):
    pass


# ---------------------------------------------------------------------------
# integer linear algebra mod p


def _matmul(a: IntMat, b: IntMat, p: int) -> IntMat:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) % p for col in cols) for row in a)


def _vecmul(v: Sequence[int], m: IntMat, p: int) -> tuple[int, ...]:
    k = len(m[0]) if m else 0
    return tuple(sum(v[i] * m[i][j] for i in range(len(v))) % p for j in range(k))


def _identity(k: int) -> IntMat:
    return tuple(tuple(int(i == j) for j in range(k)) for i in range(k))


def _sub(a, b, p):
    return tuple((x - y) % p for x, y in zip(a, b))


def _add(a, b, p):
    return tuple((x + y) % p for x, y in zip(a, b))


def _flatten_matrix(m: Matrix) -> IntMat:
    """Matrix of ``x -> x·m`` on ``F_p^(n·k)`` where ``k`` is the ring's rank over ``F_p``."""
    ring = m.ring
    basis = ring.flat_basis()
    k = len(basis)
    n = m.nrows
    rows = []
    for i in range(n):
        for b in range(k):
            # basis vector: monomial b in slot i
            unit = ring.unflatten([ring.coefficient_ring().one() if c == b else ring.coefficient_ring().zero()
                                   for c in range(k)])
            out = []
            for j in range(n):
                out.extend(int(c.constant_value()) for c in ring.flatten(unit * m.entries[i][j]))
            rows.append(tuple(out))
    return tuple(rows)


def _to_ring_vector(ring, n: int, v: Sequence[int]) -> tuple[RingElem, ...]:
    k = len(ring.flat_basis())
    cr = ring.coefficient_ring()
    return tuple(ring.unflatten([cr.from_base(c) for c in v[i * k:(i + 1) * k]]) for i in range(n))


def _from_ring_vector(ring, v: Sequence[RingElem]) -> tuple[int, ...]:
    return tuple(int(c.constant_value()) for x in v for c in ring.flatten(x))


# ---------------------------------------------------------------------------
# finite quandles


@dataclass
class FiniteQuandle:
    """Operation table on ``range(size)``; optionally the product ``M x G`` behind it."""

    table: list[list[int]]
    p: int = 0
    module_dim: int = 0
    group: list[IntMat] = field(default_factory=list)
    elements: list[tuple[tuple[int, ...], int]] = field(default_factory=list)
    check: bool = True

    def __post_init__(self):
        if self.check:
            problems = quandle_axiom_failures(self.table)
            if problems:
                raise QuandleAxiomError("; ".join(problems[:5]))
        self._index = {e: i for i, e in enumerate(self.elements)}

    @property
    def size(self) -> int:
        return len(self.table)

    def op(self, a: int, b: int) -> int:
        return self.table[a][b]

    def index(self, m: Sequence[int], g: int) -> int:
        return self._index[(tuple(m), g)]

    @classmethod
    def product(cls, p: int, group: Sequence[IntMat], guard: int = 10 ** 6, check: bool = True) -> "FiniteQuandle":
        """``X = F_p^k x G`` with ``(a,g)◁(b,h) = ((a-b)h + b, h^-1 g h)``."""
        group = list(group)
        k = len(group[0])
        size = p ** k * len(group)
        if size * size > guard:
            raise GuardExceeded(f"operation table of size {size}^2 exceeds guard {guard}")
        gidx = {g: i for i, g in enumerate(group)}
        inv = [gidx[_inverse_in(g, group, p)] for g in group]
        conj = [[gidx[_matmul(_matmul(group[inv[h]], group[g], p), group[h], p)] for h in range(len(group))]
                for g in range(len(group))]
        vecs = list(itertools.product(range(p), repeat=k))
        elements = [(v, g) for v in vecs for g in range(len(group))]
        pos = {e: i for i, e in enumerate(elements)}
        table = []
        for a, g in elements:
            row = []
            for b, h in elements:
                m = _add(_vecmul(_sub(a, b, p), group[h], p), b, p)
                row.append(pos[(m, conj[g][h])])
            table.append(row)
        return cls(table, p, k, group, elements, check)

    @classmethod
    def from_representation(cls, f: Representation, guard: int = 10 ** 6, check: bool = True) -> "FiniteQuandle":
        ring = f.ring
        if ring.base.kind != "GF" or ring.free_names:
            raise UnsupportedRing(f"finite quandles need a finite ring, got {ring!r}")
        p = ring.base.p
        gens = [_flatten_matrix(m) for m in f.images]
        return cls.product(p, generated_group(gens, p, guard), guard, check)

    def group_index(self, m: IntMat) -> int:
        return self.group.index(m)


def _inverse_in(g: IntMat, group: Sequence[IntMat], p: int) -> IntMat:
    ident = _identity(len(g))
    for h in group:
        if _matmul(g, h, p) == ident:
            return h
    raise ValueError("group is not closed under inverses")


def generated_group(gens: Sequence[IntMat], p: int, guard: int = 10 ** 6) -> list[IntMat]:
    """Closure of the generators under multiplication (finite, so inverses come for free)."""
    ident = _identity(len(gens[0]))
    seen = {ident}
    order = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = _matmul(g, s, p)
                if h not in seen:
                    seen.add(h)
                    order.append(h)
                    nxt.append(h)
                    if len(order) > guard:
                        raise GuardExceeded("generated group is too large")
        frontier = nxt
    return order


def quandle_axiom_failures(table: Sequence[Sequence[int]]) -> list[str]:
    """Exhaustive check of idempotence, invertible right translations and self-distributivity."""
    n = len(table)
    out = []
    for a in range(n):
        if table[a][a] != a:
            out.append(f"{a}◁{a} = {table[a][a]}")
    for b in range(n):
        col = {table[a][b] for a in range(n)}
        if len(col) != n:
            out.append(f"right translation by {b} is not a bijection")
    for a in range(n):
        for b in range(n):
            ab = table[a][b]
            for c in range(n):
                if table[ab][c] != table[table[a][c]][table[b][c]]:
                    out.append(f"self-distributivity fails at ({a}, {b}, {c})")
                    return out
    return out


# ---------------------------------------------------------------------------
# enumeration


def enumerate_colorings(d: LinkDiagram, X: FiniteQuandle, group_labels: Sequence[int],
                        guard: int = 10 ** 8) -> list[tuple[int, ...]]:
    """All colorings (element indices in arc order) lying over the given group labels.

    Arcs are assigned in component order; after each choice the crossing rule
    forces whatever it can, and a crossing with all three arcs known is checked.
    """
    idx = d._positions()
    order = [a for comp in d.components for a, _ in d.path(d.components.index(comp))] or list(d.arcs)
    order += [a for a in d.arcs if a not in order]
    m_size = X.p ** X.module_dim
    if m_size ** len(d.components) > guard:
        raise GuardExceeded("too many base-color assignments")
    vecs = list(itertools.product(range(X.p), repeat=X.module_dim))
    checks = 0
    results = []

    def propagate(assign: dict[int, int]) -> dict[int, int] | None:
        nonlocal checks
        assign = dict(assign)
        changed = True
        while changed:
            changed = False
            for c in d.crossings:
                checks += 1
                if checks > guard:
                    raise GuardExceeded(f"more than {guard} crossing checks")
                o, s, t = idx[c.over], idx[c.source], idx[c.target]
                if o in assign and s in assign:
                    val = X.op(assign[s], assign[o])
                    if t in assign:
                        if assign[t] != val:
                            return None
                    else:
                        assign[t] = val
                        changed = True
        return assign

    def search(assign: dict[int, int]):
        assign = propagate(assign)
        if assign is None:
            return
        free = [idx[a] for a in order if idx[a] not in assign]
        if not free:
            results.append(tuple(assign[i] for i in range(d.n_arcs)))
            return
        i = free[0]
        for v in vecs:
            search({**assign, i: X.index(v, group_labels[i])})

    search({})
    return sorted(results)


def group_labels(X: FiniteQuandle, f: Representation) -> list[int]:
    return [X.group_index(_flatten_matrix(m)) for m in f.images]


def kernel_size(d: LinkDiagram, f: Representation) -> int:
    """Number of colorings predicted by the flattened kernel of the coloring matrix."""
    from .coloring import build_gamma
    k = flat_kernel(build_gamma(d, f))
    return f.ring.base.p ** k.dim


# ---------------------------------------------------------------------------
# brute-force pairing


def brute_q(d: LinkDiagram, X: FiniteQuandle, X2: FiniteQuandle, form: IntMat, component: int,
            c1: Sequence[int], c2: Sequence[int]) -> tuple[int, ...]:
    """Crossing sum ``sum eps psi(x_src - y_o, y'_o (1 - h'_o^-1))`` over ``F_p`` (trivial involution).

    ``form`` is the Gram matrix of ``psi`` on the flattened modules; the result
    is the scalar ``conj(u) B v^T`` as a 1-tuple.
    """
    p = X.p
    idx = d._positions()
    comp = set(d.components[component])
    total = 0
    for c in d.crossings:
        if c.under_in not in comp:
            continue
        s, o = idx[c.source], idx[c.over]
        x_src, _ = X.elements[c1[s]]
        y_o, _ = X.elements[c1[o]]
        y2_o, h2 = X2.elements[c2[o]]
        h = X2.group[h2]
        h_inv = _inverse_in(h, X2.group, p)
        u = _sub(x_src, y_o, p)
        v = _sub(y2_o, _vecmul(y2_o, h_inv, p), p)
        val = sum(u[i] * form[i][j] * v[j] for i in range(len(u)) for j in range(len(v)))
        total += c.sign * val
    return (total % p,)


def to_coloring(X: FiniteQuandle, f: Representation, c: Sequence[int]) -> Coloring:
    ring = f.ring
    xs = tuple(_to_ring_vector(ring, f.n, X.elements[i][0]) for i in c)
    return Coloring(xs, f.images, f.inverses)


def form_matrix(bound_gram: Matrix) -> IntMat:
    """Flattened Gram matrix of a form over a ring with no free variables and no moduli."""
    return tuple(tuple(int(e.constant_value()) for e in row) for row in bound_gram.entries)


# ---------------------------------------------------------------------------
# 1-cocycles (relative and absolute)


@dataclass
class CocycleSpace:
    dim_z_rel: int
    dim_b_rel: int
    dim_z_abs: int
    dim_b_abs: int
    z_rel_basis: list[list[RingElem]]
    n: int
    generators: int
    components: int

    @property
    def dim_h_rel(self) -> int:
        return self.dim_z_rel - self.dim_b_rel

    @property
    def dim_h_abs(self) -> int:
        return self.dim_z_abs - self.dim_b_abs

    def to_dict(self) -> dict:
        return {"Z1_rel": self.dim_z_rel, "B1_rel": self.dim_b_rel, "H1_rel": self.dim_h_rel,
                "Z1_abs": self.dim_z_abs, "B1_abs": self.dim_b_abs, "H1_abs": self.dim_h_abs}


def _word_row_blocks(w, f: Representation, generators: int) -> list[Matrix]:
    """Blocks ``F(dw/dx_j)^T`` so that ``d(w)^T = sum_j block_j d(x_j)^T``."""
    zero = Matrix.zeros(f.ring, f.n, f.n)
    out = []
    for j in range(generators):
        dw = fox_derivative(w, j)
        out.append(zero if dw.is_zero() else dw.evaluate(f).transpose())
    return out


def _boundary_rows(w, comp: int, f: Representation, p: WirtingerPresentation, ncomp: int) -> list[Matrix]:
    """``d(w) - (a - a f(w)) = 0`` as a block row over ``(d_1..d_N, a_1..a_c)``."""
    blocks = _word_row_blocks(w, f, p.generators)
    fw = f.evaluate(w)
    zero = Matrix.zeros(f.ring, f.n, f.n)
    aux = [zero] * ncomp
    aux[comp] = (fw - f.identity).transpose()
    return blocks + aux


def cocycle_space(d: LinkDiagram, f: Representation, p: WirtingerPresentation | None = None) -> CocycleSpace:
    """Relative and absolute 1-cocycles and coboundaries as linear systems.

    Relative cocycles are derivations ``d`` on the generators together with one
    vector ``a_l`` per component, with ``d(w) = a_l - a_l f(w)`` for the
    meridian and longitude of component ``l``.
    """
    p = p or wirtinger(d)
    ring, n = f.ring, f.n
    N, c = p.generators, d.n_components
    zero = Matrix.zeros(ring, n, n)
    ident = Matrix.identity(ring, n)
    rel_rows = [_word_row_blocks(r, f, N) + [zero] * c for r in p.relators]
    bnd_rows = []
    for k in range(c):
        bnd_rows.append(_boundary_rows(meridian(d, k), k, f, p, c))
        bnd_rows.append(_boundary_rows(longitude(d, k), k, f, p, c))
    full = Matrix.block(ring, rel_rows + bnd_rows) if rel_rows + bnd_rows else None
    ncols = n * (N + c)
    if full is None:
        full = Matrix(ring, [], ncols=ncols)
    z_rel = flat_kernel(full)
    # coboundaries: a -> (a - a f(x_j))_j, (a, ..., a)
    cob_rel = Matrix.block(ring, [[(ident - f.images[j]).transpose()] for j in range(N)] + [[ident]] * c)
    b_rel = flat_rank(cob_rel)
    abs_rows = [_word_row_blocks(r, f, N) for r in p.relators]
    a_mat = Matrix.block(ring, abs_rows) if abs_rows else Matrix(ring, [], ncols=n * N)
    z_abs = flat_kernel(a_mat)
    cob_abs = Matrix.block(ring, [[(ident - f.images[j]).transpose()] for j in range(N)])
    b_abs = flat_rank(cob_abs)
    return CocycleSpace(z_rel.dim, b_rel, z_abs.dim, b_abs, z_rel.flat_vectors, n, N, c)


# ---------------------------------------------------------------------------
# colorings <-> cocycles


@dataclass(frozen=True)
class CocycleTuple:
    derivation: tuple[tuple[RingElem, ...], ...]  # d(x_j) per arc
    boundary: tuple[tuple[RingElem, ...], ...]  # a_l per component


def kappa(x: Sequence[RingElem], g: Matrix) -> tuple[RingElem, ...]:
    """Module part of ``(x·g - x, g)``."""
    return vsub(vecmat(x, g), x)


def kappa_translate(d: LinkDiagram, c: Coloring) -> CocycleTuple:
    der = tuple(kappa(x, z) for x, z in zip(c.x, c.z))
    idx = d._positions()
    bnd = tuple(tuple(-a for a in c.x[idx[d.base_arc(k)]]) for k in range(d.n_components))
    return CocycleTuple(der, bnd)


def kappa_inverse(d: LinkDiagram, f: Representation, cyc: CocycleTuple) -> Coloring:
    """Recover colors by walking each component from ``-a_l`` on its base arc.

    Passing under the over-arc ``o`` with sign ``e`` conjugates by ``m_o^e``,
    which acts on colors as ``x -> x·h - m`` for ``(m, h) = f~(m_o^e)``.
    """
    idx = d._positions()
    xs: dict[int, tuple[RingElem, ...]] = {}
    for k in range(d.n_components):
        base = d.base_arc(k)
        x = tuple(-a for a in cyc.boundary[k])
        xs[base] = x
        for arc, cr in d.path(k):
            o = idx[cr.over]
            h, hi = f.images[o], f.inverses[o]
            m = cyc.derivation[o]
            if cr.sign > 0:
                x = vsub(vecmat(x, h), m)
            else:
                x = vadd_neg(vecmat(x, hi), vecmat(m, hi))
            if cr.under_out == base:
                break
            xs[cr.under_out] = x
    return Coloring(tuple(xs[a] for a in d.arcs), f.images, f.inverses)


def vadd_neg(x, y):
    """``x + y`` (used for ``x h^-1 + m h^-1``)."""
    return tuple(a + b for a, b in zip(x, y))


def cocycle_residuals(d: LinkDiagram, f: Representation, cyc: CocycleTuple,
                      p: WirtingerPresentation | None = None) -> dict[str, list]:
    """Nonzero residuals of the relator, meridian and longitude conditions."""
    p = p or wirtinger(d)
    out: dict[str, list] = {"relators": [], "meridians": [], "longitudes": []}

    def value(w):
        total = [f.ring.zero()] * f.n
        for j, blk in enumerate(_word_row_blocks(w, f, p.generators)):
            col = blk.transpose()
            total = [a + b for a, b in zip(total, vecmat(cyc.derivation[j], col))]
        return tuple(total)

    for i, r in enumerate(p.relators):
        if any(value(r)):
            out["relators"].append(i)
    for k in range(d.n_components):
        a = cyc.boundary[k]
        for key, w in (("meridians", meridian(d, k)), ("longitudes", longitude(d, k))):
            target = vsub(a, vecmat(a, f.evaluate(w)))
            if value(w) != target:
                out[key].append(k)
    return out
