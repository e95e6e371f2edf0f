"""Fox calculus, twisted Alexander polynomials and the induced form on twisted Alexander modules.

Derivatives follow the right-handed rule ``d(uv)/dx = (du/dx) v + dv/dx``, so
the fundamental identity reads ``sum_j (x_j - 1) dw/dx_j = w - 1``.  Matrices
act on column vectors; a block of the Jacobian is ``F(dr_i/dx_j)^T`` where
``F`` is the twisted representation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .coloring import Representation, build_gamma, colorings, slice_matrix
from .diagram import GroupWord, LinkDiagram, WirtingerPresentation, wirtinger
from .exactalg import (
    Matrix,
    NotInvertible,
    Ring,
    RingElem,
    UnsupportedRing,
    flat_rank,
    normalize_unit,
    smith_normal_form,
)
from .exactalg.linalg import laurent_divmod
from .pairing import BoundForm, _bind, q_value


class AlexanderError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# the integral group ring of a free group


@dataclass(frozen=True)
class GroupRingElem:
    """Finite integer combination of reduced words."""

    terms: tuple[tuple[GroupWord, int], ...] = ()

    @classmethod
    def from_dict(cls, d: Mapping[GroupWord, int]) -> "GroupRingElem":
        clean = {}
        for w, c in d.items():
            w = w.reduced()
            clean[w] = clean.get(w, 0) + c
        return cls(tuple(sorted(((w, c) for w, c in clean.items() if c), key=lambda t: t[0].letters)))

    @classmethod
    def word(cls, w: GroupWord, c: int = 1) -> "GroupRingElem":
        return cls.from_dict({w: c})

    def as_dict(self) -> dict[GroupWord, int]:
        return dict(self.terms)

    def __add__(self, other: "GroupRingElem") -> "GroupRingElem":
        d = self.as_dict()
        for w, c in other.terms:
            d[w] = d.get(w, 0) + c
        return GroupRingElem.from_dict(d)

    def __neg__(self) -> "GroupRingElem":
        return GroupRingElem(tuple((w, -c) for w, c in self.terms))

    def __sub__(self, other: "GroupRingElem") -> "GroupRingElem":
        return self + (-other)

    def __mul__(self, other: "GroupRingElem") -> "GroupRingElem":
        d: dict[GroupWord, int] = {}
        for w1, c1 in self.terms:
            for w2, c2 in other.terms:
                w = (w1 * w2).reduced()
                d[w] = d.get(w, 0) + c1 * c2
        return GroupRingElem.from_dict(d)

    def is_zero(self) -> bool:
        return not self.terms

    def evaluate(self, f: Representation) -> Matrix:
        total = Matrix.zeros(f.ring, f.n, f.n)
        for w, c in self.terms:
            total = total + f.evaluate(w).scale(c)
        return total

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*[{w}]" if str(w) else f"{c}" for w, c in self.terms)


def fox_derivative(w: GroupWord, j: int) -> GroupRingElem:
    """``dw/dx_j`` for a 0-based generator index ``j``."""
    letters = list(w.letters)
    acc: dict[GroupWord, int] = {}
    for i, (g, e) in enumerate(letters):
        if g != j:
            continue
        if e > 0:
            tail = GroupWord(tuple(letters[i + 1:]))
            acc[tail.reduced()] = acc.get(tail.reduced(), 0) + 1
        else:
            tail = GroupWord(tuple(letters[i:]))
            acc[tail.reduced()] = acc.get(tail.reduced(), 0) - 1
    return GroupRingElem.from_dict(acc)


def fundamental_identity(w: GroupWord, generators: int) -> GroupRingElem:
    """``sum_j (x_j - 1) dw/dx_j - (w - 1)``; zero for every word."""
    one = GroupRingElem.word(GroupWord())
    total = -(GroupRingElem.word(w) - one)
    for j in range(generators):
        dj = fox_derivative(w, j)
        if dj.is_zero():
            continue
        total = total + (GroupRingElem.word(GroupWord.gen(j)) - one) * dj
    return total


def fox_jacobian(p: WirtingerPresentation, f: Representation) -> Matrix:
    """Block matrix with block ``(i, j) = F(dr_i/dx_j)^T`` where ``F`` is ``rho ⊗ f``."""
    F = f.twisted()
    n = f.n
    ring = f.ring
    rows = [[ring.zero()] * (n * p.generators) for _ in range(n * len(p.relators))]
    for i, r in enumerate(p.relators):
        for j in range(p.generators):
            dr = fox_derivative(r, j)
            if dr.is_zero():
                continue
            blk = dr.evaluate(F).transpose()
            for a in range(n):
                for b in range(n):
                    rows[i * n + a][j * n + b] = blk.entries[a][b]
    return Matrix(ring, rows, ncols=n * p.generators)


def chain_residual(p: WirtingerPresentation, f: Representation) -> Matrix:
    """``J @ stack_j (F(x_j) - 1)^T``; zero exactly when the boundary maps compose to zero."""
    F = f.twisted()
    J = fox_jacobian(p, f)
    ident = F.identity
    stack = Matrix.block(f.ring, [[(F.images[j] - ident).transpose()] for j in range(p.generators)]) \
        if p.generators else Matrix(f.ring, [], ncols=f.n)
    if not J.nrows:
        return Matrix(f.ring, [], ncols=f.n)
    return J @ stack


# ---------------------------------------------------------------------------
# exact division in one variable


def exact_divide(num: RingElem, den: RingElem, var: str) -> RingElem:
    """``num / den`` as Laurent polynomials in ``var``; coefficients in the other variables.

    The leading (or else trailing) coefficient of ``den`` must be a unit.
    Raises :class:`AlexanderError` when the remainder is nonzero.
    """
    ring = num.ring
    if not den.terms:
        raise AlexanderError("division by zero")
    if not num.terms:
        return ring.zero()
    t = ring.gen(var)
    dc = den.coefficients_in(var)
    lo_d, hi_d = min(dc), max(dc)
    for which in ("lead", "trail"):
        k = hi_d if which == "lead" else lo_d
        try:
            inv = dc[k].inverse()
        except NotInvertible:
            continue
        break
    else:
        raise AlexanderError(f"neither extreme coefficient of {den} in {var} is a unit")
    rem = num
    q = ring.zero()
    span_d = hi_d - lo_d
    for _ in range(10_000):
        if not rem.terms:
            return q
        rc = rem.coefficients_in(var)
        lo_r, hi_r = min(rc), max(rc)
        if hi_r - lo_r < span_d:
            break
        if which == "lead":
            c = rc[hi_r] * inv
            term = c * t ** (hi_r - hi_d)
        else:
            c = rc[lo_r] * inv
            term = c * t ** (lo_r - lo_d)
        q = q + term
        rem = rem - term * den
    raise AlexanderError(f"{den} does not divide {num} exactly (remainder {rem})")


# ---------------------------------------------------------------------------
# twisted Alexander polynomial


@dataclass
class AlexanderData:
    jacobian: Matrix
    restricted: Matrix
    numerator: RingElem
    denominator: RingElem
    delta: RingElem | None  # None when the quotient could not be formed exactly
    deleted: int  # arc label of the deleted generator
    deleted_relator: int  # 0-based crossing index

    @property
    def exact(self) -> bool:
        return self.delta is not None

    def to_dict(self) -> dict:
        return {
            "delta": None if self.delta is None else str(self.delta),
            "numerator": str(self.numerator),
            "denominator": str(self.denominator),
            "deleted_arc": self.deleted,
        }


def _relator_for(d: LinkDiagram, arc: int) -> int:
    for k, c in enumerate(d.crossings):
        if c.under_out == arc:
            return k
    raise AlexanderError(f"no crossing ends at arc {arc}")


def twisted_alexander(d: LinkDiagram, f: Representation, deleted: int | None = None,
                      var: str | None = None, normalize: bool = True) -> AlexanderData:
    """Wada's quotient ``det(J minus one column and one row block) / det(1 - F(x_deleted))``.

    ``deleted`` is an arc label (default: the first arc).  The relator removed is
    the one whose crossing has the deleted arc as its outgoing under-arc.
    """
    p = wirtinger(d)
    ring = f.ring
    n = f.n
    J = fox_jacobian(p, f)
    F = f.twisted()
    if d.n_arcs == 0:
        raise AlexanderError("empty diagram")
    if not d.crossings:
        one = ring.one()
        return AlexanderData(J, J, one, one, one, d.arcs[0], -1)
    deleted = d.arcs[0] if deleted is None else deleted
    g = d.arc_index(deleted)
    r = _relator_for(d, deleted)
    keep_rows = [i for i in range(J.nrows) if i // n != r]
    keep_cols = [j for j in range(J.ncols) if j // n != g]
    res = J.submatrix(keep_rows, keep_cols)
    num = res.det()
    den = (F.identity - F.images[g]).det()
    if not den.terms:
        raise AlexanderError(f"det(1 - F(x_{deleted})) vanishes")
    var = var or (f.t_vars[0] if f.t_vars and f.t_vars[0] in ring.names else None)
    delta = None
    if var is not None and var not in ring.designated:
        try:
            delta = exact_divide(num, den, var)
        except AlexanderError:
            delta = None
    elif den.is_unit():
        delta = num * den.inverse()
    if delta is not None and normalize:
        delta = canonical(delta, var)
    return AlexanderData(J, res, num, den, delta, deleted, r)


def canonical(a: RingElem, var: str | None = None) -> RingElem:
    """Unit normalization: shift free variables to exponent 0, unit leading coefficient.

    With ``var``, the result is made monic in ``var`` whenever its leading
    coefficient there is a unit.
    """
    try:
        a = normalize_unit(a)
    except (ZeroDivisionError, ArithmeticError):
        return a
    if var is None or not a.terms or var in a.ring.designated:
        return a
    coeffs = a.coefficients_in(var)
    lead = coeffs[max(coeffs)]
    if lead.is_unit() and not lead.is_one():
        a = a * lead.inverse()
        try:
            a = a * a.ring.gen(var) ** -min(a.coefficients_in(var))
        except ValueError:
            pass
    return a


def associates(a: RingElem, b: RingElem) -> bool:
    """Equal up to a unit: a signed monomial in free variables, or a quotient-ring unit."""
    if canonical(a) == canonical(b):
        return True
    if not a.terms or not b.terms:
        return a.terms == b.terms
    try:
        u = a * b.inverse()
    except NotInvertible:
        return False
    return u.is_unit()


# ---------------------------------------------------------------------------
# twisted Alexander module presentations


def laurent_gcd(a: RingElem, b: RingElem) -> RingElem:
    while b.terms:
        a, b = b, laurent_divmod(a, b)[1]
    return canonical(a)


def strip_factors(a: RingElem, inverted: Sequence[RingElem]) -> RingElem:
    """Remove from ``a`` every factor shared with the inverted elements."""
    if not a.terms:
        return a
    for den in inverted:
        while True:
            g = laurent_gcd(a, den)
            if not g.terms or g.is_unit():
                break
            a, r = laurent_divmod(a, g)
            if r.terms:
                raise AlexanderError("gcd did not divide")
    return canonical(a)


@dataclass
class H1Presentation:
    gamma: Matrix
    diagonal: list[RingElem]
    free_rank: int
    divisors: list[RingElem]  # non-unit divisors after localization
    inverted: list[RingElem]
    n: int

    @property
    def splits(self) -> bool:
        """The cokernel contains a free summand of rank ``n`` (the diagonal one)."""
        return self.free_rank >= self.n

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "elementary_divisors": [str(x) for x in self.divisors],
                "inverted": [str(x) for x in self.inverted]}


def h1_presentation(d: LinkDiagram, f: Representation, conjugate: bool = False) -> H1Presentation:
    """Smith form of the coloring matrix over ``F[t^±]``, localized at the meridian determinants.

    The cokernel is ``H_1 ⊕ A^n``: zero diagonal entries count the free part, the
    remaining non-unit entries are the elementary divisors of ``H_1``.
    """
    F = f.twisted()
    if conjugate:
        F = Representation(F.ring, F.n, tuple(m.involute() for m in F.images), None, F.t_vars)
    ring = F.ring
    if ring.designated or ring.nvars != 1:
        raise UnsupportedRing(f"presentations need a univariate Laurent ring over a field, got {ring!r}")
    gam = build_gamma(d, F)
    inverted = []
    for k in range(d.n_components):
        g = d.arc_index(d.base_arc(k))
        dv = (F.identity - F.images[g]).det()
        if dv.terms:
            inverted.append(dv)
            inverted.append(dv.involute())
    if gam.nrows == 0:
        return H1Presentation(gam, [], gam.ncols, [], inverted, F.n)
    _, D, _ = smith_normal_form(gam)
    diag = [D[i, i] for i in range(min(D.nrows, D.ncols))]
    free = sum(1 for x in diag if not x.terms) + max(0, D.ncols - D.nrows)
    divs = []
    for x in diag:
        if not x.terms:
            continue
        y = strip_factors(x, inverted)
        if not y.is_unit():
            divs.append(y)
    return H1Presentation(gam, diag, free, divs, inverted, F.n)


def jacobian_divisors(d: LinkDiagram, f: Representation) -> list[RingElem]:
    """Localized elementary divisors of the Fox Jacobian (the ``H_1`` part alone)."""
    J = fox_jacobian(wirtinger(d), f)
    F = f.twisted()
    inverted = []
    for k in range(d.n_components):
        g = d.arc_index(d.base_arc(k))
        dv = (F.identity - F.images[g]).det()
        inverted += [dv, dv.involute()]
    _, D, _ = smith_normal_form(J)
    out = []
    for i in range(min(D.nrows, D.ncols)):
        x = D[i, i]
        if x.terms:
            y = strip_factors(x, inverted)
            if not y.is_unit():
                out.append(y)
    return out


# ---------------------------------------------------------------------------
# the adjugate map and the pairing on twisted Alexander modules


@dataclass
class AdjugateData:
    """Adjugate of the restricted coloring matrix, reduced into the quotient ring."""

    diagram: LinkDiagram
    rep: Representation  # over the Laurent ring
    quotient_rep: Representation  # over the quotient by the polynomial
    restricted: Matrix
    adjugate: Matrix  # entries in the quotient ring
    det: RingElem
    deleted: int
    deleted_relator: int

    def image(self, cls: Sequence) -> tuple[RingElem, ...]:
        """Reduced coloring vector (full arc length, zero on the deleted arc)."""
        qr = self.quotient_rep.ring
        v = [qr.convert(a) for a in cls]
        if len(v) != self.adjugate.ncols:
            raise ValueError(f"class vector has length {len(v)}, expected {self.adjugate.ncols}")
        col = self.adjugate @ Matrix.from_columns(qr, [v])
        vals = [col[i, 0] for i in range(col.nrows)]
        n = self.rep.n
        g = self.diagram.arc_index(self.deleted)
        out = vals[: g * n] + [qr.zero()] * n + vals[g * n:]
        return tuple(out)

    def generator_images(self) -> list[tuple[RingElem, ...]]:
        qr = self.quotient_rep.ring
        k = self.adjugate.ncols
        return [self.image([qr.one() if i == j else qr.zero() for i in range(k)]) for j in range(k)]


def adj_map(d: LinkDiagram, f: Representation, quotient: Ring, deleted: int | None = None) -> AdjugateData:
    """Adjugate of the coloring matrix with the base-arc column block and one row block removed.

    ``f`` lives over a ring in which the twist variable is free; ``quotient`` is the
    same ring divided by the twisted Alexander polynomial.
    """
    F = f.twisted()
    n = f.n
    deleted = d.base_arc(0) if deleted is None else deleted
    g = d.arc_index(deleted)
    r = _relator_for(d, deleted)
    gam = build_gamma(d, F)
    rows = [i for i in range(gam.nrows) if i // n != r]
    cols = [j for j in range(gam.ncols) if j // n != g]
    res = gam.submatrix(rows, cols)
    det, adj = _det_adj(res)
    qrep = F.change_ring(quotient)
    if quotient.convert(det).terms:
        raise AlexanderError("the restricted determinant is a unit in the quotient; no torsion to map")
    return AdjugateData(d, F, qrep, res, adj.change_ring(quotient), det, deleted, r)


def _det_adj(m: Matrix):
    from .exactalg import berkowitz_adjugate

    return berkowitz_adjugate(m)


def adj_rank(data: AdjugateData) -> int:
    """Rank over the coefficient field of the adjugate reduced into the quotient."""
    return flat_rank(data.adjugate)


def twisted_pairing(data: AdjugateData, psi, component: int, u: Sequence, v: Sequence) -> RingElem:
    """``Q_psi(Adj u, Adj v)`` in the quotient ring."""
    qf = data.quotient_rep
    form = _bind(psi, qf)
    a = data.image(u)
    b = data.image(v)
    return q_value(data.diagram, qf, qf, form, component, a, b)


def independent_images(data: AdjugateData) -> list[tuple[RingElem, ...]]:
    """A maximal subset of adjugate images independent over the quotient ring (field case)."""
    from .exactalg import span_rank

    ring = data.quotient_rep.ring
    k = ring.rank_over_coefficients
    chosen: list[tuple[RingElem, ...]] = []
    rank = 0
    for img in data.generator_images():
        if not any(a.terms for a in img):
            continue
        r2 = span_rank([list(x) for x in chosen + [img]] + _multiples(ring, chosen + [img]), ring)
        if r2 >= rank + k:
            chosen.append(img)
            rank = r2
    return chosen


def _multiples(ring: Ring, vecs) -> list[list[RingElem]]:
    """Coefficient-ring spans need the ring-basis multiples of each vector."""
    out = []
    basis = ring.flat_basis()
    for v in vecs:
        for b in basis[1:]:
            e = [0] * ring.nvars
            for (var, _), k in zip(ring.moduli, b):
                e[ring.index(var)] = k
            mono = ring.from_terms({tuple(e): 1})
            out.append([mono * a for a in v])
    return out


def twisted_gram(data: AdjugateData, psi, component: int = 0) -> Matrix:
    imgs = independent_images(data)
    qf = data.quotient_rep
    form = _bind(psi, qf)
    rows = [[q_value(data.diagram, qf, qf, form, component, a, b) for b in imgs] for a in imgs]
    return Matrix(qf.ring, rows, ncols=len(imgs))


# ---------------------------------------------------------------------------
# localized values


@dataclass(frozen=True)
class LocalElem:
    """``num / den`` with ``den`` from a declared multiplicative set; equality by cross-multiplication."""

    num: RingElem
    den: RingElem

    def __eq__(self, other):
        if isinstance(other, LocalElem):
            return self.num * other.den == other.num * self.den
        return self.num == self.den * self.num.ring.convert(other)

    def __hash__(self):
        return 0

    def __mul__(self, other: "LocalElem") -> "LocalElem":
        return LocalElem(self.num * other.num, self.den * other.den)

    def __str__(self):
        return f"({self.num}) / ({self.den})"


def rescaled_value(q: RingElem, left_scale: RingElem, right_scale: RingElem) -> LocalElem:
    """``Q(x / a, x' / b) = Q(x, x') / (conj(a) b)`` for a sesquilinear ``Q``."""
    return LocalElem(q, left_scale.involute() * right_scale)
