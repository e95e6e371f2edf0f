"""Kernels, ranks and Smith normal forms.

Matrices over a quotient ring are *flattened*: each entry becomes the matrix of
multiplication by it over the coefficient ring (the Laurent ring in the free
variables).  Linear algebra then runs over that coefficient ring, which must be
either a base field or a univariate Laurent ring over a field (a Euclidean
domain).  Anything else is refused with :class:`UnsupportedRing`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .matrix import Matrix
from .ring import Ring, RingElem, UnsupportedRing


# ---------------------------------------------------------------------------
# Euclidean structure of F[v^{±1}]


def _check_euclidean(ring: Ring):
    if ring.nvars != 1 or ring.designated or not ring.base.is_field:
        raise UnsupportedRing(f"{ring!r} is not a univariate Laurent ring over a field")


def euclid_norm(a: RingElem) -> int:
    """Span of exponents; -1 for zero.  Units have norm 0."""
    if not a.terms:
        return -1
    ks = [e[0] for e in a.terms] if a.ring.nvars else [0]
    return max(ks) - min(ks)


def laurent_divmod(a: RingElem, b: RingElem) -> tuple[RingElem, RingElem]:
    """Division with remainder in ``F[v^{±1}]`` (or in a field): ``a = q*b + r``
    with ``euclid_norm(r) < euclid_norm(b)``."""
    ring = a.ring
    if not b.terms:
        raise ZeroDivisionError("division by zero")
    dom = ring.base
    if ring.nvars == 0:
        return a * b.inverse(), ring.zero()
    if not a.terms:
        return ring.zero(), ring.zero()
    bl = min(e[0] for e in b.terms)
    al = min(e[0] for e in a.terms)
    bp = {e[0] - bl: c for e, c in b.terms.items()}
    r = {e[0] - al: c for e, c in a.terms.items()}
    db = max(bp)
    lead_inv = dom.inv(bp[db])
    q: dict[int, object] = {}
    while r and max(r) >= db:
        dr = max(r)
        c = dom.norm(r[dr] * lead_inv)
        k = dr - db
        q[k] = c
        for e, bc in bp.items():
            v = dom.norm(r.get(e + k, 0) - c * bc)
            if v:
                r[e + k] = v
            else:
                r.pop(e + k, None)
    shift = al - bl
    Q = RingElem(ring, {(k + shift,): c for k, c in q.items()})
    R = RingElem(ring, {(k + al,): c for k, c in r.items()})
    return Q, R


def divides(b: RingElem, a: RingElem) -> bool:
    if not b.terms:
        return not a.terms
    return not laurent_divmod(a, b)[1].terms


def normalize_unit(a: RingElem) -> RingElem:
    """Canonical associate: minimal exponent 0 in every free variable and a
    positive (ZZ) or unit (field) leading coefficient."""
    if not a.terms:
        return a
    ring = a.ring
    des = {ring.index(n) for n in ring.designated}
    mins = [0] * ring.nvars
    for i in range(ring.nvars):
        if i in des:
            continue
        mins[i] = min(e[i] for e in a.terms)
    shifted = {tuple(x - m for x, m in zip(e, mins)): c for e, c in a.terms.items()}
    lead_e = max(shifted)
    lc = shifted[lead_e]
    dom = ring.base
    if dom.is_field:
        s = dom.inv(lc)
    else:
        s = 1 if lc > 0 else -1
    return RingElem(ring, {e: dom.norm(c * s) for e, c in shifted.items()})


def associates(a: RingElem, b: RingElem) -> bool:
    return normalize_unit(a) == normalize_unit(b)


# ---------------------------------------------------------------------------
# flattening


def flatten_matrix(m: Matrix) -> Matrix:
    ring = m.ring
    cr = ring.coefficient_ring()
    if not ring.designated:
        return m if m.ring == cr else m.change_ring(cr)
    k = ring.rank_over_coefficients
    rows = [[cr.zero()] * (m.ncols * k) for _ in range(m.nrows * k)]
    cache: dict[RingElem, Matrix] = {}
    for i in range(m.nrows):
        for j in range(m.ncols):
            a = m.entries[i][j]
            if not a.terms:
                continue
            mm = cache.get(a)
            if mm is None:
                mm = ring.multiplication_matrix(a)
                cache[a] = mm
            for p in range(k):
                for q in range(k):
                    rows[i * k + p][j * k + q] = mm.entries[p][q]
    return Matrix(cr, rows, ncols=m.ncols * k)


def flatten_vector(ring: Ring, v) -> list[RingElem]:
    out = []
    for a in v:
        out.extend(ring.flatten(ring.convert(a)))
    return out


def unflatten_vector(ring: Ring, flat) -> list[RingElem]:
    k = ring.rank_over_coefficients
    return [ring.unflatten(list(flat[i:i + k])) for i in range(0, len(flat), k)]


# ---------------------------------------------------------------------------
# kernels over a field (raw coefficient arithmetic)


def _field_rref(rows: list[list], dom) -> tuple[list[list], list[int]]:
    rows = [list(r) for r in rows]
    m = len(rows)
    n = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = dom.inv(rows[r][c])
        rows[r] = [dom.norm(x * inv) for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                ri = rows[i]
                rr = rows[r]
                rows[i] = [dom.norm(x - f * y) if y != 0 else x for x, y in zip(ri, rr)]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return rows[:r], pivots


def _field_nullspace(rows: list[list], n: int, dom) -> list[list]:
    if not rows:
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    red, piv = _field_rref(rows, dom)
    free = [c for c in range(n) if c not in set(piv)]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for r, pc in enumerate(piv):
            v[pc] = dom.norm(-red[r][f])
        basis.append(v)
    return basis


def _raw(m: Matrix) -> list[list]:
    return [[a.terms.get((), 0) for a in row] for row in m.entries]


# ---------------------------------------------------------------------------
# kernels over F[v^{±1}] (column Hermite reduction)


def _pid_column_reduce(m: Matrix):
    """Unimodular column operations bringing ``m`` to column-echelon form.

    Returns ``(reduced columns, transform columns, number of pivots)`` with
    ``m @ V == reduced`` and the trailing columns of ``reduced`` zero.
    """
    ring = m.ring
    nrows, ncols = m.nrows, m.ncols
    A = [m.col(j) for j in range(ncols)]
    V = [[ring.one() if i == j else ring.zero() for i in range(ncols)] for j in range(ncols)]
    piv = 0
    for r in range(nrows):
        if piv >= ncols:
            break
        while True:
            cands = [j for j in range(piv, ncols) if A[j][r].terms]
            if not cands:
                break
            best = min(cands, key=lambda j: (euclid_norm(A[j][r]), len(A[j][r].terms)))
            A[piv], A[best] = A[best], A[piv]
            V[piv], V[best] = V[best], V[piv]
            pv = A[piv][r]
            done = True
            for j in range(piv + 1, ncols):
                a = A[j][r]
                if not a.terms:
                    continue
                q, rem = laurent_divmod(a, pv)
                A[j] = [x - q * y if y.terms else x for x, y in zip(A[j], A[piv])]
                V[j] = [x - q * y if y.terms else x for x, y in zip(V[j], V[piv])]
                if rem.terms:
                    done = False
            if done:
                break
        if any(A[j][r].terms for j in range(piv, ncols)):
            piv += 1
    return A, V, piv


@dataclass
class FlatKernel:
    """Kernel data over the coefficient ring of a (possibly quotient) ring."""

    ring: Ring
    coefficient_ring: Ring
    flat_vectors: list[list[RingElem]]  # basis over the coefficient ring
    flat_ncols: int

    @property
    def dim(self) -> int:
        return len(self.flat_vectors)

    def ring_vectors(self) -> list[list[RingElem]]:
        return [unflatten_vector(self.ring, v) for v in self.flat_vectors]


def flat_kernel(m: Matrix) -> FlatKernel:
    """Basis of ``ker m`` over the coefficient ring (field or ``F[v^{±1}]``)."""
    ring = m.ring
    cr = ring.coefficient_ring()
    fm = flatten_matrix(m)
    n = fm.ncols
    if cr.nvars == 0:
        if not cr.base.is_field:
            raise UnsupportedRing(f"kernels over {ring!r} need a field base; choose QQ or GF(p)")
        dom = cr.base
        basis = _field_nullspace(_raw(fm), n, dom)
        vecs = [[cr.from_base(c) for c in v] for v in basis]
    elif cr.nvars == 1 and cr.base.is_field:
        if fm.nrows == 0:
            vecs = [[cr.one() if i == j else cr.zero() for i in range(n)] for j in range(n)]
        else:
            _, V, piv = _pid_column_reduce(fm)
            vecs = [V[j] for j in range(piv, n)]
    else:
        raise UnsupportedRing(f"unsupported ring for kernel: {ring!r}")
    return FlatKernel(ring, cr, vecs, n)


def kernel_basis(m: Matrix) -> Matrix:
    """Columns generating ``ker m`` as a module over ``m.ring``."""
    fk = flat_kernel(m)
    cols = fk.ring_vectors()
    return Matrix.from_columns(m.ring, cols, nrows=m.ncols)


def flat_rank(m: Matrix) -> int:
    """Rank of the flattened matrix over the coefficient ring's fraction field."""
    ring = m.ring
    cr = ring.coefficient_ring()
    fm = flatten_matrix(m)
    if fm.nrows == 0 or fm.ncols == 0:
        return 0
    if cr.nvars == 0:
        if not cr.base.is_field:
            raise UnsupportedRing(f"rank over {ring!r} needs a field base")
        _, piv = _field_rref(_raw(fm), cr.base)
        return len(piv)
    if cr.nvars == 1 and cr.base.is_field:
        return _pid_column_reduce(fm)[2]
    raise UnsupportedRing(f"unsupported ring for rank: {ring!r}")


def span_rank(vectors: list[list[RingElem]], ring: Ring) -> int:
    """Rank (over the coefficient ring) of the span of ring vectors."""
    if not vectors:
        return 0
    return flat_rank(Matrix.from_columns(ring, vectors))


# ---------------------------------------------------------------------------
# Smith normal form over F[v^{±1}] (or a field)


def smith_normal_form(m: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """``(U, D, V)`` with ``m == U @ D @ V``, ``U``, ``V`` invertible and ``D``
    diagonal with ``d_i | d_{i+1}``; diagonal entries are unit-normalised."""
    ring = m.ring
    if not (ring.nvars == 0 and ring.base.is_field):
        _check_euclidean(ring)
    nr, nc = m.nrows, m.ncols
    A = [list(r) for r in m.entries]
    Pinv = [[ring.one() if i == j else ring.zero() for j in range(nr)] for i in range(nr)]
    Qinv = [[ring.one() if i == j else ring.zero() for j in range(nc)] for i in range(nc)]

    def row_add(i, j, q):  # row_i += q * row_j
        A[i] = [x + q * y if y.terms else x for x, y in zip(A[i], A[j])]
        for r in Pinv:  # Pinv <- Pinv * E^{-1}: col_j -= q col_i
            if r[i].terms:
                r[j] = r[j] - q * r[i]

    def col_add(i, j, q):  # col_i += q * col_j
        for r in A:
            if r[j].terms:
                r[i] = r[i] + q * r[j]
        Qinv[j] = [x - q * y if y.terms else x for x, y in zip(Qinv[j], Qinv[i])]

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        for r in Pinv:
            r[i], r[j] = r[j], r[i]

    def col_swap(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        Qinv[i], Qinv[j] = Qinv[j], Qinv[i]

    def row_scale(i, u):  # u a unit
        uinv = u.inverse()
        A[i] = [x * u for x in A[i]]
        for r in Pinv:
            r[i] = r[i] * uinv

    t = 0
    while t < min(nr, nc):
        cands = [(euclid_norm(A[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if A[i][j].terms]
        if not cands:
            break
        _, i0, j0 = min(cands)
        row_swap(t, i0)
        col_swap(t, j0)
        while True:
            p = A[t][t]
            for i in range(t + 1, nr):
                if A[i][t].terms:
                    q, _ = laurent_divmod(A[i][t], p)
                    row_add(i, t, -q)
            for j in range(t + 1, nc):
                if A[t][j].terms:
                    q, _ = laurent_divmod(A[t][j], p)
                    col_add(j, t, -q)
            rest = [(euclid_norm(A[i][t]), i, t) for i in range(t + 1, nr) if A[i][t].terms]
            rest += [(euclid_norm(A[t][j]), t, j) for j in range(t + 1, nc) if A[t][j].terms]
            if rest:
                _, i1, j1 = min(rest)
                row_swap(t, i1)
                col_swap(t, j1)
                continue
            bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                        if A[i][j].terms and not divides(p, A[i][j])), None)
            if bad is None:
                break
            row_add(t, bad[0], ring.one())
        p = A[t][t]
        u = normalize_unit(p)
        # p * unit = u ; find the unit as u / p (monomial times scalar)
        unit = _unit_ratio(u, p)
        row_scale(t, unit)
        t += 1
    D = Matrix(ring, A, ncols=nc)
    return Matrix(ring, Pinv, ncols=nr), D, Matrix(ring, Qinv, ncols=nc)


def _unit_ratio(u: RingElem, p: RingElem) -> RingElem:
    """The unit ``c`` with ``c * p == u`` for associates ``u``, ``p``."""
    ring = p.ring
    if ring.nvars == 0:
        return u * p.inverse()
    q, r = laurent_divmod(u, p)
    if r.terms or not q.is_unit_monomial():
        raise ArithmeticError("elements are not associates")
    return q


def elementary_divisors(m: Matrix) -> list[RingElem]:
    _, D, _ = smith_normal_form(m)
    return [D[i, i] for i in range(min(D.nrows, D.ncols)) if D[i, i].terms]
