"""Dense matrices over a :class:`Ring` with division-free determinants."""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .ring import NotInvertible, Ring, RingElem


class Matrix:
    """Immutable-by-convention dense matrix; ``entries`` is a list of rows."""

    __slots__ = ("ring", "entries", "nrows", "ncols")

    def __init__(self, ring: Ring, entries: Sequence[Sequence], ncols: int | None = None):
        self.ring = ring
        rows = [[e if isinstance(e, RingElem) and e.ring is ring else ring.convert(e) for e in row]
                for row in entries]
        self.entries = rows
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else (ncols or 0)
        if any(len(r) != self.ncols for r in rows):
            raise ValueError("ragged matrix")

    # -- constructors -----------------------------------------------------------
    @classmethod
    def zeros(cls, ring: Ring, m: int, n: int) -> "Matrix":
        z = ring.zero()
        return cls(ring, [[z] * n for _ in range(m)], ncols=n)

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Matrix":
        z, o = ring.zero(), ring.one()
        return cls(ring, [[o if i == j else z for j in range(n)] for i in range(n)], ncols=n)

    @classmethod
    def from_columns(cls, ring: Ring, cols: Sequence[Sequence], nrows: int | None = None) -> "Matrix":
        if not cols:
            return cls(ring, [[] for _ in range(nrows or 0)], ncols=0)
        return cls(ring, [list(r) for r in zip(*cols)], ncols=len(cols))

    @classmethod
    def block(cls, ring: Ring, blocks: Sequence[Sequence["Matrix"]]) -> "Matrix":
        rows = []
        for brow in blocks:
            h = brow[0].nrows
            for i in range(h):
                row = []
                for b in brow:
                    row.extend(b.entries[i])
                rows.append(row)
        ncols = sum(b.ncols for b in blocks[0]) if blocks else 0
        return cls(ring, rows, ncols=ncols)

    # -- access -----------------------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> list[RingElem]:
        return list(self.entries[i])

    def col(self, j: int) -> list[RingElem]:
        return [r[j] for r in self.entries]

    def columns(self) -> list[list[RingElem]]:
        return [self.col(j) for j in range(self.ncols)]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "Matrix":
        rows, cols = list(rows), list(cols)
        return Matrix(self.ring, [[self.entries[i][j] for j in cols] for i in rows], ncols=len(cols))

    # -- algebra ----------------------------------------------------------------
    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.shape == other.shape
                and all(a == b for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb)))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.ring, [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)],
                      ncols=self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.ring, [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)],
                      ncols=self.ncols)

    def __neg__(self) -> "Matrix":
        return self.map(lambda a: -a)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        z = self.ring.zero()
        cols = other.columns()
        out = []
        for r in self.entries:
            row = []
            for c in cols:
                acc = z
                for a, b in zip(r, c):
                    if a.terms and b.terms:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return Matrix(self.ring, out, ncols=other.ncols)

    def scale(self, c) -> "Matrix":
        c = self.ring.convert(c)
        return self.map(lambda a: c * a)

    def __mul__(self, c):
        if isinstance(c, Matrix):
            return self @ c
        return self.scale(c)

    __rmul__ = scale

    def map(self, fn: Callable[[RingElem], RingElem], ring: Ring | None = None) -> "Matrix":
        ring = ring or self.ring
        return Matrix(ring, [[fn(a) for a in r] for r in self.entries], ncols=self.ncols)

    def change_ring(self, ring: Ring) -> "Matrix":
        return self.map(ring.convert, ring)

    def involute(self) -> "Matrix":
        target = self.ring.conjugate_ring()
        return self.map(lambda a: a.involute(), target)

    def transpose(self) -> "Matrix":
        return Matrix(self.ring, [list(c) for c in zip(*self.entries)] if self.nrows else [],
                      ncols=self.nrows)

    T = property(transpose)

    def is_zero(self) -> bool:
        return all(not a.terms for r in self.entries for a in r)

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    # -- determinants -------------------------------------------------------------
    def det(self) -> RingElem:
        return berkowitz_adjugate(self, want_adj=False)[0]

    def adjugate(self) -> "Matrix":
        return berkowitz_adjugate(self)[1]

    def inverse(self) -> "Matrix":
        d, adj = berkowitz_adjugate(self)
        try:
            dinv = d.inverse()
        except NotInvertible as exc:
            raise NotInvertible(f"matrix determinant {d} is not a unit") from exc
        return adj.scale(dinv)

    def __pow__(self, k: int) -> "Matrix":
        if k < 0:
            return self.inverse() ** (-k)
        result = Matrix.identity(self.ring, self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def __repr__(self):
        body = "; ".join(", ".join(str(a) for a in r) for r in self.entries)
        return f"Matrix[{self.nrows}x{self.ncols}]({body})"

    def to_strings(self) -> list[list[str]]:
        return [[str(a) for a in r] for r in self.entries]


def charpoly(m: Matrix) -> list[RingElem]:
    """Coefficients ``[1, p1, ..., pn]`` of ``det(x*I - m)`` (Berkowitz, division-free)."""
    if m.nrows != m.ncols:
        raise ValueError("charpoly of a non-square matrix")
    n = m.nrows
    ring = m.ring
    one, zero = ring.one(), ring.zero()
    A = m.entries
    vect = [one]
    for r in range(n):
        a = A[r][r]
        R = A[r][:r]
        C = [A[i][r] for i in range(r)]
        col = [one, -a]
        # successive -R * A_r^k * C
        w = C
        for _ in range(r):
            acc = zero
            for x, y in zip(R, w):
                if x.terms and y.terms:
                    acc = acc + x * y
            col.append(-acc)
            # w <- A_r w
            w = [_dot(A[i][:r], w, zero) for i in range(r)]
        new = []
        for i in range(r + 2):
            acc = zero
            for j in range(r + 1):
                if 0 <= i - j < len(col):
                    c = col[i - j]
                    if c.terms and vect[j].terms:
                        acc = acc + c * vect[j]
            new.append(acc)
        vect = new
    return vect


def _dot(a, b, zero):
    acc = zero
    for x, y in zip(a, b):
        if x.terms and y.terms:
            acc = acc + x * y
    return acc


def berkowitz_adjugate(m: Matrix, want_adj: bool = True) -> tuple[RingElem, Matrix | None]:
    """Determinant and adjugate via the characteristic polynomial.

    ``adj(A) = (-1)^(n-1) * (A^(n-1) + p1 A^(n-2) + ... + p_(n-1) I)``.
    """
    n = m.nrows
    if n != m.ncols:
        raise ValueError("determinant of a non-square matrix")
    ring = m.ring
    if n == 0:
        return ring.one(), Matrix(ring, [], ncols=0)
    p = charpoly(m)
    det = p[n] if n % 2 == 0 else -p[n]
    if not want_adj:
        return det, None
    ident = Matrix.identity(ring, n)
    B = ident
    for k in range(1, n):
        B = m @ B + ident.scale(p[k])
    if n % 2 == 0:
        B = -B
    return det, B
