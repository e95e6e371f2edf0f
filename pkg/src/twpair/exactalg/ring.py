"""Multivariate Laurent polynomial rings and their monic quotients.

A :class:`Ring` is ``base[v_1^{±1}, ..., v_k^{±1}] / (m_1, ..., m_r)`` where each
modulus ``m_i`` is monic in its own *designated* variable and has a unit constant
term in that variable (so the designated variable stays invertible).  Moduli
form a triangular set: ``m_i`` may mention the designated variables of earlier
moduli but never those of later ones.  Reducing by the moduli last-to-first
gives a canonical representative whose designated-variable exponents lie in
``0 .. deg(m_i) - 1`` and whose remaining ("free") variables are arbitrary
Laurent monomials.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

from .domains import BaseDomain

Terms = dict  # exponent tuple -> coefficient


class UnsupportedRing(Exception):
    """The requested computation is not available over this coefficient ring."""


class NotInvertible(ArithmeticError):
    pass


@dataclass(frozen=True)
class Variable:
    name: str
    involution: str = "inverse"  # "inverse": v-bar = v^-1 ; "self": v-bar = v

    def __post_init__(self):
        if self.involution not in ("inverse", "self"):
            raise ValueError(f"involution rule must be 'inverse' or 'self', got {self.involution!r}")
        if not self.name.isidentifier():
            raise ValueError(f"bad variable name {self.name!r}")


# ---------------------------------------------------------------------------
# raw term arithmetic


def _add_into(acc: Terms, terms: Terms, dom: BaseDomain, scale=1):
    for e, c in terms.items():
        v = acc.get(e, 0) + c * scale
        v = dom.norm(v)
        if v:
            acc[e] = v
        else:
            acc.pop(e, None)


def _mul_terms(a: Terms, b: Terms, dom: BaseDomain) -> Terms:
    out: Terms = {}
    if len(a) > len(b):
        a, b = b, a
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    res = {}
    for e, c in out.items():
        c = dom.norm(c)
        if c:
            res[e] = c
    return res


def _shift(terms: Terms, idx: int, k: int) -> Terms:
    out = {}
    for e, c in terms.items():
        e2 = list(e)
        e2[idx] += k
        out[tuple(e2)] = c
    return out


class _Modulus:
    """A monic modulus in one designated variable, with a cache of reduced powers."""

    __slots__ = ("var", "idx", "degree", "terms", "_powers")

    def __init__(self, var: str, idx: int, terms: Terms, degree: int):
        self.var = var
        self.idx = idx
        self.terms = terms
        self.degree = degree
        self._powers: dict[int, Terms] = {}


class Ring:
    """Laurent polynomial ring over a base domain, optionally quotiented."""

    def __init__(self, base: BaseDomain, variables: Iterable[Variable | str] = (),
                 moduli: Iterable[tuple[str, "RingElem | str"]] = ()):
        self.base = base
        vs = []
        for v in variables:
            vs.append(v if isinstance(v, Variable) else Variable(v))
        names = [v.name for v in vs]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.variables: tuple[Variable, ...] = tuple(vs)
        self.names: tuple[str, ...] = tuple(names)
        self._index = {n: i for i, n in enumerate(names)}
        self.nvars = len(vs)
        self._moduli: list[_Modulus] = []
        self._zero_exp = (0,) * self.nvars
        self._conj = None
        self._coeff_ring = None
        self._flat_basis = None
        for var, poly in moduli:
            self._add_modulus(var, poly)
        self._key = (base, self.variables,
                     tuple((m.var, tuple(sorted(m.terms.items()))) for m in self._moduli))

    # -- construction helpers ---------------------------------------------
    def _add_modulus(self, var: str, poly):
        if var not in self._index:
            raise ValueError(f"modulus variable {var!r} is not a ring variable")
        if any(m.var == var for m in self._moduli):
            raise ValueError(f"variable {var!r} already has a modulus")
        idx = self._index[var]
        if isinstance(poly, str):
            from .parser import parse_poly
            poly = parse_poly(poly, self)
        terms = dict(self._reduce(dict(poly.terms))) if isinstance(poly, RingElem) else dict(poly)
        if not terms:
            raise ValueError("zero modulus")
        lo = min(e[idx] for e in terms)
        terms = _shift(terms, idx, -lo)
        deg = max(e[idx] for e in terms)
        if deg < 1:
            raise ValueError(f"modulus has degree 0 in {var!r}")
        lead = {e: c for e, c in terms.items() if e[idx] == deg}
        const = {e: c for e, c in terms.items() if e[idx] == 0}
        for part, what in ((lead, "leading"), (const, "constant")):
            if len(part) != 1:
                raise ValueError(f"modulus {what} coefficient in {var!r} must be a unit monomial")
            (e, c), = part.items()
            if not self.base.is_unit(c):
                raise ValueError(f"modulus {what} coefficient in {var!r} is not a unit")
            if any(e[m.idx] for m in self._moduli):
                raise ValueError(f"modulus {what} coefficient must not involve earlier designated variables")
        (le, lc), = lead.items()
        inv_c = self.base.inv(lc)
        norm = {}
        for e, c in terms.items():
            e2 = tuple(x - y if i != idx else x for i, (x, y) in enumerate(zip(e, le)))
            norm[e2] = self.base.norm(c * inv_c)
        for earlier in self._moduli:
            if any(e[idx] for e in earlier.terms):
                raise ValueError(f"earlier modulus in {earlier.var!r} mentions {var!r}; order moduli triangularly")
        self._moduli.append(_Modulus(var, idx, norm, deg))

    def quotient(self, var: str, modulus) -> "Ring":
        """A new ring with one more modulus (monic in ``var``)."""
        mods = [(m.var, m.terms) for m in self._moduli]
        r = Ring(self.base, self.variables, ())
        for v, t in mods:
            r._add_modulus(v, t)
        if isinstance(modulus, RingElem):
            modulus = r.convert(modulus)
        r._add_modulus(var, modulus)
        r._key = (r.base, r.variables, tuple((m.var, tuple(sorted(m.terms.items()))) for m in r._moduli))
        return r

    def ambient(self) -> "Ring":
        return Ring(self.base, self.variables)

    def with_base(self, base: BaseDomain) -> "Ring":
        r = Ring(base, self.variables)
        for m in self._moduli:
            terms = {}
            for e, c in m.terms.items():
                c2 = base.convert(c)
                if c2:
                    terms[e] = c2
            r._add_modulus(m.var, terms)
        r._key = (r.base, r.variables, tuple((m.var, tuple(sorted(m.terms.items()))) for m in r._moduli))
        return r

    # -- identity -----------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, Ring) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        vs = ", ".join(v.name + ("" if v.involution == "inverse" else "*") for v in self.variables)
        s = f"{self.base}[{vs}]"
        if self._moduli:
            s += "/(" + ", ".join(str(RingElem(self, m.terms)) for m in self._moduli) + ")"
        return s

    # -- structure ----------------------------------------------------------
    @property
    def moduli(self):
        return [(m.var, RingElem(self.ambient(), m.terms)) for m in self._moduli]

    @property
    def designated(self) -> tuple[str, ...]:
        return tuple(m.var for m in self._moduli)

    @property
    def free_names(self) -> tuple[str, ...]:
        d = set(self.designated)
        return tuple(n for n in self.names if n not in d)

    @property
    def rank_over_coefficients(self) -> int:
        k = 1
        for m in self._moduli:
            k *= m.degree
        return k

    @property
    def is_field(self) -> bool:
        """True only for a bare base field (no variables)."""
        return self.nvars == 0 and self.base.is_field

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r} in {self!r}") from None

    # -- element construction ----------------------------------------------
    def zero(self) -> "RingElem":
        return RingElem(self, {})

    def one(self) -> "RingElem":
        return RingElem(self, {self._zero_exp: 1} if self._one_nonzero() else {})

    def _one_nonzero(self) -> bool:
        return bool(self._reduce({self._zero_exp: 1}))

    def gen(self, name: str) -> "RingElem":
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return self.from_terms({tuple(e): 1})

    def gens(self) -> tuple["RingElem", ...]:
        return tuple(self.gen(n) for n in self.names)

    def from_terms(self, terms: Mapping) -> "RingElem":
        clean = {}
        for e, c in terms.items():
            c = self.base.convert(c)
            if c:
                clean[tuple(e)] = c
        return RingElem(self, self._reduce(clean))

    def from_base(self, c) -> "RingElem":
        c = self.base.convert(c)
        return self.from_terms({self._zero_exp: c}) if c else self.zero()

    def __call__(self, x) -> "RingElem":
        return self.convert(x)

    def convert(self, x) -> "RingElem":
        """Coerce numbers, strings and elements of compatible rings."""
        if isinstance(x, RingElem):
            if x.ring is self or x.ring == self:
                return x if x.ring is self else RingElem(self, x.terms)
            idx = []
            for n in x.ring.names:
                if n not in self._index:
                    if all(e[x.ring.index(n)] == 0 for e in x.terms):
                        idx.append(None)
                        continue
                    raise ValueError(f"variable {n!r} not present in {self!r}")
                idx.append(self._index[n])
            out = {}
            for e, c in x.terms.items():
                e2 = [0] * self.nvars
                for i, k in zip(idx, e):
                    if i is not None:
                        e2[i] = k
                c2 = self.base.convert(c)
                if c2:
                    e2 = tuple(e2)
                    out[e2] = self.base.norm(out.get(e2, 0) + c2)
            return RingElem(self, self._reduce({e: c for e, c in out.items() if c}))
        if isinstance(x, (bool, int, Rational)):
            return self.from_base(x)
        if isinstance(x, str):
            from .parser import parse_poly
            return parse_poly(x, self)
        raise TypeError(f"cannot convert {x!r} into {self!r}")

    # -- reduction ----------------------------------------------------------
    def _power(self, m: _Modulus, k: int) -> Terms:
        """``v^k mod m`` for the designated variable ``v`` (terms may still need
        reduction by earlier moduli)."""
        cache = m._powers
        if k in cache:
            return cache[k]
        dom = self.base
        d = m.degree
        if 0 <= k < d:
            e = list(self._zero_exp)
            e[m.idx] = k
            cache[k] = {tuple(e): 1}
            return cache[k]
        if k >= d:
            prev = self._power(m, k - 1)
            res = self._reduce_top(_shift(prev, m.idx, 1), m)
        else:
            prev = self._power(m, k + 1)
            res = self._reduce_top(_shift(prev, m.idx, -1), m)
        cache[k] = res
        return res

    def _inv_var(self, m: _Modulus) -> Terms:
        key = "inv"
        if key in m._powers:
            return m._powers[key]
        dom = self.base
        const = {e: c for e, c in m.terms.items() if e[m.idx] == 0}
        (ce, cc), = const.items()
        inv_c = dom.inv(cc)
        neg_inv_e = tuple(-x for x in ce)
        res = {}
        for e, c in m.terms.items():
            if e[m.idx] == 0:
                continue
            e2 = list(x + y for x, y in zip(e, neg_inv_e))
            e2[m.idx] -= 1
            res[tuple(e2)] = dom.norm(-c * inv_c)
        m._powers[key] = res
        return res

    def _reduce_top(self, terms: Terms, m: _Modulus) -> Terms:
        """Reduce terms whose designated exponent lies in ``[-1, d]`` to ``[0, d)``."""
        dom = self.base
        out: Terms = {}
        for e, c in terms.items():
            k = e[m.idx]
            if 0 <= k < m.degree:
                out[e] = dom.norm(out.get(e, 0) + c)
            elif k == m.degree:
                base_e = list(e)
                base_e[m.idx] = 0
                for me, mc in m.terms.items():
                    if me[m.idx] == m.degree:
                        continue
                    e2 = tuple(x + y for x, y in zip(base_e, me))
                    out[e2] = dom.norm(out.get(e2, 0) - c * mc)
            elif k == -1:
                base_e = list(e)
                base_e[m.idx] = 0
                for ie, ic in self._inv_var(m).items():
                    e2 = tuple(x + y for x, y in zip(base_e, ie))
                    out[e2] = dom.norm(out.get(e2, 0) + c * ic)
            else:
                raise AssertionError("exponent out of range in _reduce_top")
        return {e: c for e, c in out.items() if c}

    def _reduce(self, terms: Terms) -> Terms:
        if not self._moduli:
            return terms
        dom = self.base
        for m in reversed(self._moduli):
            if all(0 <= e[m.idx] < m.degree for e in terms):
                continue
            out: Terms = {}
            for e, c in terms.items():
                k = e[m.idx]
                if 0 <= k < m.degree:
                    out[e] = dom.norm(out.get(e, 0) + c)
                    continue
                base_e = list(e)
                base_e[m.idx] = 0
                for pe, pc in self._power(m, k).items():
                    e2 = tuple(x + y for x, y in zip(base_e, pe))
                    out[e2] = dom.norm(out.get(e2, 0) + c * pc)
            terms = {e: c for e, c in out.items() if c}
        return terms

    # -- involution -----------------------------------------------------------
    def _involute_terms(self, terms: Terms) -> Terms:
        flips = [v.involution == "inverse" for v in self.variables]
        return {tuple(-x if f else x for x, f in zip(e, flips)): c for e, c in terms.items()}

    def conjugate_ring(self) -> "Ring":
        """The ring whose ideal is the image of this one under the involution."""
        if self._conj is not None:
            return self._conj
        if self.is_self_conjugate():
            self._conj = self
            return self
        r = Ring(self.base, self.variables)
        for m in self._moduli:
            r._add_modulus(m.var, self._involute_terms(m.terms))
        r._key = (r.base, r.variables, tuple((mm.var, tuple(sorted(mm.terms.items()))) for mm in r._moduli))
        r._conj = self
        self._conj = r
        return r

    def is_self_conjugate(self) -> bool:
        for m in self._moduli:
            if self._reduce(self._involute_terms(m.terms)):
                return False
        return True

    # -- flattening over the coefficient ring ---------------------------------
    def coefficient_ring(self) -> "Ring":
        """The Laurent ring in the free (non-designated) variables."""
        if self._coeff_ring is None:
            free = [v for v in self.variables if v.name not in self.designated]
            self._coeff_ring = Ring(self.base, free)
        return self._coeff_ring

    def flat_basis(self) -> list[tuple[int, ...]]:
        """Designated-exponent tuples indexing the coefficient-ring basis."""
        if self._flat_basis is None:
            basis = [()]
            for m in self._moduli:
                basis = [b + (k,) for b in basis for k in range(m.degree)]
            self._flat_basis = basis
        return self._flat_basis

    def flatten(self, x: "RingElem") -> list["RingElem"]:
        cr = self.coefficient_ring()
        basis = self.flat_basis()
        pos = {b: i for i, b in enumerate(basis)}
        free_idx = [self._index[n] for n in cr.names]
        des_idx = [m.idx for m in self._moduli]
        buckets: list[dict] = [dict() for _ in basis]
        for e, c in x.terms.items():
            b = tuple(e[i] for i in des_idx)
            buckets[pos[b]][tuple(e[i] for i in free_idx)] = c
        return [RingElem(cr, t) for t in buckets]

    def unflatten(self, coeffs: list["RingElem"]) -> "RingElem":
        cr = self.coefficient_ring()
        free_idx = [self._index[n] for n in cr.names]
        des_idx = [m.idx for m in self._moduli]
        out = {}
        for b, c in zip(self.flat_basis(), coeffs):
            c = cr.convert(c)
            for fe, fc in c.terms.items():
                e = [0] * self.nvars
                for i, k in zip(free_idx, fe):
                    e[i] = k
                for i, k in zip(des_idx, b):
                    e[i] = k
                out[tuple(e)] = fc
        return RingElem(self, out)

    def multiplication_matrix(self, x: "RingElem"):
        from .matrix import Matrix
        cr = self.coefficient_ring()
        cols = []
        for b in self.flat_basis():
            e = [0] * self.nvars
            for m, k in zip(self._moduli, b):
                e[m.idx] = k
            cols.append(self.flatten(x * RingElem(self, {tuple(e): 1})))
        k = len(cols)
        return Matrix(cr, [[cols[j][i] for j in range(k)] for i in range(k)])


class RingElem:
    """An element of a :class:`Ring`, always stored in reduced form."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Terms):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- coercion -----------------------------------------------------------
    def _coerce(self, other) -> "RingElem":
        if isinstance(other, RingElem):
            if other.ring is self.ring or other.ring == self.ring:
                return other
            raise TypeError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")
        if isinstance(other, (int, Rational)):
            return self.ring.from_base(other)
        return NotImplemented

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        _add_into(out, other.terms, self.ring.base)
        return RingElem(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        dom = self.ring.base
        return RingElem(self.ring, {e: dom.norm(-c) for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        _add_into(out, other.terms, self.ring.base, -1)
        return RingElem(self.ring, out)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return RingElem(self.ring, {})
        prod = _mul_terms(self.terms, other.terms, self.ring.base)
        return RingElem(self.ring, self.ring._reduce(prod))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    # -- predicates -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, RingElem):
            other = self.ring.from_base(other)
        if not isinstance(other, RingElem):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {self.ring._zero_exp: 1}

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms.get(self.ring._zero_exp, 0)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_unit_monomial(self) -> bool:
        """Laurent monomial with unit coefficient (always invertible)."""
        if len(self.terms) != 1:
            return False
        (_, c), = self.terms.items()
        return self.ring.base.is_unit(c)

    # -- involution & inverse -------------------------------------------------
    def involute(self) -> "RingElem":
        r = self.ring
        target = r.conjugate_ring()
        return RingElem(target, target._reduce(r._involute_terms(self.terms)))

    conj = involute

    def inverse(self) -> "RingElem":
        r = self.ring
        if not self.terms:
            raise NotInvertible("inverse of zero")
        if self.is_unit_monomial() and not r.designated:
            (e, c), = self.terms.items()
            return RingElem(r, {tuple(-x for x in e): r.base.inv(c)})
        if self.is_unit_monomial():
            (e, c), = self.terms.items()
            return r.from_terms({tuple(-x for x in e): r.base.inv(c)})
        if not r.designated:
            raise NotInvertible(f"{self} is not a unit in {r!r}")
        from .matrix import berkowitz_adjugate
        mm = r.multiplication_matrix(self)
        det, adj = berkowitz_adjugate(mm)
        if not det.is_unit_monomial():
            raise NotInvertible(f"{self} is not a unit in {r!r} (norm {det})")
        dinv = det.inverse()
        inv = r.unflatten([adj[i, 0] * dinv for i in range(adj.nrows)])
        if not (inv * self).is_one():
            raise NotInvertible(f"{self} is not invertible in {r!r}")
        return inv

    def is_unit(self) -> bool:
        try:
            self.inverse()
        except NotInvertible:
            return False
        return True

    # -- structure -------------------------------------------------------------
    def degree_in(self, name: str) -> tuple[int, int]:
        """(min exponent, max exponent) in a variable; raises on zero."""
        i = self.ring.index(name)
        ks = [e[i] for e in self.terms]
        if not ks:
            raise ValueError("zero has no degree")
        return min(ks), max(ks)

    def coefficients_in(self, name: str) -> dict[int, "RingElem"]:
        i = self.ring.index(name)
        out: dict[int, Terms] = {}
        for e, c in self.terms.items():
            e2 = list(e)
            k = e2[i]
            e2[i] = 0
            out.setdefault(k, {})[tuple(e2)] = c
        return {k: RingElem(self.ring, t) for k, t in out.items()}

    def variables_used(self) -> set[str]:
        used = set()
        for e in self.terms:
            for n, k in zip(self.ring.names, e):
                if k:
                    used.add(n)
        return used

    def subs(self, values: Mapping[str, "RingElem"], target: Ring | None = None) -> "RingElem":
        """Evaluate variables at elements of ``target`` (a ring homomorphism).

        Variables not listed are mapped to the same-named generator of the target.
        Values for negative exponents must be invertible in the target.
        """
        if target is None:
            vals = list(values.values())
            target = vals[0].ring if vals and isinstance(vals[0], RingElem) else self.ring
        imgs = []
        for n in self.ring.names:
            if n in values:
                imgs.append(target.convert(values[n]))
            else:
                imgs.append(target.gen(n))
        cache: dict[tuple[int, int], RingElem] = {}

        def pw(i, k):
            key = (i, k)
            if key not in cache:
                cache[key] = imgs[i] ** k
            return cache[key]

        total = target.zero()
        for e, c in self.terms.items():
            term = target.from_base(c)
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            total = total + term
        return total

    def map_coefficients(self, target: Ring) -> "RingElem":
        """Same monomials, coefficients converted into ``target``'s base domain."""
        return target.from_terms({self._reindex(e, target): c for e, c in self.terms.items()})

    def _reindex(self, e, target: Ring):
        out = [0] * target.nvars
        for n, k in zip(self.ring.names, e):
            if k:
                out[target.index(n)] = k
        return tuple(out)

    # -- presentation ----------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    def __str__(self):
        from .printer import format_elem
        return format_elem(self)

    def __repr__(self):
        return f"RingElem({self})"


def laurent_ring(base: BaseDomain, *names: str, self_conjugate: Iterable[str] = ()) -> Ring:
    sc = set(self_conjugate)
    return Ring(base, [Variable(n, "self" if n in sc else "inverse") for n in names])
