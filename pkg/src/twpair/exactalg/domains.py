"""Base coefficient domains: the integers, the rationals and prime fields."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    k = 3
    while k * k <= p:
        if p % k == 0:
            return False
        k += 2
    return True


@dataclass(frozen=True)
class BaseDomain:
    """Coefficient domain tag.

    Coefficients are stored as plain Python numbers: ``int`` for ZZ and GF(p)
    (reduced into ``range(p)``), and ``int`` or ``Fraction`` for QQ (integral
    values are always stored as ``int``).
    """

    kind: str  # "ZZ" | "QQ" | "GF"
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("ZZ", "QQ", "GF"):
            raise ValueError(f"unknown base domain {self.kind!r}")
        if self.kind == "GF" and not _is_prime(self.p):
            raise ValueError(f"GF({self.p}): modulus is not prime")

    @property
    def is_field(self) -> bool:
        return self.kind != "ZZ"

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "GF" else 0

    def __str__(self) -> str:
        return f"GF({self.p})" if self.kind == "GF" else self.kind

    # -- coefficient plumbing -------------------------------------------------
    def convert(self, c) -> int | Fraction:
        """Bring a Python number into canonical coefficient form."""
        if isinstance(c, bool):
            c = int(c)
        if self.kind == "GF":
            if isinstance(c, int):
                return c % self.p
            if isinstance(c, Rational):
                num, den = c.numerator % self.p, c.denominator % self.p
                if den == 0:
                    raise ZeroDivisionError(f"denominator vanishes in GF({self.p})")
                return num * pow(den, -1, self.p) % self.p
            raise TypeError(f"cannot coerce {c!r} into {self}")
        if isinstance(c, int):
            return c
        if isinstance(c, Rational):
            if c.denominator == 1:
                return int(c.numerator)
            if self.kind == "ZZ":
                raise ValueError(f"{c} is not an integer")
            return Fraction(c.numerator, c.denominator)
        raise TypeError(f"cannot coerce {c!r} into {self}")

    def norm(self, c):
        """Canonicalise the result of raw Python arithmetic on coefficients."""
        if self.kind == "GF":
            return c % self.p
        if type(c) is Fraction and c.denominator == 1:
            return int(c.numerator)
        return c

    def is_unit(self, c) -> bool:
        if self.kind == "ZZ":
            return c in (1, -1)
        return c != 0

    def inv(self, c):
        if c == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.kind == "GF":
            return pow(c, -1, self.p)
        if self.kind == "ZZ":
            if c not in (1, -1):
                raise ZeroDivisionError(f"{c} is not a unit in ZZ")
            return c
        return self.norm(Fraction(1) / c)

    def div(self, a, b):
        return self.norm(a * self.inv(b)) if self.kind != "QQ" else self.norm(Fraction(a) / b)

    def is_positive(self, c) -> bool:
        """Sign used for canonical unit normalisation (always true over GF(p))."""
        return self.kind == "GF" or c > 0


ZZ = BaseDomain("ZZ")
QQ = BaseDomain("QQ")


def GF(p: int) -> BaseDomain:
    return BaseDomain("GF", p)


def parse_domain(text: str) -> BaseDomain:
    """Accepts ``ZZ``, ``QQ``, ``GF(p)`` or ``GF<p>`` (also ``F_p``)."""
    t = text.strip().replace(" ", "")
    if t in ("ZZ", "Z", "integers"):
        return ZZ
    if t in ("QQ", "Q", "rationals"):
        return QQ
    for prefix in ("GF(", "F_", "GF"):
        if t.startswith(prefix):
            digits = t[len(prefix):].rstrip(")")
            if digits.isdigit():
                return GF(int(digits))
    raise ValueError(f"unrecognised base domain {text!r}")
