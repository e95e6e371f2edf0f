"""Canonical text form of ring elements (round-trips through the parser)."""

from __future__ import annotations

from fractions import Fraction


def _monomial(names, exps) -> str:
    parts = []
    for n, k in zip(names, exps):
        if k == 1:
            parts.append(n)
        elif k:
            parts.append(f"{n}^{k}")
    return "*".join(parts)


def _coeff_text(c) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def format_elem(x) -> str:
    names = x.ring.names
    items = x.sorted_terms()
    if not items:
        return "0"
    out = []
    for i, (e, c) in enumerate(items):
        neg = c < 0 if x.ring.base.kind != "GF" else False
        mag = -c if neg else c
        mono = _monomial(names, e)
        if not mono:
            body = _coeff_text(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_coeff_text(mag)}*{mono}"
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)
