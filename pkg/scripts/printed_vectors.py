"""Test the hand-written coloring vectors of the catalog and compare their pairings.

For each printed vector: is it a coloring, where does it first fail, and what
does the pairing give on it and on the solver's own generator.
"""

import argparse

from twpair import repcatalog as rc
from twpair.alexander import LocalElem, twisted_alexander
from twpair.coloring import as_coloring, colorings, first_failure
from twpair.pairing import _bind, q_value

DEFAULT = ("trefoil_sl2", "fig8_elliptic", "fig8_hyperbolic", "fig8_case2", "fig8_adjoint_s2")


def report(name: str):
    fx = rc.fixture(name)
    d, f = fx.diagram, fx.rep
    psi = _bind(fx.psi, f)
    print(f"== {name} over {f.ring!r}")
    for key, e in fx.expected.items():
        print(f"   expected {key} [{e.tag}]: {e.value}")
    if fx.alexander_rep is not None:
        data = twisted_alexander(d, fx.alexander_rep)
        print(f"   Delta = {data.delta if data.delta is not None else f'({data.numerator})/({data.denominator})'}")
    for key, v in (fx.printed or {}).items():
        c = as_coloring(d, f, v)
        bad = first_failure(d, c)
        q = q_value(d, f, f, psi, 0, c, c, check=False)
        print(f"   printed {key}: coloring={bad is None}" + ("" if bad is None else f" (fails at {bad})")
              + f"; Q = {q}")
        if "q_printed" in fx.expected and fx.expected["q_printed"].value is not None:
            exp = f.ring.convert(fx.expected["q_printed"].value)
            if exp.terms and q.terms:
                print(f"      Q / expected = {LocalElem(q, exp)}")
    cm = colorings(d, f)
    for i, v in enumerate(cm.red_basis[:2]):
        c = as_coloring(d, f, v)
        print(f"   solver generator {i}: Q = {q_value(d, f, f, psi, 0, c, c)}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", default=list(DEFAULT))
    for name in ap.parse_args().names:
        report(name)


if __name__ == "__main__":
    main()
