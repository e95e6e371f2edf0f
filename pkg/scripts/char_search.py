"""Invariant sesquilinear forms for the trefoil rep ``t -> 2t`` across characteristics.

Over most coefficient fields the quotient ring is not closed under the
involution, so no form exists; the script reports where one does.
"""

import argparse
import json
from dataclasses import asdict, dataclass

from twpair import repcatalog as rc
from twpair.pairing import invariant_forms


@dataclass
class SearchConfig:
    primes: tuple[int, ...] = (2, 3, 5, 7, 11, 13)
    include_rationals: bool = True


def search(cfg: SearchConfig) -> list[dict]:
    rows = []
    chars = ([None] if cfg.include_rationals else []) + list(cfg.primes)
    for p in chars:
        fx = rc.trefoil_2t(p)
        label = 0 if p is None else p
        if fx is None:
            rows.append({"characteristic": label, "ring": "zero ring", "forms": None})
            continue
        forms = invariant_forms(fx.rep)
        rows.append({"characteristic": label, "ring": repr(fx.rep.ring), "forms": forms.dim,
                     "reason": forms.reason or None})
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--primes", type=int, nargs="*", default=list(SearchConfig.primes))
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    cfg = SearchConfig(tuple(args.primes))
    rows = search(cfg)
    if args.json:
        print(json.dumps({"config": asdict(cfg), "rows": rows}, indent=2))
        return
    for r in rows:
        print(f"char {r['characteristic']:>3}: {r['ring']:<28} forms: {r['forms']}"
              + (f"  ({r['reason']})" if r.get("reason") else ""))


if __name__ == "__main__":
    main()
