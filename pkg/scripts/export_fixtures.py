"""Write every catalog representation as a JSON config usable with ``twpair --rep``."""

import argparse
from pathlib import Path

from twpair import repcatalog as rc


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("outdir", type=Path)
    ap.add_argument("--only", nargs="*", help="fixture names (default: all)")
    args = ap.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)
    for name in args.only or sorted(rc.FIXTURES):
        path = args.outdir / f"{name}.json"
        path.write_text(rc.export_fixture(name) + "\n")
        print(path)


if __name__ == "__main__":
    main()
