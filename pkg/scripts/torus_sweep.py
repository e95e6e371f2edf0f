"""Compare the crossing sum with the closed form on T(m, m) for random SL2(F_p) data."""

import argparse
import random
from dataclasses import dataclass

from twpair.coloring import Representation, as_coloring, colorings
from twpair.diagram import builtin
from twpair.exactalg import GF, Matrix, Ring
from twpair.pairing import BilinearFormSpec, q_value, torus_long_arc_colors, torus_q, torus_splitting_check


@dataclass
class SweepConfig:
    ms: tuple[int, ...] = (2, 3, 4)
    primes: tuple[int, ...] = (5, 7, 11)
    reps_per_case: int = 5
    pairs_per_rep: int = 5
    seed: int = 0


def random_sl2(rng, ring, p):
    while True:
        a, b, c = (rng.randrange(p) for _ in range(3))
        if a:
            return Matrix(ring, [[a, b], [c, (1 + b * c) * pow(a, -1, p) % p]])


def power(ring, g, k):
    out = Matrix.identity(ring, 2)
    h = g if k >= 0 else g.inverse()
    for _ in range(abs(k)):
        out = out @ h
    return out


def combo(ring, basis, coeffs):
    out = [ring.zero()] * len(basis[0])
    for c, v in zip(coeffs, basis):
        out = [a + ring.convert(c) * b for a, b in zip(out, v)]
    return out


def sweep(cfg: SweepConfig):
    rng = random.Random(cfg.seed)
    for p in cfg.primes:
        R = Ring(GF(p), [])
        form = BilinearFormSpec("det2").bind(R, 2)
        for m in cfg.ms:
            d = builtin(f"torus_mm:{m}")
            agree = total = 0
            for _ in range(cfg.reps_per_case):
                g = random_sl2(rng, R, p)
                zs = [power(R, g, rng.randrange(1, 3 * p)) for _ in range(m)]
                f = Representation.from_generators(d, R, {i + 1: zs[i] for i in range(m)})
                basis = colorings(d, f).full_basis
                for _ in range(cfg.pairs_per_rep):
                    ca = as_coloring(d, f, combo(R, basis, [rng.randrange(p) for _ in basis]))
                    cb = as_coloring(d, f, combo(R, basis, [rng.randrange(p) for _ in basis]))
                    xa, xb = torus_long_arc_colors(d, ca), torus_long_arc_colors(d, cb)
                    for ell in range(m):
                        total += 1
                        agree += q_value(d, f, f, form, ell, ca, cb) == torus_q(m, zs, form, ell + 1, xa, xb)
            ks = [rng.randrange(1, 3 * p) for _ in range(m - 1)]
            g = random_sl2(rng, R, p)
            split = torus_splitting_check(m, [power(R, g, k) for k in ks + [-sum(ks)]]).split
            yield p, m, agree, total, split


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--reps", type=int, default=SweepConfig.reps_per_case)
    args = ap.parse_args()
    cfg = SweepConfig(seed=args.seed, reps_per_case=args.reps)
    for p, m, agree, total, split in sweep(cfg):
        print(f"p={p:<3} m={m}: {agree}/{total} agree, diagonal splits: {split}")


if __name__ == "__main__":
    main()
