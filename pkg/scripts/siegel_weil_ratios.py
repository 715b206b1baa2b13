"""Compare genus-averaged theta series with Eisenstein coefficients, and report local arithmetic ratios."""
import argparse
from fractions import Fraction

from ariththeta.hlattice import HermitianLattice
from ariththeta.series import (GlobalSpaceData, averaged_theta, eisenstein_qexp, local_arith_sw_check,
                               mixed_series_direct, mixed_series_product, proportionality)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--d", type=int, nargs="+", default=[-3, -4, -7, -8, -15, -20])
    ap.add_argument("--prec", type=int, default=20)
    args = ap.parse_args()
    for d in args.d:
        E = eisenstein_qexp(GlobalSpaceData(d, 0, HermitianLattice.diagonal(d, [1])), args.prec)
        th = averaged_theta(d, Fraction(1), args.prec)
        ok = all(E[t].rat == th.get(Fraction(t), 0) for t in range(args.prec + 1))
        D = GlobalSpaceData(d, 1)
        c = proportionality(mixed_series_product(D, None, 8), mixed_series_direct(D, 8))
        print(f"d={d:>4}  rank-1 agrees: {ok}  mixed ratio: {c}")
    for d, p in [(-4, 3), (-3, 3), (-4, 7), (-3, 2)]:
        rep = local_arith_sw_check(GlobalSpaceData(d, 1, incoherent=True), p, 20)
        print(f"d={d:>4} p={p}  {rep.kind:<9} ratio {rep.ratio}  constant {rep.constant}")


if __name__ == "__main__":
    main()
