"""Tabulate W(0), W'(0) and their ratio to the Gross multiplicity at nonsplit places."""
import argparse
from fractions import Fraction

from ariththeta.cmfield import splitting_type
from ariththeta.lwhittaker import LocalSpace1, whittaker_deriv0, whittaker_value0
from ariththeta.series import gross_multiplicity


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--d", type=int, default=-4)
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--u", default="1")
    ap.add_argument("--vmax", type=int, default=7)
    args = ap.parse_args()
    kind = splitting_type(args.d, args.p).kind
    S = LocalSpace1(args.p, args.d, Fraction(args.u))
    print(f"p={args.p} d={args.d} u={args.u} ({kind})")
    for v in range(args.vmax + 1):
        t = Fraction(args.p) ** v
        w0 = whittaker_value0(S, t)
        der = whittaker_deriv0(S, t).logs.get(args.p, Fraction(0))
        # the ratio is only meaningful where the value vanishes
        mu = der / gross_multiplicity(kind, v) if kind != "split" and w0 == 0 else None
        print(f"v={v}  W(0)={str(w0):<8} W'(0)={str(der):<8} log p   ratio={mu}")


if __name__ == "__main__":
    main()
