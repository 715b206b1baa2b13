"""Print b(n) from the Gamma-Laurent engine next to quadrature and the displayed closed form."""
import argparse

from ariththeta import archkernel as ak


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nmax", type=int, default=4)
    args = ap.parse_args()
    print(f"{'n':>2}  {'engine':<22} {'value':>20} {'quadrature':>20}  closed form")
    for n in range(1, args.nmax + 1):
        b = ak.b_constant(n)
        cf = ak.b_paper_closed_form(n)
        print(f"{n:>2}  {str(b):<22} {float(b):>20.15f} {ak.b_numeric(n):>20.15f}  {cf} ({float(cf):.6f})")


if __name__ == "__main__":
    main()
