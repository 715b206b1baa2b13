"""Spot checks of Q_s, P_s and E1 against mpmath at a few points."""
import mpmath

from ariththeta import archkernel as ak


def main():
    with mpmath.workdps(40):
        for n in (1, 2, 3):
            for t in ("1.5", "3", "10"):
                a = ak.Q_s(mpmath.mpf(t), 0, n)
                b = ak.Q0_closed(mpmath.mpf(t) - 1, n)
                print(f"n={n} t={t:>4}  Q_0={mpmath.nstr(a, 20)}  closed diff={mpmath.nstr(abs(a - b), 3)}")
        for x in ("0.1", "1", "5", "30"):
            x = mpmath.mpf(x)
            ref = mpmath.e1(x)
            k = ak.kudla_kernel(x / (2 * mpmath.pi))
            print(f"E1({mpmath.nstr(x, 3)}) rel err {mpmath.nstr(abs(k - ref) / ref, 3)}")


if __name__ == "__main__":
    main()
