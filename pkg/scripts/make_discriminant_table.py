"""Regenerate the packaged table of fundamental discriminants and reduced forms."""
import argparse
from pathlib import Path

from ariththeta.cmfield import write_discriminant_table


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--dmax", type=int, default=500)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "src/ariththeta/data/discriminants.csv"))
    args = ap.parse_args()
    write_discriminant_table(args.out, args.dmax)


if __name__ == "__main__":
    main()
