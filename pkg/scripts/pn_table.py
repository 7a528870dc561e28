"""Print the P^n residue table for X = d/dz3, omega = z0 dz1 - z1 dz0.

    python scripts/pn_table.py [--max-n 8]

F1 = O(1) and F2 = O(1)^(n-1); each row lists the total residue of
c1(N12)^(n-1-j) c1(N2)^(1+j) next to the closed form (n-2)^(n-1-j) 2^(1+j).
"""
import argparse
from fractions import Fraction

from flagres.cohomology import SplitSheaf, flag_residue_total


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--min-n", type=int, default=3)
    ap.add_argument("--max-n", type=int, default=8)
    args = ap.parse_args()
    mismatches = 0
    for n in range(args.min_n, args.max_n + 1):
        F1, F2 = SplitSheaf((1,)), SplitSheaf((1,) * (n - 1))
        cells = []
        for j in range(n):
            got = flag_residue_total(n, F1, F2, j)
            want = Fraction(n - 2) ** (n - 1 - j) * 2 ** (1 + j)
            mismatches += got != want
            cells.append(f"{got}" + ("" if got == want else f" (!= {want})"))
        print(f"n={n}: " + "  ".join(f"j={j}:{c}" for j, c in enumerate(cells)))
    print("all rows match the closed form" if not mismatches else f"{mismatches} mismatches")
    return 1 if mismatches else 0


if __name__ == "__main__":
    raise SystemExit(main())
