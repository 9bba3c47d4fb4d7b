"""Strong extension groups of O_n and the dual extensions of E(m) over O_n.

    python3 scripts/cuntz_table.py --nmax 8 --mmax 3
"""

import argparse
from math import gcd

from kdual import ExtensionDatum, cuntz_invariant, ext_strong, solve_dual_extension
from kdual.fgab import IntMatrix
from kdual.extgrp import toeplitz_class


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nmax", type=int, default=8)
    ap.add_argument("--mmax", type=int, default=3)
    args = ap.parse_args()

    print(f"{'n':>3}  {'Ext_s':<6} {'iota':>5} {'[T]_s':>6}")
    for n in range(2, args.nmax + 1):
        s = ext_strong(cuntz_invariant(n))
        t = toeplitz_class(IntMatrix.from_rows([[n]]))
        print(f"{n:>3}  {str(s.group):<6} {s.iota_W.coords[0]:>5} {t.coords.coords[0]:>6}")

    print()
    print(f"{'n':>3} {'m':>3} {'eps':>4}  {'K0(B)':<6} {'[1_B]':<6} {'K0(F)':<10} {'[1_F]':<10} {'[e_F]':<10}")
    for n in range(2, args.nmax + 1):
        a = cuntz_invariant(n)
        for m in range(1, args.mmax + 1):
            for eps in (1, -1):
                f = solve_dual_extension(ExtensionDatum.from_class(a, [m]), eps)
                inv = f.e_inv
                note = "" if gcd(m, n - 1) == 1 else "  (gcd > 1)"
                print(f"{n:>3} {m:>3} {eps:>+4}  {str(f.base.k0):<6} {str(f.base.unit.coords):<6} "
                      f"{str(inv.k0):<10} {str(inv.unit.coords):<10} {str(inv.e_class.coords):<10}{note}")


if __name__ == "__main__":
    main()
