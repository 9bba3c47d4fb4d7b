"""Check the Toeplitz extensions of O_A and O_{A^t} for strong duality (eps = -1).

    python3 scripts/matsumoto_table.py --count 20 --size 5 --seed 0
    python3 scripts/matsumoto_table.py --matrix "[[1,1,0],[0,1,1],[1,0,1]]"
"""

import argparse
import json
import random

from kdual import matsumoto_pair
from kdual.fgab import IntMatrix


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--matrix", help="a single 0-1 matrix as JSON")
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--size", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if args.matrix:
        mats = [IntMatrix.from_rows(json.loads(args.matrix))]
    else:
        rng = random.Random(args.seed)
        mats = []
        for _ in range(args.count):
            n = rng.randint(1, args.size)
            mats.append(IntMatrix.from_rows([[rng.randint(0, 1) for _ in range(n)] for _ in range(n)]))

    held = 0
    for a in mats:
        e, f, report = matsumoto_pair(a)
        held += report.holds
        print(f"{json.dumps(a.tolist()):<40} K0(O_A)={str(e.base.k0):<12} "
              f"K0(T_A)={str(e.e_inv.k0):<12} holds={report.holds}")
    print(f"{held}/{len(mats)} pairs strongly dual")


if __name__ == "__main__":
    main()
