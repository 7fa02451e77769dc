"""How far above the exact feasibility threshold does the border search land?

For random N-matrices A and sampled borders, reports the ratio of the
accepted t to the smallest t making A + t x y^T a P-matrix.
"""

import argparse

import numpy as np

from nmatrix.construct import ConstructionParams, border_signs, construct, find_feasible_border
from nmatrix.oracle import exact_border_threshold


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--runs", type=int, default=200)
    ap.add_argument("--mmax", type=int, default=7)
    args = ap.parse_args()
    for m in range(1, args.mmax + 1):
        ratios = []
        for seed in range(args.runs // args.mmax):
            A = construct(ConstructionParams(n=m, seed=seed)).result
            rng = np.random.default_rng([m, seed])
            step = find_feasible_border(A, border_signs(m), ConstructionParams(n=m + 1), rng)
            ratios.append(step.t / exact_border_threshold(A, step.x, step.y))
        r = np.array(ratios)
        print(f"order {m}: t/t_min median {np.median(r):.2f}, max {r.max():.2f}, over {len(r)} borders")


if __name__ == "__main__":
    main()
