"""Compare recursive classification with the brute-force oracle on random matrices.

Prints, per order, how many instances were compared, skipped (some minor
within 1e-6 of zero), found to be N-matrices, and misclassified.
"""

import argparse
from collections import Counter

import numpy as np

from nmatrix.detect import classify
from nmatrix.oracle import all_principal_minors, classify_bruteforce


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--nmax", type=int, default=7)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    for n in range(1, args.nmax + 1):
        rng = np.random.default_rng([args.seed, n])
        tally = Counter()
        for _ in range(args.count):
            A = rng.uniform(-2, 2, (n, n))
            if min(abs(v) for _, v in all_principal_minors(A)) <= 1e-6:
                tally["skipped"] += 1
                continue
            slow = classify_bruteforce(A)
            tally[slow.value] += 1
            tally["mismatch"] += classify(A) is not slow
        print(f"n={n}: " + ", ".join(f"{k}={v}" for k, v in sorted(tally.items())))


if __name__ == "__main__":
    main()
