"""Sample the convexity gap and the two-copy subadditivity excess on random two-qubit states.

    python scripts/inequalities.py [--pairs 50] [--copies 5] [--seed 0]
"""
import argparse

import numpy as np

from eofkit.eof import EofConfig, convexity_terms, subadditivity_terms
from eofkit.separability import random_density


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--pairs", type=int, default=50)
    parser.add_argument("--copies", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)
    cfg = EofConfig(seed=args.seed)

    gaps = []
    for k in range(args.pairs):
        rho1 = random_density((2, 2), int(rng.integers(1, 5)), [args.seed, k, 1])
        rho2 = random_density((2, 2), int(rng.integers(1, 5)), [args.seed, k, 2])
        gaps.append(convexity_terms(rho1, rho2, float(rng.uniform()), cfg).gap)
    print(f"convexity gap over {args.pairs} pairs: min {min(gaps):.3e}  median {np.median(gaps):.3e}")

    for k in range(args.copies):
        terms = subadditivity_terms(random_density((2, 2), 1 + k % 3, [args.seed, 100 + k]), cfg)
        print(f"copy {k}: E = {terms.single:.6f}  E(two copies) = {terms.double:.6f}  excess = {terms.excess:+.2e}")


if __name__ == "__main__":
    main()
