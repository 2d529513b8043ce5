"""Werner-family sweep: optimizer estimate vs the closed-form and brute-force oracles.

    python scripts/werner_sweep.py [--grid 20] [--restarts 32] [--budget 2000] [--out sweep.csv]
"""
import argparse
import csv
import sys

import numpy as np

from eofkit.eof import EofConfig, eof_estimate, spectral_upper_bound
from eofkit.oracle import brute_force_eof, werner_state, wootters_eof


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--grid", type=int, default=20)
    parser.add_argument("--restarts", type=int, default=32)
    parser.add_argument("--budget", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", help="CSV path (default stdout)")
    args = parser.parse_args()

    cfg = EofConfig(cardinality=4, restarts=args.restarts, seed=args.seed)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.writer(out)
    writer.writerow(["p", "estimate", "wootters", "brute_force", "spectral"])
    worst = 0.0
    for p in np.linspace(0, 1, args.grid + 1):
        rho = werner_state(float(p))
        est = eof_estimate(rho, cfg).value
        exact = wootters_eof(rho)
        brute = brute_force_eof(rho, args.budget, args.seed)
        worst = max(worst, abs(est - exact), abs(brute - exact))
        writer.writerow([f"{p:.6f}", f"{est:.9f}", f"{exact:.9f}", f"{brute:.9f}", f"{spectral_upper_bound(rho):.9f}"])
    if args.out:
        out.close()
    print(f"max deviation from closed form: {worst:.2e}", file=sys.stderr)


if __name__ == "__main__":
    main()
