"""Rank of the one- and two-quDit RDMs across the LMG transitions.

Compares the thermodynamic cat ansatz with exact diagonalization at finite N.
"""

import argparse
import time

import numpy as np

from quditinfo import lmg


def report(label: str, scan: lmg.RankScan) -> None:
    print(label)
    for M in (1, 2):
        jumps = [(round(lam, 3), a, b) for m, lam, a, b in scan.transitions if m == M]
        print(f"  M={M}: sequence {scan.sequence(M)}, changes (lambda, before, after) {jumps}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, default=50)
    ap.add_argument("--eps", type=float, default=1.0)
    ap.add_argument("--step", type=float, default=0.05)
    ap.add_argument("--threshold", type=float, default=lmg.NUMERICAL_THRESHOLD)
    args = ap.parse_args()

    fine = np.round(np.arange(0.0, 3.0 + 1e-9, 0.01), 12)
    report("variational, N = inf", lmg.rank_scan(args.eps, fine, lmg.Source.variational_inf()))

    grid = np.round(np.arange(0.0, 3.0 + 1e-9, args.step), 12)
    t0 = time.perf_counter()
    scan = lmg.rank_scan(args.eps, grid, lmg.Source.numerical(args.N), args.threshold)
    report(f"numerical, N = {args.N}, threshold {args.threshold} ({time.perf_counter() - t0:.1f}s)", scan)


if __name__ == "__main__":
    main()
