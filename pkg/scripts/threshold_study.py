"""How the detected rank jumps of exact ground states depend on the threshold.

One diagonalization per coupling; the spectra are reused for every threshold.
"""

import argparse

import numpy as np

from quditinfo import lmg, spectra


def jumps(grid, spectra_list, threshold):
    ranks = [spectra.numerical_rank(s, threshold) for s in spectra_list]
    return [
        (round(float(grid[i] + grid[i + 1]) / 2, 3), ranks[i], ranks[i + 1])
        for i in range(len(grid) - 1)
        if ranks[i + 1] != ranks[i]
    ]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, default=50)
    ap.add_argument("--step", type=float, default=0.05)
    ap.add_argument("--thresholds", type=float, nargs="+", default=[1e-3, 3e-3, 1e-2, 2e-2, 3e-2])
    args = ap.parse_args()

    grid = np.round(np.arange(0.0, 3.0 + 1e-9, args.step), 12)
    points = [lmg.evaluate_point(1.0, lam, lmg.Source.numerical(args.N)) for lam in grid]
    for t in args.thresholds:
        print(f"threshold {t:g}")
        print(f"  M=1 {jumps(grid, [p.spectrum_m1 for p in points], t)}")
        print(f"  M=2 {jumps(grid, [p.spectrum_m2 for p in points], t)}")
    # size of the smallest retained eigenvalues in phase I, for scale
    lam = 0.2
    s = points[int(round(lam / args.step))].spectrum_m1.values
    print(f"M=1 spectrum at lambda={lam}: {np.array2string(s, precision=3)}")


if __name__ == "__main__":
    main()
