"""Boundary curves plus a chi-squared sample of the d=5 information diagram.

Writes boundary.csv and sample.csv into the output directory and reports how
many sampled points fall in each minimal-rank subregion.
"""

import argparse
from collections import Counter
from pathlib import Path

import numpy as np

from quditinfo import cli, infodiag, spectra


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=int, default=5)
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--outdir", type=Path, default=Path("out"))
    args = ap.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)

    d = str(args.d)
    cli.main(["boundary", "--d", d, "--samples", "400", "--asymptotes", "--out", str(args.outdir / "boundary.csv")])
    cli.main(["sample", "--d", d, "--n", str(args.n), "--seed", str(args.seed), "--out", str(args.outdir / "sample.csv")])

    rng = np.random.default_rng(args.seed)
    regions = Counter()
    for _ in range(args.n):
        p = spectra.info_point(spectra.sample_random_spectrum(args.d, rng))
        regions[infodiag.minimal_rank_region(args.d, p)] += 1
    print(f"wrote {args.outdir}/boundary.csv and {args.outdir}/sample.csv")
    for k in sorted(regions):
        print(f"  minimal rank {k}: {regions[k]} points")


if __name__ == "__main__":
    main()
