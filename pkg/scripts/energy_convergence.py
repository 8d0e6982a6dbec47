"""Finite-N ground energies against the thermodynamic energy density."""

import argparse

from quditinfo import lmg


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps", type=float, default=1.0)
    ap.add_argument("--lambdas", type=float, nargs="+", default=[0.25, 1.0, 2.0, 3.0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 20, 40, 80])
    args = ap.parse_args()

    print("lambda,N,E_exact,E_cat,E_inf")
    for lam in args.lambdas:
        e_inf = lmg.ground_energy_density(args.eps, lam)
        for N in args.sizes:
            p = lmg.LMGParams(N, args.eps, lam)
            e_num, _ = lmg.solve_ground_state(p)
            e_cat = lmg.expectation(lmg.variational_cat_state(p), lmg.build_hamiltonian(p, sparse=True))
            print(f"{lam},{N},{e_num:.10f},{e_cat:.10f},{e_inf:.10f}")


if __name__ == "__main__":
    main()
