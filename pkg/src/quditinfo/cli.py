"""Command-line front end: CSV datasets for plotting, plus a self-check.

Every CSV starts with a ``#`` line holding the resolved command; running that
command again reproduces the file byte for byte.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import math
import sys

import numpy as np

from . import infodiag, lmg, rdm, spectra
from .infodiag import AsymptoticRegime, ExtremalFamily, FamilyKind

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2  # also what argparse uses for bad flags


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def parse_range(text: str) -> np.ndarray:
    """``a:b:step`` inclusive of ``b`` (up to rounding), or a single number."""
    parts = text.split(":")
    try:
        nums = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; expected a:b:step") from None
    if len(nums) == 1:
        return np.array(nums)
    if len(nums) != 3:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; expected a:b:step")
    a, b, step = nums
    if step <= 0 or b < a:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; need b >= a and step > 0")
    n = int(math.floor((b - a) / step + 1e-9)) + 1
    return np.round(a + step * np.arange(n), 12)


def parse_N(text: str) -> float:
    if text.lower() in ("inf", "infinity"):
        return math.inf
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"N must be an integer or 'inf', got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("N must be positive")
    return n


class CsvOut:
    def __init__(self, fh, config_line: str):
        self.fh = fh
        fh.write(f"# {config_line}\n")
        self.writer = csv.writer(fh, lineterminator="\n")

    def comment(self, text: str) -> None:
        self.fh.write(f"# {text}\n")

    def header(self, cols) -> None:
        self.writer.writerow(cols)

    def row(self, values) -> None:
        self.writer.writerow([fmt(v) for v in values])


@contextlib.contextmanager
def open_out(path: str):
    if path in (None, "-"):
        yield sys.stdout
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        yield fh


# --- commands -----------------------------------------------------------------


def cmd_boundary(args, out: CsvOut) -> int:
    d = args.d
    if d < 2 or args.samples < 2:
        raise UsageError("boundary needs --d >= 2 and --samples >= 2")
    out.header(["family", "k", "eps", "L", "S"])
    families = [ExtremalFamily(FamilyKind.MAX, d)]
    families += [ExtremalFamily(FamilyKind.MIN, d, k) for k in range(1, d)]
    families += [ExtremalFamily(FamilyKind.INNER, d, k) for k in range(1, d)]
    for fam in families:
        k = None if fam.kind is FamilyKind.MAX else fam.k
        for eps in fam.eps_grid(args.samples):
            p = infodiag.boundary_entropies(fam, float(eps))
            out.row([fam.kind.value, k, eps, p.L, p.S])
    if args.asymptotes:
        for regime in AsymptoticRegime:
            for L in np.linspace(0.0, 1.0, args.samples + 1)[1:]:
                out.row([f"asym-{regime.value}", None, None, L, infodiag.asymptotic_S_of_L(d, regime, float(L))])
    return EXIT_OK


def cmd_sample(args, out: CsvOut) -> int:
    if args.n < 1 or args.d < 2:
        raise UsageError("sample needs --n >= 1 and --d >= 2")
    rng = np.random.default_rng(args.seed)
    out.header(["L", "S", "rank"])
    for _ in range(args.n):
        s = spectra.sample_random_spectrum(args.d, rng, args.dof)
        out.row([spectra.linear_entropy(s), spectra.von_neumann_entropy(s), spectra.numerical_rank(s, args.threshold)])
    return EXIT_OK


def cmd_cat_surface(args, out: CsvOut) -> int:
    if args.D not in (2, 3):
        raise UsageError("cat-surface supports --D 2 or 3")
    grid = args.grid
    out.header(["abs_alpha", "abs_beta", "M", "L", "S"])
    betas = grid if args.D == 3 else [0.0]
    for a in grid:
        for b in betas:
            moduli = (a, b) if args.D == 3 else (a,)
            p = rdm.cat_entanglement_entropies(rdm.CatSpectrumRequest(args.D, args.M, args.N, moduli))
            out.row([a, b, args.M, p.L, p.S])
    if args.stationary:
        if args.D != 3:
            raise UsageError("the stationary-curve overlay exists for D=3 only")
        out.comment("stationary curve (alpha0, beta0) over --lambda")
        for lam in args.lambda_:
            st = lmg.stationary_point(args.eps, float(lam))
            p = rdm.cat_entanglement_entropies(
                rdm.CatSpectrumRequest(3, args.M, args.N, (st.alpha0, st.beta0))
            )
            out.row([st.alpha0, st.beta0, args.M, p.L, p.S])
    return EXIT_OK


def _source(args) -> lmg.Source:
    if args.source == "numerical" and args.N == math.inf:
        raise UsageError("--source numerical needs a finite --N")
    return lmg.Source(args.source, args.N)


def cmd_lmg(args, out: CsvOut) -> int:
    sub = args.lmg_command
    if args.eps <= 0:
        raise UsageError("--eps must be positive")
    grid = args.lambda_
    if sub == "energy":
        out.header(["lambda", "E0_analytic", "E_numeric"])
        for lam in grid:
            e_num = None
            if args.N != math.inf:
                e_num, _ = lmg.solve_ground_state(lmg.LMGParams(int(args.N), args.eps, float(lam)))
            out.row([lam, lmg.ground_energy_density(args.eps, float(lam)), e_num])
        return EXIT_OK
    source = _source(args)
    scan = lmg.rank_scan(args.eps, grid, source, args.threshold)
    if sub == "sweep":
        out.header(["lambda", "rank_m1", "rank_m2", "L1", "S1", "L2", "S2", "energy"])
        for lam, r1, r2, pt in zip(scan.lambda_grid, scan.rank_m1, scan.rank_m2, scan.points):
            p1 = spectra.info_point(pt.spectrum_m1)
            p2 = spectra.info_point(pt.spectrum_m2)
            out.row([lam, r1, r2, p1.L, p1.S, p2.L, p2.S, pt.energy])
    else:
        out.header(["M", "lambda_jump", "rank_before", "rank_after"])
        for M, lam, before, after in sorted(scan.transitions, key=lambda t: (t[0], t[1])):
            out.row([M, lam, before, after])
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    from . import acceptance

    results = acceptance.run_checks(include_slow=args.full)
    for r in results:
        print(r.line())
    ok = all(r.passed for r in results)
    print(f"{'ALL PASS' if ok else 'FAILURES'}: {sum(r.passed for r in results)}/{len(results)}")
    return EXIT_OK if ok else EXIT_FAIL


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quditinfo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_out(p):
        p.add_argument("--out", default="-", help="output CSV path (default: stdout)")

    p = sub.add_parser("boundary", help="boundary and inner curves of the information diagram")
    p.add_argument("--d", type=int, default=5)
    p.add_argument("--samples", type=int, default=400)
    p.add_argument("--asymptotes", action="store_true", help="append asymptotic-curve rows")
    p.add_argument("--seed", type=int, default=0)
    add_out(p)

    p = sub.add_parser("sample", help="random chi-squared spectra in the information diagram")
    p.add_argument("--d", type=int, default=5)
    p.add_argument("--n", type=int, default=20000)
    p.add_argument("--dof", type=float, default=spectra.DEFAULT_DOF)
    p.add_argument("--threshold", type=float, default=spectra.RANK_THRESHOLD)
    p.add_argument("--seed", type=int, default=0)
    add_out(p)

    p = sub.add_parser("cat-surface", help="entanglement entropies of even cats over a moduli grid")
    p.add_argument("--D", type=int, default=3)
    p.add_argument("--M", type=int, choices=(1, 2), default=1)
    p.add_argument("--N", type=parse_N, default=math.inf)
    p.add_argument("--grid", type=parse_range, default=parse_range("0:2:0.05"))
    p.add_argument("--stationary", action="store_true", help="append the stationary-curve overlay")
    p.add_argument("--lambda", dest="lambda_", type=parse_range, default=parse_range("0:3:0.01"))
    p.add_argument("--eps", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    add_out(p)

    p = sub.add_parser("lmg", help="three-level LMG model: rank sweeps, jump detection, energies")
    lsub = p.add_subparsers(dest="lmg_command", required=True)
    for name in ("sweep", "qpt", "energy"):
        q = lsub.add_parser(name)
        q.add_argument("--N", type=parse_N, default=math.inf)
        q.add_argument("--eps", type=float, default=1.0)
        q.add_argument("--lambda", dest="lambda_", type=parse_range, default=None)
        q.add_argument("--source", choices=[s.value for s in lmg.SourceKind], default="variational")
        q.add_argument("--threshold", type=float, default=None, help="rank threshold (default per source)")
        q.add_argument("--seed", type=int, default=0)
        add_out(q)

    p = sub.add_parser("selfcheck", help="run the fast acceptance checks")
    p.add_argument("--full", action="store_true", help="include the N=50 sweep")
    return parser


_RAW_FLAGS = {"--N": "N", "--grid": "grid", "--lambda": "lambda_"}
_DEFAULT_RAW = {"grid": "0:2:0.05", "lambda_": "0:3:0.01"}


def _record_raw(args, argv) -> dict:
    """User spelling of range-like flags, so the header line can be re-run verbatim."""
    raw = {}
    for i, word in enumerate(argv):
        flag, sep, inline = word.partition("=")
        if flag in _RAW_FLAGS:
            raw[_RAW_FLAGS[flag]] = inline if sep else (argv[i + 1] if i + 1 < len(argv) else None)
    if getattr(args, "N", None) is not None and "N" not in raw:
        raw["N"] = "inf" if args.N == math.inf else str(int(args.N))
    return raw


def _config(args, keys, raw) -> str:
    words = ["quditinfo", *args.command_path]
    for key in keys:
        val = getattr(args, key)
        flag = "--" + key.rstrip("_")
        if isinstance(val, bool):
            if val:
                words.append(flag)
        elif val is not None:
            words += [flag, raw.get(key) or fmt(val)]
    return " ".join(words)


_KEYS = {
    "boundary": ["d", "samples", "asymptotes", "seed"],
    "sample": ["d", "n", "dof", "threshold", "seed"],
    "cat-surface": ["D", "M", "N", "grid", "stationary", "lambda_", "eps", "seed"],
    "lmg": ["N", "eps", "lambda_", "source", "threshold", "seed"],
}
_HANDLERS = {
    "boundary": cmd_boundary,
    "sample": cmd_sample,
    "cat-surface": cmd_cat_surface,
    "lmg": cmd_lmg,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    args.command_path = [args.command] + ([args.lmg_command] if args.command == "lmg" else [])
    if args.command == "selfcheck":
        return cmd_selfcheck(args)

    raw = {**_DEFAULT_RAW, **_record_raw(args, argv)}
    if args.command == "lmg":
        if args.lambda_ is None:
            raw["lambda_"] = "0:3:0.05" if args.source == "numerical" else "0:3:0.01"
            args.lambda_ = parse_range(raw["lambda_"])
        if args.threshold is None and args.lmg_command != "energy":
            numerical = args.source == lmg.SourceKind.NUMERICAL.value
            args.threshold = lmg.NUMERICAL_THRESHOLD if numerical else lmg.VARIATIONAL_THRESHOLD

    try:
        with open_out(args.out) as fh:
            out = CsvOut(fh, _config(args, _KEYS[args.command], raw))
            return _HANDLERS[args.command](args, out)
    except UsageError as exc:
        print(f"quditinfo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"quditinfo: cannot write {args.out!r}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, RuntimeError) as exc:
        print(f"quditinfo: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
