"""Command line interface.

Subcommands cover the full pipeline::

    taildep simulate  --model normal:rho=0.75 --n 1000 --seed 7 --out pairs.csv
    taildep transform --in pairs.csv --marginal frechet --k 250 --emit w --out w.csv
    taildep estimate  --in pairs.csv --family dpd --alpha 0.5 --k 250 --json
    taildep influence --family dpd --alpha 0.5 --eta 0.5 --b 0.75 --grid=-10:10:201
    taildep mc-study  --scenario M1p --epsilon 0.15 --reps 200 --out report.csv

Exit codes: 0 on success, 1 on a validation error (one line on stderr
naming the offending flag), 2 when an estimating equation has no usable
root (the scanned grid goes to stderr).

``estimate`` accepts either a two-column x,y CSV (standardised
internally using ``--marginal``) or a single-column z CSV holding an
already standardised pseudo-sample.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import copulas, influence, mc
from .estimators import SolverError, dpd_estimate, erm_estimate, hill
from .transforms import (
    MARGINALS,
    log_relative_excesses,
    pseudo_sample_from_values,
    scaled_log_ratios,
    to_pseudo_sample,
)


class CliError(Exception):
    """Validation failure; the message names the offending flag."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def _parse_model(text: str, flag: str) -> copulas.CopulaModel:
    """Parse 'family:key=value' model specs, e.g. normal:rho=0.75."""
    expected = {"normal": "rho", "gumbel": "delta", "clayton": "delta"}
    try:
        family, _, rest = text.partition(":")
        key, _, raw = rest.partition("=")
        if family not in expected or key != expected[family]:
            raise ValueError
        value = float(raw)
    except ValueError:
        raise CliError(
            f"{flag} must look like normal:rho=<f>, gumbel:delta=<f> or "
            f"clayton:delta=<f>, got {text!r}"
        ) from None
    try:
        return copulas.CopulaModel(family, value)
    except ValueError as exc:
        raise CliError(f"{flag}: {exc}") from None


def _parse_grid(text: str) -> np.ndarray:
    try:
        lo, hi, steps = text.split(":")
        lo, hi, steps = float(lo), float(hi), int(steps)
        if steps < 2 or hi <= lo:
            raise ValueError
    except ValueError:
        raise CliError(f"--grid must be lo:hi:steps with hi > lo and steps >= 2, got {text!r}") from None
    return np.linspace(lo, hi, steps)


def _float_list(text: str, flag: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise CliError(f"{flag} must be a comma-separated list of numbers, got {text!r}") from None


def _int_list(text: str, flag: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise CliError(f"{flag} must be a comma-separated list of integers, got {text!r}") from None


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _write_rows(path, header, rows, quiet):
    out, close = _open_out(path)
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        count = 0
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
            count += 1
    finally:
        if close:
            out.close()
    if close and not quiet:
        print(f"wrote {path} ({count} rows)", file=sys.stderr)


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return value


def _read_csv_columns(path):
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None:
                raise CliError(f"--in {path}: file is empty")
            rows = list(reader)
    except OSError as exc:
        raise CliError(f"--in: cannot read {path}: {exc}") from None
    return [h.strip() for h in header], rows


def _read_pairs(path) -> np.ndarray:
    header, rows = _read_csv_columns(path)
    if header[:2] != ["x", "y"]:
        raise CliError(f"--in {path}: expected header x,y, got {','.join(header)}")
    try:
        return np.array([[float(r[0]), float(r[1])] for r in rows])
    except (ValueError, IndexError):
        raise CliError(f"--in {path}: malformed numeric rows") from None


def _read_any_input(path):
    """Return ('pairs', array) or ('z', vector) depending on the header."""
    header, rows = _read_csv_columns(path)
    if header[:2] == ["x", "y"]:
        try:
            return "pairs", np.array([[float(r[0]), float(r[1])] for r in rows])
        except (ValueError, IndexError):
            raise CliError(f"--in {path}: malformed numeric rows") from None
    if header and header[0] == "z":
        try:
            return "z", np.array([float(r[0]) for r in rows])
        except (ValueError, IndexError):
            raise CliError(f"--in {path}: malformed numeric rows") from None
    raise CliError(f"--in {path}: expected header x,y or z, got {','.join(header)}")


def cmd_simulate(args) -> int:
    model = _parse_model(args.model, "--model")
    if args.n < 2:
        raise CliError(f"--n must be >= 2, got {args.n}")
    if (args.contaminant is None) != (args.epsilon is None):
        raise CliError("--contaminant and --epsilon must be given together")
    if args.contaminant is not None:
        contaminant = _parse_model(args.contaminant, "--contaminant")
        if not 0.0 <= args.epsilon < 0.5:
            raise CliError(f"--epsilon must lie in [0, 0.5), got {args.epsilon}")
        spec = copulas.ContaminationSpec(model, contaminant, args.epsilon)
        drawn = copulas.sample_contaminated(spec, args.n, args.seed, fixed_count=args.fixed_count)
    else:
        drawn = copulas.sample(model, args.n, args.seed)
    _write_rows(args.out, ["x", "y"], ([float(x), float(y)] for x, y in drawn.pairs), args.quiet)
    return 0


def cmd_transform(args) -> int:
    pairs = _read_pairs(args.infile)
    n = len(pairs)
    smallest = 3 if args.emit == "w" else 1
    if not smallest <= args.k <= n - 1:
        raise CliError(f"--k must satisfy {smallest} <= k <= n-1 = {n - 1}, got {args.k}")
    ps = to_pseudo_sample(pairs, args.marginal)
    if args.emit == "z":
        values = ps.z
    elif args.emit == "ztilde":
        values = log_relative_excesses(ps, args.k).z_tilde
    else:
        values = scaled_log_ratios(ps, args.k).w
    _write_rows(args.out, [args.emit], ([float(v)] for v in values), args.quiet)
    return 0


def cmd_estimate(args) -> int:
    kind, data = _read_any_input(args.infile)
    if kind == "pairs":
        if len(data) < 2:
            raise CliError("--in: need at least 2 rows")
        ps = to_pseudo_sample(data, args.marginal)
    else:
        ps = pseudo_sample_from_values(data, args.marginal)
    n = len(ps)
    smallest = 3 if args.family == "erm" else 1
    if not smallest <= args.k <= n - 1:
        raise CliError(f"--k must satisfy {smallest} <= k <= n-1 = {n - 1}, got {args.k}")
    if args.alpha < 0:
        raise CliError(f"--alpha must be >= 0, got {args.alpha}")

    if args.family == "hill":
        result = hill(ps, args.k)
    elif args.family == "dpd":
        result = dpd_estimate(log_relative_excesses(ps, args.k), args.alpha)
    else:
        result = erm_estimate(scaled_log_ratios(ps, args.k), args.alpha)

    payload = {
        "schema": 1,
        "family": result.family,
        "marginal": args.marginal,
        "alpha": args.alpha,
        "k": args.k,
        "eta_hat": result.eta_hat,
        "residual": result.residual,
        "evaluations": result.evaluations,
        "effective_count": result.effective_count,
        "bracket": list(result.bracket) if result.bracket else None,
        "flags": list(result.flags),
    }
    out, close = _open_out(args.out)
    try:
        if args.json:
            json.dump(payload, out, indent=2)
            out.write("\n")
        else:
            flags = f" [{','.join(result.flags)}]" if result.flags else ""
            out.write(f"eta_hat = {result.eta_hat!r}{flags}\n")
    finally:
        if close:
            out.close()
    return 0


def cmd_influence(args) -> int:
    grid = _parse_grid(args.grid)
    if args.alpha < 0:
        raise CliError(f"--alpha must be >= 0, got {args.alpha}")
    if args.eta <= 0:
        raise CliError(f"--eta must be > 0, got {args.eta}")
    if args.family == "dpd":
        if args.b is None:
            raise CliError("--b is required for --family dpd")
        if args.b <= 0:
            raise CliError(f"--b must be > 0, got {args.b}")
        params = influence.IfDpdParams(alpha=args.alpha, eta=args.eta, b=args.b)
        table = influence.influence_curve("dpd", params, grid)
    else:
        if args.k is None or args.j0 is None:
            raise CliError("--k and --j0 are required for --family erm")
        if args.k < 2:
            raise CliError(f"--k must be >= 2, got {args.k}")
        if not 1 <= args.j0 <= args.k - 1:
            raise CliError(f"--j0 must lie in 1..k-1 = {args.k - 1}, got {args.j0}")
        if (grid < 0).any():
            raise CliError("--grid for the erm family must be nonnegative")
        params = influence.IfErmParams(alpha=args.alpha, eta=args.eta, k=args.k, j0=args.j0)
        table = influence.influence_curve("erm-single", params, grid)
    _write_rows(args.out, ["t", "influence"], ([float(t), float(v)] for t, v in table), args.quiet)
    return 0


def cmd_mc_study(args) -> int:
    try:
        scenario, target = mc.scenario_preset(args.scenario, args.epsilon)
    except ValueError as exc:
        raise CliError(f"--scenario/--epsilon: {exc}") from None
    if args.n < 2:
        raise CliError(f"--n must be >= 2, got {args.n}")
    if args.reps < 1:
        raise CliError(f"--reps must be >= 1, got {args.reps}")
    if args.threads < 1:
        raise CliError(f"--threads must be >= 1, got {args.threads}")
    k_grid = _int_list(args.k, "--k")
    if any(not 1 <= k <= args.n - 1 for k in k_grid):
        raise CliError(f"--k values must lie in 1..n-1 = {args.n - 1}, got {args.k}")
    alpha_grid = _float_list(args.alpha, "--alpha")
    if any(a < 0 for a in alpha_grid):
        raise CliError(f"--alpha values must be >= 0, got {args.alpha}")
    families = tuple(args.families.split(","))
    for fam in families:
        if fam not in mc.FAMILIES:
            raise CliError(f"--families: unknown family {fam!r}, expected {'/'.join(mc.FAMILIES)}")

    spec = mc.ExperimentSpec(
        name=args.scenario,
        scenario=scenario,
        true_eta=target,
        n=args.n,
        reps=args.reps,
        k_grid=k_grid,
        alpha_grid=alpha_grid,
        families=families,
        seed=args.seed,
    )
    report = mc.run_experiment(spec, workers=args.threads)
    header = ["scenario", "family", "marginal", "alpha", "k", "n",
              "reps_used", "failures", "bias", "mse"]
    rows = (
        [spec.name, row.family, row.marginal, float(row.alpha), row.k, spec.n,
         row.reps_used, row.failures, row.bias, row.mse]
        for row in report.rows
    )
    _write_rows(args.out, header, rows, args.quiet)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="taildep", description="Tail dependence estimation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed")
    common.add_argument("--out", default="-", help="output path, '-' for stdout")
    common.add_argument("--quiet", action="store_true", help="suppress status messages")

    p = sub.add_parser("simulate", parents=[common], help="draw bivariate samples")
    p.add_argument("--model", required=True, help="e.g. normal:rho=0.75, gumbel:delta=1")
    p.add_argument("--contaminant", help="contaminant model spec")
    p.add_argument("--epsilon", type=float, help="contamination fraction in [0, 0.5)")
    p.add_argument("--fixed-count", action="store_true",
                   help="contaminate exactly round(epsilon*n) rows")
    p.add_argument("--n", type=int, required=True, help="sample size")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("transform", parents=[common], help="rank-standardise a sample")
    p.add_argument("--in", dest="infile", required=True, help="x,y CSV to read")
    p.add_argument("--marginal", choices=MARGINALS, required=True)
    p.add_argument("--k", type=int, required=True, help="tail order statistics")
    p.add_argument("--emit", choices=("z", "ztilde", "w"), required=True)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("estimate", parents=[common], help="estimate eta")
    p.add_argument("--in", dest="infile", required=True,
                   help="x,y CSV of raw pairs, or single-column z CSV")
    p.add_argument("--family", choices=("hill", "dpd", "erm"), required=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--marginal", choices=MARGINALS, default="frechet")
    p.add_argument("--json", action="store_true", help="emit a JSON record")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("influence", parents=[common], help="tabulate influence curves")
    p.add_argument("--family", choices=("dpd", "erm"), required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--b", type=float, help="threshold constant (dpd)")
    p.add_argument("--k", type=int, help="tail count (erm)")
    p.add_argument("--j0", type=int, help="perturbed index (erm)")
    p.add_argument("--grid", required=True,
                   help="lo:hi:steps; write --grid=-5:5:101 for a negative lo")
    p.set_defaults(func=cmd_influence)

    p = sub.add_parser("mc-study", parents=[common], help="run a bias/MSE study")
    p.add_argument("--scenario", required=True,
                   help="M1..M4 or M1p..M4p (primed take --epsilon)")
    p.add_argument("--epsilon", type=float, help="contamination fraction for primed scenarios")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--reps", type=int, default=200)
    p.add_argument("--k", default="50,150,250,500", help="comma-separated k grid")
    p.add_argument("--alpha", default="0,0.1,0.25,0.5,0.75,1", help="comma-separated alpha grid")
    p.add_argument("--families", default="hill,dpd,erm-f,erm-p")
    p.add_argument("--threads", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_mc_study)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        table = exc.scan_table()
        if table:
            print(table, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
