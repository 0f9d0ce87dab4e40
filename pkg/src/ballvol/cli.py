"""Command line front end.

Subcommands:

* ``volume``   estimate v(f) = vol{f <= 1} of a form file or builtin
* ``norm``     evaluate a norm of a form or Gram file
* ``optimize`` run a projected-subgradient volume minimization
* ``verify``   randomized check of the closed-form lower bounds

Reports are JSON (sorted keys, so identical configurations give
byte-identical output) or single-record CSV.  Exit codes: 0 success,
2 usage or input error, 3 infinite sublevel volume, 4 verification
failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .extremal import (NormSpec, minimize_volume_form, minimize_volume_sos,
                       theoretical_opt, verify_lower_bound)
from .forms import (Form, ball_form, bombieri_norm, bombieri_norm_ball_exact,
                    monomial_from_rescaled, multi_index_table, power_form)
from .norms import lp_sphere_norm, sup_sphere_norm
from .serialize import form_from_dict, gram_from_dict
from .sos import form_from_gram, gram_dimension, schatten_norm, spectral_norm
from .streams import DEFAULT_SEED
from .volume import volume_laplace_mc, volume_spherical_mc

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFINITE = 3
EXIT_VERIFY = 4


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# report emission
# ---------------------------------------------------------------------------

def _csv_cell(value):
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, dict)):
        return json.dumps(value, sort_keys=True)
    return value


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    keys = sorted(report)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(keys)
    writer.writerow([_csv_cell(report[k]) for k in keys])
    return buf.getvalue()


def _emit(report: dict, args) -> None:
    text = _render(report, args.format)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_trace_csv(trace, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iter", "objective", "step", "residual"])
        for k, (obj, step, res) in enumerate(trace.iterates):
            writer.writerow([k, repr(obj), repr(step), repr(res)])


# ---------------------------------------------------------------------------
# input loading
# ---------------------------------------------------------------------------

def _powers_form(n: int, d: int) -> Form:
    """The axis form x_1^d + ... + x_n^d."""
    coeffs = np.zeros(multi_index_table(n, d).size)
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        coeffs += power_form(e, d).coeffs
    return Form(n, d, coeffs)


def _builtin_form(name: str, n: int, d: int) -> Form:
    if n is None or d is None:
        raise UsageError("--builtin requires --n and --d")
    if name == "ball":
        return ball_form(n, d)
    if name == "powers":
        return _powers_form(n, d)
    raise UsageError(f"unknown builtin {name!r}")


def _load_json(path) -> dict:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    if not isinstance(obj, dict):
        raise UsageError(f"{path}: expected a JSON object")
    return obj


def _load_any(path):
    """Load a form or Gram file, dispatching on its keys."""
    obj = _load_json(path)
    try:
        if "rows" in obj:
            return gram_from_dict(obj)
        return form_from_dict(obj)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _input_form(args) -> Form:
    if getattr(args, "input", None):
        loaded = _load_any(args.input)
        return loaded if isinstance(loaded, Form) else form_from_gram(loaded)
    if getattr(args, "builtin", None):
        return _builtin_form(args.builtin, args.n, args.d)
    raise UsageError("provide --in FILE or --builtin {ball,powers}")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_volume(args) -> int:
    f = _input_form(args)
    estimator = volume_spherical_mc if args.method == "spherical" else volume_laplace_mc
    est = estimator(f, samples=args.samples, seed=args.seed)
    report = {
        "command": "volume",
        "method": est.method,
        "n": f.n,
        "d": f.d,
        "samples": est.samples,
        "seed": est.seed,
        "value": est.value if not est.infinite else "inf",
        "std_error": est.std_error,
    }
    _emit(report, args)
    if est.infinite:
        print("infinite volume", file=sys.stderr)
        return EXIT_INFINITE
    return EXIT_OK


def cmd_norm(args) -> int:
    loaded = _load_any(args.input)
    is_gram = not isinstance(loaded, Form)
    kind, p = args.kind, args.p
    report = {"command": "norm", "kind": kind, "seed": args.seed,
              "n": loaded.n, "d": loaded.d, "std_error": 0.0}
    if kind in ("schatten", "spectral"):
        if not is_gram:
            raise UsageError(f"--kind {kind} needs a Gram matrix file")
        if kind == "schatten":
            if p is None:
                raise UsageError("--kind schatten requires --p")
            report["p"] = p
            value = (spectral_norm(loaded.entries) if math.isinf(p)
                     else schatten_norm(loaded.entries, p))
        else:
            value = spectral_norm(loaded.entries)
    else:
        f = loaded if not is_gram else form_from_gram(loaded)
        if kind == "bombieri":
            value = bombieri_norm(f)
        elif kind == "l1":
            value = float(np.sum(np.abs(monomial_from_rescaled(f)))) / math.sqrt(f.n)
        elif kind == "lp":
            if p is None:
                raise UsageError("--kind lp requires --p")
            report["p"] = p
            est = lp_sphere_norm(f, p, samples=args.samples, seed=args.seed)
            value, report["std_error"] = est.value, est.std_error
            report["samples"] = est.samples
        elif kind == "sup":
            est = sup_sphere_norm(f, seed=args.seed)
            value = est.value
            report["bound_side"] = "lower"
        else:
            raise UsageError(f"norm kind {kind!r} is not computable here")
    report["value"] = value
    _emit(report, args)
    return EXIT_OK


def _coeff_distance(a: Form, b: Form) -> float:
    return float(np.linalg.norm(a.coeffs - b.coeffs))


def cmd_optimize(args) -> int:
    if args.iters < 1:
        raise UsageError("--iters must be at least 1")
    n, d = args.n, args.d
    if n is None or d is None:
        raise UsageError("optimize requires --n and --d")
    report = {"command": "optimize", "n": n, "d": d, "iters": args.iters,
              "samples": args.samples, "seed": args.seed}
    if args.sos:
        p = args.p
        if p is None:
            raise UsageError("--sos requires --p {1,2,inf}")
        trace = minimize_volume_sos(p, n, d, iters=args.iters,
                                    samples=args.samples, seed=args.seed)
        spec = NormSpec("spectral") if math.isinf(p) else NormSpec("schatten", p)
        report["norm"] = spec.label()
        report["theoretical_opt"] = theoretical_opt(spec, n, d)
        N = gram_dimension(n, d)
        target = np.eye(N) / (1.0 if math.isinf(p) else N ** (1.0 / p))
        report["gram_distance_to_identity_optimum"] = float(
            np.linalg.norm(trace.final_gram.entries - target))
    elif args.norm == "bombieri":
        trace = minimize_volume_form(NormSpec("bombieri"), n, d,
                                     iters=args.iters, samples=args.samples,
                                     seed=args.seed)
        report["norm"] = "bombieri"
        report["theoretical_opt"] = theoretical_opt(NormSpec("bombieri"), n, d)
        target = ball_form(n, d)
        target = Form(n, d, target.coeffs / bombieri_norm_ball_exact(n, d))
        report["distance_to_scaled_ball"] = _coeff_distance(trace.final_form, target)
    elif args.norm == "l1":
        trace = minimize_volume_form(NormSpec("l1_coeff"), n, d,
                                     iters=args.iters, samples=args.samples,
                                     seed=args.seed)
        report["norm"] = "l1"
        target = _powers_form(n, d)
        target = Form(n, d, target.coeffs / math.sqrt(n))
        report["nearest_builtin"] = f"powers/sqrt({n})"
        report["distance_to_scaled_powers"] = _coeff_distance(trace.final_form, target)
    else:
        raise UsageError("optimize needs --norm {bombieri,l1} or --sos")
    report["final_objective"] = trace.final_objective
    report["trace"] = [[k, obj, step] for k, (obj, step, _res)
                       in enumerate(trace.iterates)]
    _emit(report, args)
    if args.trace_out:
        _write_trace_csv(trace, args.trace_out)
    return EXIT_OK


_VERIFY_MATRIX_KINDS = [
    NormSpec("bombieri"),
    NormSpec("lp_sphere", 1),
    NormSpec("lp_sphere", 2),
    NormSpec("sup_sphere"),
    NormSpec("nuclear"),
    NormSpec("schatten", 1),
    NormSpec("schatten", 2),
    NormSpec("spectral"),
]
_VERIFY_MATRIX_CELLS = [(2, 2), (2, 4), (3, 2)]

_CLI_KIND = {"bombieri": "bombieri", "lp": "lp_sphere", "sup": "sup_sphere",
             "nuclear": "nuclear", "schatten": "schatten", "spectral": "spectral"}


def cmd_verify(args) -> int:
    if args.norm:
        if args.norm not in _CLI_KIND:
            raise UsageError(f"unknown verify norm {args.norm!r}")
        if args.n is None or args.d is None:
            raise UsageError("single-cell verify requires --n and --d")
        spec = NormSpec(_CLI_KIND[args.norm], args.p)
        cells = [(spec, args.n, args.d)]
    else:
        cells = [(spec, n, d) for spec in _VERIFY_MATRIX_KINDS
                 for (n, d) in _VERIFY_MATRIX_CELLS]

    def run(cell):
        spec, n, d = cell
        return verify_lower_bound(spec, n, d, trials=args.trials,
                                  seed=args.seed, samples=args.samples,
                                  rel_tol=args.tol, opt_scale=args.opt_scale)

    if args.threads > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            results = list(pool.map(run, cells))
    else:
        results = [run(cell) for cell in cells]
    passed = all(r["passed"] for r in results)
    report = {
        "command": "verify",
        "seed": args.seed,
        "trials": args.trials,
        "samples": args.samples,
        "cells": results,
        "passed": passed,
    }
    _emit(report, args)
    if not passed:
        for r in results:
            if not r["passed"]:
                print(f"verification failure: {r['norm']} (n={r['n']}, "
                      f"d={r['d']}) min_ratio={r['min_ratio']:.4f} "
                      f"violations={len(r['violations'])}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _parse_p(text: str) -> float:
    if text == "inf":
        return math.inf
    try:
        p = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid p value {text!r}")
    if p < 1:
        raise argparse.ArgumentTypeError("p must be >= 1 (or 'inf')")
    return p


def _add_common(sub, samples_default):
    sub.add_argument("--seed", type=int, default=DEFAULT_SEED,
                     help=f"random seed (default {DEFAULT_SEED})")
    sub.add_argument("--samples", type=int, default=samples_default,
                     help=f"Monte-Carlo sample count (default {samples_default})")
    sub.add_argument("--format", choices=["json", "csv"], default="json",
                     help="report format (default json)")
    sub.add_argument("--out", help="write the report to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ballvol",
        description="Norms, sublevel-set volumes, and volume-minimization "
                    "programs for homogeneous forms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_vol = sub.add_parser("volume", help="estimate vol{f <= 1}")
    p_vol.add_argument("--in", dest="input", help="form or Gram JSON file")
    p_vol.add_argument("--builtin", choices=["ball", "powers"],
                       help="use a builtin form instead of a file")
    p_vol.add_argument("--n", type=int, help="variable count (with --builtin)")
    p_vol.add_argument("--d", type=int, help="degree (with --builtin)")
    p_vol.add_argument("--method", choices=["laplace", "spherical"],
                       default="laplace", help="estimator (default laplace)")
    _add_common(p_vol, 100_000)
    p_vol.set_defaults(func=cmd_volume)

    p_norm = sub.add_parser("norm", help="evaluate a norm")
    p_norm.add_argument("--in", dest="input", required=True,
                        help="form or Gram JSON file")
    p_norm.add_argument("--kind", required=True,
                        choices=["bombieri", "l1", "lp", "sup", "schatten",
                                 "spectral"],
                        help="which norm (schatten/spectral need a Gram file)")
    p_norm.add_argument("--p", type=_parse_p, help="exponent for lp/schatten")
    _add_common(p_norm, 100_000)
    p_norm.set_defaults(func=cmd_norm)

    p_opt = sub.add_parser("optimize", help="minimize volume over a norm ball")
    p_opt.add_argument("--norm", choices=["bombieri", "l1"],
                       help="coefficient-space program")
    p_opt.add_argument("--sos", action="store_true",
                       help="Gram-matrix program (requires --p)")
    p_opt.add_argument("--p", type=_parse_p, help="Schatten exponent for --sos")
    p_opt.add_argument("--n", type=int, help="variable count")
    p_opt.add_argument("--d", type=int, help="degree (even)")
    p_opt.add_argument("--iters", type=int, default=80,
                       help="subgradient iterations (default 80)")
    p_opt.add_argument("--trace-out", help="write the iterate trace CSV here")
    _add_common(p_opt, 20_000)
    p_opt.set_defaults(func=cmd_optimize)

    p_ver = sub.add_parser("verify", help="randomized lower-bound checks")
    p_ver.add_argument("--norm",
                       choices=["bombieri", "lp", "sup", "nuclear", "schatten",
                                "spectral"],
                       help="single cell; omit to run the full matrix")
    p_ver.add_argument("--p", type=_parse_p, help="exponent for lp/schatten")
    p_ver.add_argument("--n", type=int, help="variable count (single cell)")
    p_ver.add_argument("--d", type=int, help="degree (single cell)")
    p_ver.add_argument("--trials", type=int, default=500,
                       help="random feasible forms per cell (default 500)")
    p_ver.add_argument("--tol", type=float, default=1e-3,
                       help="relative slack on the bound (default 1e-3)")
    p_ver.add_argument("--threads", type=int, default=1,
                       help="worker threads across matrix cells (default 1)")
    p_ver.add_argument("--opt-scale", type=float, default=1.0,
                       help="multiply the theoretical bound (fault injection)")
    _add_common(p_ver, 4000)
    p_ver.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
