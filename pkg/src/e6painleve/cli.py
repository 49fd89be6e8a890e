"""Command-line front end: ``e6painleve <command> [options]``.

Exit status is 0 when every check passes, 1 on a verification failure, 2 on
a usage error and 3 when a numerical stage does not converge.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile

from .dp_maps import XYState, base_points_verify, psi_forward, sk7_batch, theorem1_batch, xy_to_qp
from .errors import NonConverged, PrecisionExhausted, Singular
from .orthopoly import DEFAULT_TOLERANCE, RESIDUAL_KEYS, decimal_digits, default_precision, run_pipeline
from .picard import lattice_report
from .scalars import real_context, to_fraction
from .weyl import relations_report

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NONCONVERGED = 0, 1, 2, 3
PRECISION_ENV = "E6PAINLEVE_PRECISION"


class UsageError(Exception):
    pass


def _rational(text: str):
    try:
        return to_fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _tolerance(text: str) -> str:
    ctx = real_context(64)
    try:
        value = ctx.mpf(text)
    except (ValueError, TypeError):
        raise argparse.ArgumentTypeError(f"bad tolerance {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="e6painleve", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, default_format="json"):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--format", choices=("csv", "json"), default=default_format)
        p.add_argument("--out", help="write here (atomically) instead of stdout")
        return p

    add("lattice-verify", "exact Picard-lattice identities")
    for name, seed, text in (
        ("weyl-verify", 1, "group relations of the birational action"),
        ("theorem1-verify", 7, "recurrence vs. standard step, and the d-P_II relabelling"),
    ):
        p = add(name, text)
        p.add_argument("--trials", type=_positive_int, default=100)
        p.add_argument("--seed", type=int, default=seed)

    p = add("basepoints-verify", "base points and the cascade of the recurrence map")
    p.add_argument("--lambda", dest="lam", type=_rational, required=True)
    p.add_argument("--s", type=_rational, required=True)
    p.add_argument("--n", type=_rational, required=True)

    p = add("op-run", "orthogonal-polynomial pipeline with every residual suite", "csv")
    p.add_argument("--lambda", dest="lam", type=_rational, required=True)
    p.add_argument("--s", type=_rational, required=True)
    p.add_argument("--n-max", type=int, default=40)
    p.add_argument("--precision", type=int, default=None, help=f"bits; default from ${PRECISION_ENV}")
    p.add_argument("--tolerance", type=_tolerance, default=DEFAULT_TOLERANCE)

    p = add("orbit", "iterate the recurrence map from an exact seed", "csv")
    p.add_argument("--lambda", dest="lam", type=_rational, required=True)
    p.add_argument("--s", type=_rational, required=True)
    p.add_argument("--n", type=_rational, required=True)
    p.add_argument("--x", type=_rational, required=True)
    p.add_argument("--y", type=_rational, required=True)
    p.add_argument("--steps", type=_nonnegative_int, default=10)
    return parser


# --------------------------------------------------------------------------
# Commands: each returns (config, results, failures, csv rows)
# --------------------------------------------------------------------------


def _check_rows(checks):
    header = ["check", "trials", "failures", "resamples", "passed"]
    rows = [[c.name, c.trials, c.failures, c.resamples, int(c.passed)] for c in checks]
    return [header] + rows


def _suite(checks):
    results = [c.to_json() for c in checks]
    failures = [
        {"check": c.name, "witness": c.first_failure_witness} for c in checks if not c.passed
    ]
    return results, failures, _check_rows(checks)


def cmd_lattice(args):
    return ({}, *_suite(lattice_report()))


def cmd_weyl(args):
    config = {"trials": args.trials, "seed": args.seed}
    return (config, *_suite(relations_report(args.trials, args.seed)))


def cmd_theorem1(args):
    config = {"trials": args.trials, "seed": args.seed}
    checks = theorem1_batch(args.trials, args.seed) + [sk7_batch(args.trials, args.seed)]
    return (config, *_suite(checks))


def cmd_basepoints(args):
    config = {"lambda": str(args.lam), "s": str(args.s), "n": str(args.n)}
    report = base_points_verify(args.lam, args.s, args.n)
    failures = [{"check": "base points", "witness": f} for f in report["failures"]]
    rows = [["point", "chart", "zero_over_zero", "direction_dependent"]]
    for p in report["points"]:
        rows.append([p["point"], p["chart"], int(p["zero_over_zero"]), int(p["direction_dependent"])])
    return config, report, failures, rows


def resolve_precision(flag: int | None, n_max: int) -> int:
    """Flag, then environment, then the size-dependent default."""
    if flag is not None:
        return flag
    env = os.environ.get(PRECISION_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"${PRECISION_ENV} must be an integer, got {env!r}") from None
    return default_precision(n_max)


OP_COLUMNS = ("n", "alpha", "beta", "R", "r", "x", "y", "xt", "yt") + RESIDUAL_KEYS


def cmd_op_run(args):
    if args.n_max < 2:
        raise UsageError("--n-max must be at least 2")
    precision = resolve_precision(args.precision, args.n_max)
    if precision < 64:
        raise UsageError("precision must be at least 64 bits")
    result = run_pipeline(args.lam, args.s, args.n_max, precision, args.tolerance)
    rt, lt = result.table, result.ladder
    ctx = rt.ctx
    digits = decimal_digits(result.precision)

    def fmt(v):
        return "" if v is None else ctx.nstr(v, digits, min_fixed=-1, max_fixed=-1)

    states = {int(st.n): st for st in result.states}
    rows = [list(OP_COLUMNS)]
    for n in range(result.N + 1):
        st = states.get(n)
        row = [n, fmt(rt.alpha[n]), fmt(rt.beta[n]), fmt(lt.R[n]), fmt(lt.r[n]),
               fmt(st.x if st else None), fmt(st.y if st else None),
               fmt(result.bv["xt"][n]), fmt(result.bv["yt"][n])]
        row += [fmt(result.residuals[k].get(n)) for k in RESIDUAL_KEYS]
        rows.append(row)

    config = {
        "lambda": str(args.lam), "s": str(args.s), "n_max": args.n_max,
        "precision": precision, "tolerance": args.tolerance,
    }
    summary = {k: ctx.nstr(result.max_residual(k), 6) for k in RESIDUAL_KEYS}
    results = {
        "final_precision": result.precision,
        "doublings": result.doublings,
        "max_residual": summary,
        "betas_positive": result.betas_positive,
        "precision_loss_bits": round(max(rt.losses), 1),
        "table": [dict(zip(OP_COLUMNS, r)) for r in rows[1:]],
    }
    failures = [
        {"check": k, "max_abs": summary[k]}
        for k in RESIDUAL_KEYS if not result.max_residual(k) < result.tolerance
    ]
    if not result.betas_positive:
        failures.append({"check": "beta_n > 0", "betas": [fmt(b) for b in rt.beta[1:]]})
    return config, results, failures, rows


def cmd_orbit(args):
    config = {k: str(getattr(args, k)) for k in ("lam", "s", "n", "x", "y")}
    config["steps"] = args.steps
    config["lambda"] = config.pop("lam")
    seed = XYState(args.lam, args.s, args.n, args.x, args.y)
    failures = []
    states = [seed]
    try:
        for _ in range(args.steps):
            states.append(psi_forward(states[-1]))
    except Singular as exc:
        failures.append({"check": "orbit", "witness": {"step": len(states), "reason": str(exc)}})
    rows = [["n", "x", "y", "q", "p"]]
    for st in states:
        try:
            c = xy_to_qp(st)
            q, p = str(c.q), str(c.p)
        except Singular:
            q = p = ""
        rows.append([str(st.n), str(st.x), str(st.y), q, p])
    results = [dict(zip(rows[0], r)) for r in rows[1:]]
    return config, results, failures, rows


COMMANDS = {
    "lattice-verify": cmd_lattice,
    "weyl-verify": cmd_weyl,
    "theorem1-verify": cmd_theorem1,
    "basepoints-verify": cmd_basepoints,
    "op-run": cmd_op_run,
    "orbit": cmd_orbit,
}


# --------------------------------------------------------------------------
# Output
# --------------------------------------------------------------------------


def render(command, fmt, config, results, failures, rows) -> str:
    if fmt == "json":
        doc = {"command": command, "config": config, "results": results, "failures": failures}
        return json.dumps(doc, indent=2, sort_keys=False, default=str) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def write_atomic(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config, results, failures, rows = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except (NonConverged, PrecisionExhausted) as exc:
        print(f"e6painleve: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    config = {"format": args.format, **config}
    text = render(args.command, args.format, config, results, failures, rows)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    if failures:
        for f in failures:
            print(f"e6painleve: FAIL {f['check']}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
