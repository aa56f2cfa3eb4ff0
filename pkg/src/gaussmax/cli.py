"""Command-line front end.

Exit status: 0 success, 1 usage or precondition error, 2 numerical failure,
3 a computed quantity contradicts the single-crossing theorem.
"""

import argparse
import json
import math
import sys
import time

import numpy as np

from . import dominance, montecarlo, special, trial, verifier
from .exceptions import (
    GaussMaxError,
    InconclusiveError,
    ParameterError,
    QuadratureError,
    TheoremViolation,
)
from .maxdist import EquicorrParams, QuadratureSpec, max_cdf, max_pdf, max_quantile

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_THEOREM = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------- output

def _num(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if not math.isfinite(v):
        return "null"
    return f"{v:.17g}"


def _json(obj):
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_json(v) for v in obj) + "]"
    return _num(obj)


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (list, tuple)):
        return " ".join(_num(x) for x in v)
    return _num(v)


def _plain_cell(v):
    if isinstance(v, float):
        return f"{v:.10g}"
    return _cell(v)


def emit(result, fmt: str) -> str:
    """Serialise a dict (one record) or a list of dicts (a table).

    ``json`` keeps insertion order and prints numbers with 17 significant
    digits; ``csv`` writes a header then one line per row; ``plain`` is an
    aligned table for reading.
    """
    rows = result if isinstance(result, list) else [result]
    if fmt == "json":
        return _json(result) + "\n"
    cols = list(rows[0].keys()) if rows else []
    if fmt == "csv":
        lines = [",".join(cols)] + [",".join(_cell(r[c]) for c in cols) for r in rows]
        return "\n".join(lines) + "\n"
    table = [cols] + [[_plain_cell(r[c]) for c in cols] for r in rows]
    widths = [max(len(row[j]) for row in table) for j in range(len(cols))]
    return "\n".join("  ".join(cell.rjust(w) for cell, w in zip(row, widths)).rstrip()
                     for row in table) + "\n"


# ---------------------------------------------------------------- parsing

def _floats(text):
    try:
        vals = [float(t) for t in text.replace(" ", "").split(",") if t != ""]
    except ValueError:
        raise UsageError(f"cannot parse number list {text!r}")
    if not vals:
        raise UsageError("empty number list")
    return vals


def parse_grid(text):
    """``lo:hi:step`` -> inclusive evenly spaced grid."""
    try:
        lo, hi, step = (float(t) for t in text.split(":"))
    except ValueError:
        raise UsageError(f"grid must look like lo:hi:step, got {text!r}")
    if not (step > 0 and hi >= lo):
        raise UsageError("grid needs step > 0 and hi >= lo")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(n)


_VALUE_OPTS = {"--k", "--rho", "--mu", "--grid", "--zeta", "--zetas", "--kappa", "--n",
               "--seed", "--alpha", "--probes", "--k-max", "--nodes", "--radius",
               "--abs-tol", "--format", "--reports"}


def _glue_values(argv):
    # lets `--mu -0.5,-1` and `--grid -3:3:1` through without `=` or quoting
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUE_OPTS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def _common(fmt="json"):
    # a fresh parent per subcommand: argparse parents share their actions,
    # so a per-command default would otherwise leak into every command
    common = _Parser(add_help=False)
    common.add_argument("--k", type=int, help="number of coordinates (defaults to len(mu))")
    common.add_argument("--rho", type=float, required=True, help="common correlation in (0, 1)")
    common.add_argument("--mu", required=True,
                        help="comma-separated means; negative lists need quoting or '=', "
                             "e.g. --mu=-0.5,-0.5 or --mu ' -0.5,-0.5'")
    common.add_argument("--nodes", type=int, default=256)
    common.add_argument("--radius", type=float, default=9.0)
    common.add_argument("--abs-tol", type=float, default=1e-12)
    common.add_argument("--format", choices=("json", "csv", "plain"), default=fmt)
    common.add_argument("--timings", action="store_true",
                        help="report wall time on stderr")
    return common


def _build_parser():

    parser = _Parser(prog="gaussmax",
                     description="Maximum of an equicorrelated Gaussian vector versus N(0, 1).")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, what in (("cdf", "distribution function"), ("pdf", "density")):
        p = sub.add_parser(name, parents=[_common()], help=f"{what} of the maximum on a grid")
        p.add_argument("--grid", required=True, help="lo:hi:step, inclusive")
    p = sub.add_parser("quantile", parents=[_common()], help="quantiles of the maximum")
    p.add_argument("--zeta", required=True, help="comma-separated probabilities")
    sub.add_parser("classify", parents=[_common()], help="dominance verdict")
    p = sub.add_parser("crossing", parents=[_common()],
                       help="crossing point and sign-change count on a grid")
    p.add_argument("--grid", help="lo:hi:step (default spans the support, 1601 points)")
    p = sub.add_parser("mc-check", parents=[_common()], help="Monte Carlo agreement in a DKW band")
    p.add_argument("--n", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alpha", type=float, default=0.001)
    p.add_argument("--grid")
    p = sub.add_parser("corollary", parents=[_common()], help="threshold shifts over zeta")
    p.add_argument("--kappa", type=float, help="defaults to P(all X_i < 0)")
    p.add_argument("--zetas", required=True)
    p = sub.add_parser("sample", parents=[_common("csv")], help="dump Monte Carlo maxima")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("verify", help="sweep the proof-chain inequalities")
    p.add_argument("--probes", type=int, default=500)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--k-max", type=int, default=4)
    p.add_argument("--nodes", type=int, default=256)
    p.add_argument("--radius", type=float, default=9.0)
    p.add_argument("--abs-tol", type=float, default=1e-12)
    p.add_argument("--format", choices=("json", "csv", "plain"), default="json")
    p.add_argument("--reports", help="write every probe report to this JSON-lines file")
    p.add_argument("--timings", action="store_true")
    return parser


def _params(ns):
    mu = _floats(ns.mu)
    k = ns.k if ns.k is not None else len(mu)
    return EquicorrParams(k, ns.rho, tuple(mu))


def _quad(ns):
    return QuadratureSpec(ns.nodes, ns.radius, ns.abs_tol)


# ---------------------------------------------------------------- commands

def _cmd_grid(ns, fn, col):
    p, q = _params(ns), _quad(ns)
    x = parse_grid(ns.grid)
    vals = fn(x, p, q)
    return EXIT_OK, [{"x": float(a), col: float(b)} for a, b in zip(x, vals)]


def _cmd_quantile(ns):
    p, q = _params(ns), _quad(ns)
    return EXIT_OK, [{"zeta": z, "x": max_quantile(z, p, q)} for z in _floats(ns.zeta)]


def _cmd_classify(ns):
    return EXIT_OK, dominance.find_crossing(_params(ns), _quad(ns)).to_dict()


def _cmd_crossing(ns):
    p, q = _params(ns), _quad(ns)
    v = dominance.find_crossing(p, q)
    grid = parse_grid(ns.grid) if ns.grid else dominance.default_grid(p)
    rec = v.to_dict()
    if v.x0 is not None:
        rec["zeta0"] = special.std_normal_cdf(v.x0)
        rec["cdf_gap"] = max_cdf(v.x0, p, q) - special.std_normal_cdf(v.x0)
    else:
        rec["zeta0"] = rec["cdf_gap"] = None
    changes = dominance.count_sign_changes(p, grid, q)
    rec["sign_changes"] = changes
    return (EXIT_THEOREM if changes > 1 else EXIT_OK), rec


def _cmd_mc(ns):
    p, q = _params(ns), _quad(ns)
    grid = parse_grid(ns.grid) if ns.grid else None
    r = montecarlo.kernel_agreement(p, ns.n, ns.seed, grid, ns.alpha, q)
    return (EXIT_OK if r.passed else EXIT_NUMERIC), r._asdict()


def _cmd_corollary(ns):
    p, q = _params(ns), _quad(ns)
    entries = trial.zeta_sweep(p, ns.kappa, _floats(ns.zetas), q)
    for e in entries:
        if e.error is not None:
            print(f"gaussmax: zeta={e.zeta!r}: {e.error}", file=ns.stderr)
    rows = [e.result.to_dict() for e in entries if e.result is not None]
    return (EXIT_USAGE if any(e.error for e in entries) else EXIT_OK), rows


def _cmd_sample(ns):
    x = montecarlo.draw_maxima(_params(ns), ns.n, ns.seed)
    return EXIT_OK, [{"index": i, "x_star": float(v)} for i, v in enumerate(x)]


def _cmd_verify(ns):
    q = _quad(ns)
    probes = verifier.default_probes(ns.probes, ns.seed, ns.k_max)
    reports = verifier.sweep_proof_chain(probes, q) + verifier.sampford_reports()
    if ns.reports:
        with open(ns.reports, "w") as fh:
            for r in reports:
                fh.write(_json(r.to_dict()) + "\n")
    by = {}
    for r in reports:
        name = r.quantity.split("[")[0]
        d = by.setdefault(name, {"count": 0, "min": math.inf, "max": -math.inf, "violations": 0})
        d["count"] += 1
        d["min"] = min(d["min"], r.value)
        d["max"] = max(d["max"], r.value)
        d["violations"] += not r.lower_bound_ok
    violations = sum(d["violations"] for d in by.values())
    if ns.format == "json":
        out = {"probes": len(probes), "reports": len(reports), "violations": violations,
               "by_quantity": by}
    else:
        out = [dict(quantity=k, **v) for k, v in by.items()]
    return (EXIT_THEOREM if violations else EXIT_OK), out


_COMMANDS = {
    "cdf": lambda ns: _cmd_grid(ns, max_cdf, "cdf"),
    "pdf": lambda ns: _cmd_grid(ns, max_pdf, "pdf"),
    "quantile": _cmd_quantile,
    "classify": _cmd_classify,
    "crossing": _cmd_crossing,
    "mc-check": _cmd_mc,
    "corollary": _cmd_corollary,
    "sample": _cmd_sample,
    "verify": _cmd_verify,
}


def run(argv, stdout=None, stderr=None) -> int:
    """Execute one command line; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    start = time.perf_counter()
    try:
        ns = _build_parser().parse_args(_glue_values(list(argv)))
        ns.stderr = stderr
        status, result = _COMMANDS[ns.command](ns)
    except (UsageError, ParameterError) as exc:
        print(f"gaussmax: error: {exc}", file=stderr)
        return EXIT_USAGE
    except TheoremViolation as exc:
        print(f"gaussmax: THEOREM VIOLATION: {exc}", file=stderr)
        return EXIT_THEOREM
    except (QuadratureError, InconclusiveError, GaussMaxError, ArithmeticError) as exc:
        print(f"gaussmax: numerical failure: {exc}", file=stderr)
        return EXIT_NUMERIC
    stdout.write(emit(result, ns.format))
    if ns.timings:
        print(f"gaussmax: {ns.command} took {time.perf_counter() - start:.3f} s", file=stderr)
    return status


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
