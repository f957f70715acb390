"""Command line interface: ``scaled-uniform {estimate,risk,coverage,selftest}``.

Exit codes: 0 success, 2 usage or configuration error (including malformed
data files), 3 data inconsistent with ``k``, 4 self-test failure.
"""

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass

from . import estimators as est
from . import risklab
from ._validation import InfeasibleSampleError
from .fiducial import LossKind, confidence_interval, fiducial_dist
from .model import Design, SuffStat

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_SELFTEST = 4

RISK_COLUMNS = ["estimator", "n", "k", "theta", "loss", "method", "value", "stderr", "reps", "seed"]
COVERAGE_COLUMNS = ["gamma", "n", "k", "theta", "interval", "reps", "hits", "coverage", "stderr", "seed"]
SCHEMA_VERSION = 1

_NUM = {"type": "number"}
_NUM_OR_NULL = {"type": ["number", "null"]}
_INT_OR_NULL = {"type": ["integer", "null"]}

RISK_JSON_SCHEMA = {
    "type": "object",
    "required": ["kind", "schema_version", "rows"],
    "properties": {
        "kind": {"const": "risk"},
        "schema_version": {"const": SCHEMA_VERSION},
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": RISK_COLUMNS,
                "additionalProperties": False,
                "properties": {
                    "estimator": {"type": "string"},
                    "n": {"type": "integer", "minimum": 1},
                    "k": _NUM,
                    "theta": _NUM,
                    "loss": {"enum": [x.value for x in LossKind if x is not LossKind.DIRAC]},
                    "method": {"enum": ["quad", "mc"]},
                    "value": {"type": "number", "minimum": 0},
                    "stderr": {"type": "number", "minimum": 0},
                    "reps": _INT_OR_NULL,
                    "seed": _INT_OR_NULL,
                },
            },
        },
    },
}

COVERAGE_JSON_SCHEMA = {
    "type": "object",
    "required": ["kind", "schema_version", "rows"],
    "properties": {
        "kind": {"const": "coverage"},
        "schema_version": {"const": SCHEMA_VERSION},
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": COVERAGE_COLUMNS,
                "additionalProperties": False,
                "properties": {
                    "gamma": _NUM,
                    "n": {"type": "integer", "minimum": 1},
                    "k": _NUM,
                    "theta": _NUM,
                    "interval": {"enum": ["equal_tailed", "hdi"]},
                    "reps": {"type": "integer", "minimum": 1},
                    "hits": {"type": "integer", "minimum": 0},
                    "coverage": {"type": "number", "minimum": 0, "maximum": 1},
                    "stderr": {"type": "number", "minimum": 0},
                    "seed": _INT_OR_NULL,
                },
            },
        },
    },
}


class UsageError(Exception):
    pass


class MalformedDataError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    designs: list
    thetas: list
    estimators: list
    losses: list
    gammas: list
    reps: int
    seed: int
    method: str
    fmt: str
    out: str | None
    workers: int | None
    interval: str = "equal_tailed"


def _floats(text, name):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--{name}: expected comma-separated numbers, got {text!r}") from None


def _ints(text, name):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--{name}: expected comma-separated integers, got {text!r}") from None


def _designs(args):
    try:
        if args.grid:
            pairs = []
            for item in args.grid.split(","):
                n, _, k = item.partition(":")
                pairs.append(Design(k=float(k), n=int(n)))
            return pairs
        ns = _ints(args.n, "n") if args.n else list(risklab.DEFAULT_NS)
        ks = _floats(args.k, "k") if args.k else list(risklab.DEFAULT_KS)
        return [Design(k=k, n=n) for n in ns for k in ks]
    except (ValueError, TypeError) as exc:
        raise UsageError(f"invalid design: {exc}") from None


def build_config(args):
    """Validate parsed arguments before any computation starts."""
    names = [x.strip() for x in args.estimators.split(",") if x.strip()] if getattr(args, "estimators", None) else []
    for name in names:
        try:
            est.get_estimator(name)
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
    losses = []
    for name in (args.loss.split(",") if getattr(args, "loss", None) else []):
        try:
            loss = LossKind(name.strip())
        except ValueError:
            raise UsageError(
                f"unknown loss {name!r}; choose from {', '.join(x.value for x in LossKind)}"
            ) from None
        if loss is LossKind.DIRAC:
            raise UsageError("the dirac loss has no frequentist risk")
        losses.append(loss)
    thetas = _floats(args.theta, "theta") if getattr(args, "theta", None) else [1.0]
    if any(not t > 0 for t in thetas):
        raise UsageError("--theta values must be positive")
    gammas = _floats(args.gamma, "gamma") if getattr(args, "gamma", None) is not None else []
    if args.subcommand == "coverage":
        if not gammas:
            raise UsageError("--gamma needs at least one value")
        if any(not 0.0 <= g < 1.0 for g in gammas):
            raise UsageError("--gamma values must lie in [0, 1)")
    reps = getattr(args, "reps", risklab.MIN_REPS)
    if reps < risklab.MIN_REPS:
        raise UsageError(f"--reps must be at least {risklab.MIN_REPS}")
    if args.workers is not None and args.workers < 1:
        raise UsageError("--workers must be at least 1")
    return RunConfig(
        subcommand=args.subcommand,
        designs=_designs(args),
        thetas=thetas,
        estimators=names,
        losses=losses,
        gammas=gammas,
        reps=reps,
        seed=getattr(args, "seed", 0),
        method=getattr(args, "method", "quad"),
        fmt=args.format,
        out=args.out,
        workers=args.workers,
        interval=getattr(args, "interval", "equal_tailed"),
    )


def risk_rows(config):
    rows = []
    for design in config.designs:
        for loss in config.losses:
            for theta in config.thetas:
                if config.method in ("quad", "both"):
                    reports = risklab.quad_risks(config.estimators, design, loss, theta)
                    rows.extend(reports[e] for e in _names(config))
                if config.method in ("mc", "both"):
                    res = risklab.mc_risks(
                        config.estimators, theta, design, loss, config.reps, config.seed, config.workers
                    )
                    rows.extend(res.report(e) for e in _names(config))
    return [
        dict(estimator=r.estimator, n=r.n, k=r.k, theta=r.theta, loss=r.loss, method=r.method,
             value=r.value, stderr=r.stderr, reps=r.reps, seed=r.seed)
        for r in rows
    ]


def _names(config):
    return [est.get_estimator(e).name for e in config.estimators]


def coverage_rows(config):
    rows = []
    for design in config.designs:
        for theta in config.thetas:
            for gamma in config.gammas:
                r = risklab.coverage(gamma, theta, design, config.reps, config.seed,
                                     config.workers, config.interval)
                rows.append(dict(gamma=r.gamma, n=r.n, k=r.k, theta=r.theta, interval=r.kind,
                                 reps=r.reps, hits=r.hits, coverage=r.coverage,
                                 stderr=r.stderr, seed=r.seed))
    return rows


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render(kind, rows, columns, fmt):
    if fmt == "json":
        return json.dumps({"kind": kind, "schema_version": SCHEMA_VERSION, "rows": rows}, indent=1) + "\n"
    buf = io.StringIO()
    buf.write(f"# scaled-uniform {kind} report, schema v{SCHEMA_VERSION}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row[c]) for c in columns])
    return buf.getvalue()


def _emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as f:
            f.write(text)


def read_data_file(path):
    """Whitespace-separated numbers; ``#`` starts a comment."""
    try:
        with open(path, encoding="utf-8") as f:
            lines = f.read().splitlines()
    except OSError as exc:
        raise MalformedDataError(f"cannot read {path}: {exc.strerror}") from None
    values = []
    for lineno, line in enumerate(lines, 1):
        for token in line.split("#", 1)[0].split():
            try:
                values.append(float(token))
            except ValueError:
                raise MalformedDataError(f"{path}:{lineno}: not a number: {token!r}") from None
    if not values:
        raise MalformedDataError(f"{path}: no observations found")
    if any(not (v > 0 and v < float("inf")) for v in values):
        raise MalformedDataError(f"{path}: observations must be finite and positive")
    return values


def cmd_estimate(args):
    values = read_data_file(args.datafile)
    if args.k is None:
        raise UsageError("--k is required")
    try:
        k = float(args.k)
        design = Design(k=k, n=len(values))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    s = SuffStat.from_extremes(min(values), max(values), design)
    gammas = _floats(args.gamma, "gamma") if args.gamma else [0.05]
    if any(not 0.0 < g < 1.0 for g in gammas):
        raise UsageError("--gamma values must lie in (0, 1)")
    fd = fiducial_dist(s)
    estimates = {name: float(e(s)) for name, e in est.catalog().items()}
    intervals = [(g, *confidence_interval(s, g)) for g in gammas]
    if args.format == "json":
        payload = {
            "n": design.n, "k": design.k, "y_min": s.y_min, "y_max": s.y_max,
            "sure_interval": [s.theta_ml, s.theta_mu],
            "fiducial": {"alpha": design.n, "a": s.theta_ml, "b": s.theta_mu, "median": fd.median()},
            "estimates": estimates,
            "intervals": [{"gamma": g, "lower": lo, "upper": hi} for g, lo, hi in intervals],
        }
        _emit(json.dumps(payload, indent=1) + "\n", args.out)
        return EXIT_OK
    g6 = "{:.6g}".format
    lines = [
        f"n = {design.n}, k = {g6(design.k)}",
        f"sure interval: [{g6(s.theta_ml)}, {g6(s.theta_mu)}]",
        f"fiducial: Pareto({design.n}, [{g6(s.theta_ml)}, {g6(s.theta_mu)}]), median {g6(fd.median())}",
        "",
        f"{'estimator':<10} {'value':>12}",
    ]
    lines += [f"{name:<10} {g6(v):>12}" for name, v in estimates.items()]
    lines += ["", f"{'gamma':<10} {'level':>8} {'lower':>12} {'upper':>12}"]
    lines += [f"{g6(g):<10} {g6(1 - g):>8} {g6(lo):>12} {g6(hi):>12}" for g, lo, hi in intervals]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_risk(args):
    config = build_config(args)
    if not config.losses:
        config.losses = [LossKind.SQUARED]
    if not config.estimators:
        config.estimators = list(est.catalog())
    _emit(render("risk", risk_rows(config), RISK_COLUMNS, config.fmt), config.out)
    return EXIT_OK


def cmd_coverage(args):
    config = build_config(args)
    _emit(render("coverage", coverage_rows(config), COVERAGE_COLUMNS, config.fmt), config.out)
    return EXIT_OK


def cmd_selftest(args):
    from .selftest import run_selftest

    results = run_selftest()
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.name} (tol {r.tolerance}): {r.detail} [{r.seconds:.1f}s]")
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_SELFTEST


def _common(p, fmt_choices, fmt_default):
    p.add_argument("--format", choices=fmt_choices, default=fmt_default)
    p.add_argument("--out", help="output path (default: standard output)")
    p.add_argument("--workers", type=int, default=None,
                   help="parallel workers (default: available CPUs); results do not depend on it")


def _experiment(p):
    p.add_argument("--n", help="comma-separated sample sizes (crossed with --k)")
    p.add_argument("--k", help="comma-separated spreads in (0, 1)")
    p.add_argument("--grid", help="explicit design list, e.g. 2:0.5,5:0.1 (overrides --n/--k)")
    p.add_argument("--theta", default="1", help="comma-separated true scales")
    p.add_argument("--reps", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    parser = argparse.ArgumentParser(prog="scaled-uniform", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("estimate", help="estimates and fiducial intervals for a data file")
    p.add_argument("datafile")
    p.add_argument("--k", required=True)
    p.add_argument("--gamma", help="comma-separated miss probabilities (default 0.05)")
    _common(p, ["text", "json"], "text")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("risk", help="risk of estimators over a design grid")
    _experiment(p)
    p.add_argument("--estimators", help="comma-separated catalog names (default: all)")
    p.add_argument("--loss", default="squared", help="comma-separated loss kinds")
    p.add_argument("--method", choices=["quad", "mc", "both"], default="both")
    _common(p, ["csv", "json"], "csv")
    p.set_defaults(func=cmd_risk)

    p = sub.add_parser("coverage", help="empirical coverage of fiducial intervals")
    _experiment(p)
    p.add_argument("--gamma", default="0.5,0.1,0.05,0.01")
    p.add_argument("--interval", choices=["equal_tailed", "hdi"], default="equal_tailed")
    _common(p, ["csv", "json"], "csv")
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("selftest", help="run reduced-scale consistency checks")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except MalformedDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleSampleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
