"""Command-line front end.

Exit codes: 0 when every check passed, 1 when a violation was found,
2 for usage or configuration errors.  Output depends only on the flags,
so identical invocations write identical bytes.
"""
import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import bmo, measure
from .fourier import sobolev_norm
from .grid import FAMILIES, ConfigError, GeneratorId, GridFunction, GridSpec, lp_quadrature, sample
from .inequality import check_params, default_corpus, run_verifier, sweep

INEQS = ("gn1", "gn2", "lorentz", "eps", "bernstein", "young", "young-weak", "young-sharp", "hy", "jn")

# flags each inequality cannot do without
REQUIRED = {
    "gn1": ("p", "q", "s"),
    "gn2": ("p", "q"),
    "lorentz": ("p", "q"),
    "eps": ("p",),
    "bernstein": ("p", "q", "R"),
    "young": ("p", "q", "r"),
    "young-weak": ("p", "q", "r"),
    "young-sharp": ("p", "q", "r"),
    "hy": ("p",),
    "jn": (),
}

JN_MIN_R2 = 0.9
DEFAULT_N = {1: 1024, 2: 256, 3: 64}


class UsageError(Exception):
    pass


def _clean(x):
    """JSON-safe copy: non-finite floats become null, numpy scalars become Python."""
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.generic):
        x = x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def _dumps(obj) -> str:
    return json.dumps(_clean(obj), allow_nan=False)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, choices=(1, 2, 3), default=2)
    common.add_argument("--N", type=int, help="grid size (default 1024, 256, 64 for n = 1, 2, 3)")
    common.add_argument("--L", type=float, default=6.0)
    common.add_argument("--family", choices=FAMILIES, default="gaussian")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--a", type=float, help="power-law exponent (default n/2)")
    common.add_argument("--bandwidth", type=int, default=4, help="trig-poly bandwidth")
    for name in ("p", "q", "s", "r"):
        common.add_argument(f"--{name}", type=float)
    common.add_argument("--R", type=float)
    common.add_argument("--M", type=float)
    common.add_argument("--ineq", choices=INEQS)
    common.add_argument("--in", dest="inp", metavar="PATH")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--report", choices=("jsonl", "csv"), default="jsonl")
    common.add_argument("--max-level", type=int)
    common.add_argument("--perturb-theta", type=float, default=0.0)

    parser = argparse.ArgumentParser(prog="weaknorms", description="Weak-norm interpolation toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("gen", parents=[common], help="sample a generator and write GridFunction JSON")
    sub.add_parser("norm", parents=[common], help="norms of a grid function")
    sub.add_parser("verify", parents=[common], help="evaluate one inequality")
    sub.add_parser("sweep", parents=[common], help="run one inequality over the default corpus")
    sub.add_parser("cz", parents=[common], help="Calderon-Zygmund decomposition of |f| at level M")
    sub.add_parser("selftest", parents=[common], help="run the built-in invariant suite")
    return parser


def _spec(args):
    return GridSpec(args.n, args.L, args.N if args.N is not None else DEFAULT_N[args.n])


def _generator(args):
    a = args.a if args.a is not None else args.n / 2.0
    return GeneratorId(
        args.family,
        a=a if args.family == "power-law" else None,
        seed=args.seed if args.family in ("random-mix", "trig-poly") else None,
        bandwidth=args.bandwidth if args.family == "trig-poly" else None,
    )


def _load_function(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc.msg} at line {exc.lineno}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"{path} does not hold a grid function object")
    return GridFunction.from_dict(data)


def _function(args):
    if args.inp:
        return _load_function(args.inp)
    return sample(_spec(args), _generator(args))


def _need(args, ineq):
    missing = [k for k in REQUIRED[ineq] if getattr(args, k) is None]
    if missing:
        raise UsageError(f"--ineq {ineq} needs " + ", ".join("--" + k for k in missing))


def _params(args):
    p = {k: getattr(args, k) for k in ("p", "q", "s", "r", "R") if getattr(args, k) is not None}
    if args.max_level is not None:
        p["max_level"] = args.max_level
    if args.perturb_theta:
        p["perturb_theta"] = args.perturb_theta
    return p


def _jn(f):
    Q = bmo.DyadicCube.root(f.spec.n)
    block = f.grid[Q.slices(f.spec)]
    dev = np.abs(block - block.mean())
    alphas = np.linspace(0.0, float(dev.max()), 42)[1:-1]
    fit = bmo.jn_decay_check(f, Q, alphas, fit_start=float(dev.mean()))
    d = fit.to_dict()
    d["function"] = f.label
    d["spec"] = f.spec.to_dict()
    d["ok"] = bool(fit.decays and fit.r2 >= JN_MIN_R2)
    return d, ([] if d["ok"] else [f"jn: no exponential decay (slope={fit.slope:.4g}, r2={fit.r2:.4g})"])


def _verify_one(args, f):
    ineq = args.ineq
    if ineq == "jn":
        return _jn(f)
    params = _params(args)
    check_params(ineq, f.spec.n, params)
    rep = run_verifier(ineq, f, params)
    return rep.to_dict(), rep.violations


CSV_FIELDS = ("name", "function", "n", "L", "N", "params", "lhs", "rhs_core", "ratio",
              "scaling_drift", "ok")


def _csv_row(d):
    spec = d.get("spec") or {}
    params = d.get("params")
    if params is None:
        params = {k: d[k] for k in ("slope", "r2", "points") if k in d}
    row = {
        "name": d.get("name"),
        "function": d.get("function"),
        "n": spec.get("n"),
        "L": spec.get("L"),
        "N": spec.get("N"),
        "params": _dumps(params),
        "lhs": d.get("lhs"),
        "rhs_core": d.get("rhs_core"),
        "ratio": d.get("ratio"),
        "scaling_drift": d.get("scaling_drift"),
        "ok": d.get("ok"),
    }
    return {k: ("" if v is None else repr(v) if isinstance(v, float) else v) for k, v in row.items()}


def _render(rows, fmt, summary=None):
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
        w.writeheader()
        for d in rows:
            w.writerow(_csv_row(d))
        return buf.getvalue()
    lines = [_dumps(d) for d in rows]
    if summary is not None:
        lines.append(_dumps({"summary": summary}))
    return "\n".join(lines) + "\n"


def _emit(args, text, stdout):
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc.strerror}") from exc
    else:
        stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands

def cmd_gen(args, stdout, stderr):
    f = sample(_spec(args), _generator(args))
    _emit(args, _dumps(f.to_dict()) + "\n", stdout)
    return 0


def cmd_norm(args, stdout, stderr):
    f = _function(args)
    p = args.p if args.p is not None else 2.0
    out = {
        "function": f.label,
        "spec": f.spec.to_dict(),
        "p": p,
        "lp": lp_quadrature(f, p),
        "sup": lp_quadrature(f, math.inf),
        "weak": measure.weak_norm(f, p),
        "bmo": bmo.bmo_norm(f, args.max_level),
    }
    if args.q is not None:
        if p <= 1:
            raise UsageError("Lorentz norms need --p > 1")
        out["q"] = args.q
        out["lorentz"] = measure.lorentz_norm(f, p, args.q)
    if args.s is not None:
        out["s"] = args.s
        out["sobolev"] = sobolev_norm(f, args.s)
    _emit(args, _dumps(out) + "\n", stdout)
    return 0


def cmd_verify(args, stdout, stderr):
    if args.ineq is None:
        raise UsageError("verify needs --ineq")
    _need(args, args.ineq)
    f = _function(args)
    d, violations = _verify_one(args, f)
    _emit(args, _render([d], args.report), stdout)
    for v in violations:
        print(v, file=stderr)
    return 1 if violations else 0


def cmd_sweep(args, stdout, stderr):
    if args.ineq is None:
        raise UsageError("sweep needs --ineq")
    _need(args, args.ineq)
    if args.ineq == "jn":
        raise UsageError("jn is a single-function fit; use verify --ineq jn")
    spec = _spec(args)
    corpus = default_corpus(args.n, seeds=range(args.seed, args.seed + 4))
    res = sweep(corpus, args.ineq, _params(args), spec)
    rows = [r.to_dict() for r in res.reports]
    summary = res.summary
    summary["errors_detail"] = res.errors
    _emit(args, _render(rows, args.report, summary), stdout)
    for r in res.reports:
        for v in r.violations:
            print(f"{r.function}: {v}", file=stderr)
    return 0 if res.ok else 1


def cmd_cz(args, stdout, stderr):
    if args.M is None:
        raise UsageError("cz needs --M")
    f = _function(args)
    dec = bmo.cz_decompose(f, bmo.DyadicCube.root(f.spec.n), args.M)
    checks = bmo.check_decomposition(f, dec)
    out = dec.to_dict()
    out["function"] = f.label
    out["checks"] = checks
    _emit(args, _dumps(out) + "\n", stdout)
    bad = [k for k, ok in checks.items() if not ok]
    for k in bad:
        print(f"cz: invariant {k} failed", file=stderr)
    return 1 if bad else 0


def cmd_selftest(args, stdout, stderr):
    from .selftest import run_selftest
    results = run_selftest()
    _emit(args, "".join(_dumps(r) + "\n" for r in results), stdout)
    failed = [r["check"] for r in results if not r["ok"]]
    for name in failed:
        print(f"selftest: {name} failed", file=stderr)
    return 1 if failed else 0


COMMANDS = {
    "gen": cmd_gen,
    "norm": cmd_norm,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "cz": cmd_cz,
    "selftest": cmd_selftest,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        with np.errstate(divide="ignore", invalid="ignore"):
            return COMMANDS[args.command](args, stdout, stderr)
    except (UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=stderr)
        return 2


def main():
    sys.exit(run())
