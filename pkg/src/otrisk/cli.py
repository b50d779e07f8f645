"""Command-line front end: ``otrisk <command> ...``.

Every command prints a table with the columns of
:data:`otrisk.report.HEADER` (or a JSON document with ``--format json``).
Exit status is 0 on success, 1 on bad input and 2 when a computed result
breaks one of its guaranteed invariants.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import analytic
from .discrete import depsilon_exact, wasserstein_p, wp_lower_bound
from .ingest import DataFormatError, class_pair, load_delimited, load_idx_images
from .intervals import IntervalSet, classifier_risk
from .loss_bounds import LossBoundInputs, convex_lower_bound, deviation_bound, lipschitz_upper_bound
from .measures import BinaryProblem, EmpiricalMeasure, Gaussian, IsoGaussian, Metric, Triangular, Uniform
from .mixture import MixtureSpec, balance_counts, mixture_risk_lb, sigma_star
from .report import InvariantViolation, RiskReport, to_csv_text, to_json_text

JOBS_ENV = "OTRISK_JOBS"


class InputError(ValueError):
    """Bad command-line input."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


# ---------------------------------------------------------------------------
# argument helpers


def parse_sweep(text: str) -> list:
    """``0.3`` gives one value; ``start:stop:steps`` gives ``steps`` evenly spaced values, ends included."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            vals = [float(parts[0])]
        elif len(parts) == 3:
            start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
            if steps < 1:
                raise InputError("a sweep needs at least one step")
            if stop < start:
                raise InputError("sweeps run upward: stop must not be below start")
            vals = [start] if steps == 1 else np.linspace(start, stop, steps).tolist()
        else:
            raise InputError(f"bad sweep {text!r}; use a number or start:stop:steps")
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad sweep {text!r}: {exc}") from None
    if any(not (v >= 0 and np.isfinite(v)) for v in vals):
        raise InputError("eps values must be finite and nonnegative")
    return vals


def _floats(text, n=None, name="value"):
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"bad {name} {text!r}") from None
    if n is not None and len(vals) != n:
        raise InputError(f"{name} needs {n} comma-separated numbers, got {text!r}")
    return vals


def parse_law(text: str):
    """``gaussian:mu,sigma``, ``uniform:a,b`` or ``triangular:center,halfwidth``."""
    kind, _, params = text.partition(":")
    kinds = {"gaussian": Gaussian, "normal": Gaussian, "uniform": Uniform, "triangular": Triangular}
    if kind.lower() not in kinds:
        raise InputError(f"unknown law {kind!r}; expected gaussian, uniform or triangular")
    return kinds[kind.lower()](*_floats(params, 2, name=kind))


def _jobs(value):
    if value is None:
        value = os.environ.get(JOBS_ENV, "1")
    try:
        jobs = int(value)
    except ValueError:
        raise InputError(f"bad job count {value!r}") from None
    if jobs < 1:
        raise InputError("job count must be at least 1")
    return jobs


def _pmap(fn, items, jobs):
    """Ordered map, in worker processes when ``jobs > 1``."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
        return list(pool.map(fn, items))


def _add_output(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="output format")
    p.add_argument("--out", help="write to this file instead of stdout")
    p.add_argument("--jobs", default=None, help=f"worker processes (default ${JOBS_ENV} or 1)")


def _add_eps(p, default="0"):
    p.add_argument("--eps", default=default, help="budget: a number or start:stop:steps")


def _add_metric(p):
    p.add_argument("--metric", default="euclidean", help="euclidean (l2) or chebyshev (linf)")


def _add_data(p):
    g = p.add_argument_group("data")
    g.add_argument("--class-a", help="point file of the first class")
    g.add_argument("--class-b", help="point file of the second class")
    g.add_argument("--dataset", help="labeled table, or IDX images together with --labels")
    g.add_argument("--labels", help="IDX label file for --dataset")
    g.add_argument("--classes", nargs=2, type=int, metavar=("A", "B"), help="labels to compare in --dataset")
    g.add_argument("--label-column", type=int, default=-1, help="label column of --dataset (default last)")
    g.add_argument("--delimiter", default=",")
    g.add_argument("--header", action="store_true", help="skip one header line in text files")
    g.add_argument("--n-per-class", type=int, help="subsample each class to this many points")
    g.add_argument("--seed", type=int, default=0, help="subsampling seed")


def load_pair(args, equal_counts=False):
    """The two class measures selected by the data flags."""
    diag = {}
    if args.dataset:
        if args.class_a or args.class_b:
            raise InputError("use either --dataset or --class-a/--class-b")
        if not args.classes:
            raise InputError("--dataset needs --classes A B")
        if args.labels:
            ds = load_idx_images(args.dataset, args.labels)
        else:
            ds = load_delimited(args.dataset, args.label_column, args.delimiter, args.header)
        mu, nu = class_pair(ds, args.classes[0], args.classes[1], args.n_per_class, args.seed)
    else:
        if not (args.class_a and args.class_b):
            raise InputError("need --class-a and --class-b, or --dataset with --classes")
        mu, nu = (EmpiricalMeasure(load_delimited(p, None, args.delimiter, args.header).features)
                  for p in (args.class_a, args.class_b))
        if args.n_per_class is not None:
            mu, nu = _subsample(mu, args.n_per_class, args.seed), _subsample(nu, args.n_per_class, args.seed + 1)
    if mu.dim != nu.dim:
        raise InputError(f"class dimensions differ: {mu.dim} vs {nu.dim}")
    if equal_counts and mu.size != nu.size:
        diag["subsampled_from"] = [mu.size, nu.size]
        mu, nu = balance_counts(mu, nu, args.seed)
    return mu, nu, diag


def _subsample(m, n, seed):
    if n > m.size:
        raise InputError(f"{n} points requested from a class of {m.size}")
    idx = np.sort(np.random.default_rng(seed).permutation(m.size)[:n])
    return EmpiricalMeasure(m.points[idx])


# ---------------------------------------------------------------------------
# row builders (module level so worker processes can run them)


def _witness_text(cert, mu):
    if cert.witness is not None:
        return "class0:" + cert.witness.format()
    if cert.witness_support is not None:
        return f"class0:balls(eps) around {len(cert.witness_support)} of {mu.size} points"
    return ""


def exact_row(task) -> RiskReport:
    mu, nu, metric, eps, method, with_certificate = task
    t0 = time.perf_counter()
    cert = depsilon_exact(mu, nu, metric, eps, method=method)
    elapsed = time.perf_counter() - t0
    residuals = cert.check(mu, nu)
    diag = {"solver": cert.method, "seconds": elapsed, "check": residuals, **cert.diagnostics}
    if with_certificate:
        diag["coupling"] = cert.coupling.tolist()
        diag["witness_support"] = list(cert.witness_support or ())
    return RiskReport("exact-empirical", metric.value, float(eps), 0.0, cert.cost, cert.risk,
                      _witness_text(cert, mu), cert.cost == 0.0, diag)


def mixture_row(task) -> RiskReport:
    mu, nu, metric, eps, sigma, mode = task
    rep = mixture_risk_lb(MixtureSpec(mu, sigma), MixtureSpec(nu, sigma), metric, eps, mode)
    diag = {"mode": mode, "n_pairs": len(rep.matching)}
    return RiskReport("mixture-bound", metric.value, float(eps), float(sigma), rep.depsilon_ub, rep.risk_lb,
                      "", rep.risk_lb >= 0.5, diag)


def analytic_row(task) -> RiskReport:
    family, fn, kwargs, eps = task
    sol = fn(eps=eps, **kwargs)
    clf = f"class{sol.positive}:" + sol.classifier.format()
    diag = {"boundaries": sol.boundaries, **sol.diagnostics}
    return RiskReport(f"analytic-{family}", "euclidean", float(eps), None, sol.depsilon, sol.risk,
                      clf, sol.degenerate, diag)


def motivating_row(task) -> RiskReport:
    sigma0, sigma1, eps = task
    w, risk = analytic.motivating_example(sigma0, sigma1, eps)
    degenerate = risk >= 0.5
    clf = "class1:empty" if degenerate else f"class1:{IntervalSet([(-w, w)]).format()}"
    return RiskReport("analytic-motivating", "euclidean", float(eps), None, 1.0 - 2.0 * risk, risk,
                      clf, degenerate, {"w": w})


# ---------------------------------------------------------------------------
# commands


def cmd_exact(args):
    metric = Metric.parse(args.metric)
    mu, nu, diag = load_pair(args)
    tasks = [(mu, nu, metric, e, args.method, args.certificate) for e in parse_sweep(args.eps)]
    rows = _pmap(exact_row, tasks, _jobs(args.jobs))
    return rows, {"data": {"n_a": mu.size, "n_b": nu.size, "dim": mu.dim, **diag}}


def cmd_mixture(args):
    metric = Metric.parse(args.metric)
    mu, nu, diag = load_pair(args, equal_counts=True)
    sigmas = _floats(args.sigma, name="sigma list") if args.sigma else []
    extra = {"data": {"n_per_class": mu.size, "dim": mu.dim, **diag}}
    if args.sigma_star:
        s_star = sigma_star(mu, nu, metric)
        extra["sigma_star"] = s_star
        sigmas += [k * s_star for k in _floats(args.sigma_star, name="sigma-star multiples")]
    if not sigmas:
        raise InputError("give --sigma and/or --sigma-star")
    if any(s < 0 for s in sigmas):
        raise InputError("sigma must be nonnegative")
    tasks, kinds = [], []
    for s in sigmas:
        for e in parse_sweep(args.eps):
            if s == 0:
                tasks.append((mu, nu, metric, e, "matching", False))
                kinds.append(exact_row)
            else:
                tasks.append((mu, nu, metric, e, s, args.mode))
                kinds.append(mixture_row)
    rows = _pmap(_dispatch, list(zip(kinds, tasks)), _jobs(args.jobs))
    return rows, extra


def _dispatch(item):
    fn, task = item
    return fn(task)


def cmd_wp(args):
    metric = Metric.parse(args.metric)
    mu, nu, diag = load_pair(args)
    wp = wasserstein_p(mu, nu, metric, args.p)
    rows = []
    for e in parse_sweep(args.eps):
        if e == 0:
            raise InputError("the W_p bound needs eps > 0")
        lb = wp_lower_bound(wp, e, args.p)
        rows.append(RiskReport("wp-bound", metric.value, e, None, 1.0 - 2.0 * lb, lb, "", lb == 0.0,
                               {"wp": wp, "p": args.p}))
    return rows, {"data": {"n_a": mu.size, "n_b": nu.size, **diag}, "wp": wp}


def cmd_lossbounds(args):
    rows = []
    for e in parse_sweep(args.eps):
        inp = LossBoundInputs(r0=args.r0, eps=e, grad_dual_norm_exp=args.grad_exp,
                              lipschitz=args.lipschitz, hessian_min_eig=args.hessian_min_eig)
        diag = {}
        lower = convex_lower_bound(inp) if args.grad_exp is not None else None
        if args.lipschitz is not None:
            diag["upper"] = lipschitz_upper_bound(inp)
            if args.hessian_min_eig is not None:
                diag["deviation"], diag["small_eps_warning"] = deviation_bound(inp)
        diag["lower"] = lower
        rows.append(RiskReport("loss-bound", "", e, None, None, lower, "", False, diag))
    return rows, {}


def cmd_riskof(args):
    metric = Metric.parse(args.metric)
    A = IntervalSet.parse(args.region)
    if args.law0 or args.law1:
        if not (args.law0 and args.law1):
            raise InputError("give both --law0 and --law1")
        problem = BinaryProblem(parse_law(args.law0), parse_law(args.law1))
    else:
        mu, nu, _ = load_pair(args)
        if mu.dim != 1:
            raise InputError("interval classifiers need one-dimensional data")
        problem = BinaryProblem(mu, nu)
    rows = []
    for e in parse_sweep(args.eps):
        r = classifier_risk(problem, A, e, metric)
        rows.append(RiskReport("classifier-risk", metric.value, e, None, None, r, "class1:" + A.format(),
                               A.is_empty or A.is_full))
    return rows, {}


_ANALYTIC = {
    "gaussian-equal-var": lambda a: (analytic.gaussian_equal_var,
                                     {"mu0": a.mu0, "mu1": a.mu1, "sigma": a.sigma}),
    "gaussian-iso": lambda a: (analytic.gaussian_iso_ddim,
                               {"p0": IsoGaussian(tuple(_floats(a.mean0, name="mean")), a.sigma),
                                "p1": IsoGaussian(tuple(_floats(a.mean1, name="mean")), a.sigma)}),
    "gaussian-same-mean": lambda a: (analytic.gaussian_same_mean,
                                     {"sigma1": a.sigma1, "sigma2": a.sigma2, "mean": a.mean}),
    "gaussian-general": lambda a: (analytic.gaussian_general,
                                   {"mu1": a.mu1, "sigma1": a.sigma1, "mu2": a.mu2, "sigma2": a.sigma2}),
    "uniform": lambda a: (analytic.uniform_pair,
                          {"I": tuple(_floats(a.I, 2, "interval")), "J": tuple(_floats(a.J, 2, "interval"))}),
    "triangular": lambda a: (analytic.triangular_pair,
                             {"t1": Triangular(*_floats(a.t1, 2, "triangle")),
                              "t2": Triangular(*_floats(a.t2, 2, "triangle"))}),
}


def cmd_analytic(args):
    eps_list = parse_sweep(args.eps)
    if args.family == "motivating":
        tasks = [(args.sigma0, args.sigma1, e) for e in eps_list]
        return _pmap(motivating_row, tasks, _jobs(args.jobs)), {}
    fn, kwargs = _ANALYTIC[args.family](args)
    tasks = [(args.family, fn, kwargs, e) for e in eps_list]
    return [analytic_row(t) for t in tasks], {}


def cmd_verify(args):
    from .verify import run_suite

    results = run_suite(seed=args.seed, scale=args.scale)
    if args.format == "json":
        text = to_json_text([], "verify", {"checks": results})
    else:
        text = "".join(f"{'PASS' if r['ok'] else 'FAIL'}  {r['name']}: {r['detail']}\n" for r in results)
    _emit(text, args.out)
    failed = [r["name"] for r in results if not r["ok"]]
    if failed:
        raise InvariantViolation("failed checks: " + ", ".join(failed))
    return None, {}


# ---------------------------------------------------------------------------


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="otrisk", description="Optimal adversarial risk via threshold optimal transport.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("exact", help="exact risk between two empirical measures")
    _add_data(q)
    _add_eps(q)
    _add_metric(q)
    q.add_argument("--method", default="auto", choices=("auto", "matching", "flow", "sweep"))
    q.add_argument("--certificate", action="store_true", help="include couplings in JSON output")
    _add_output(q)
    q.set_defaults(func=cmd_exact)

    q = sub.add_parser("analytic", help="closed-form risk for parametric families")
    fam = q.add_subparsers(dest="family", required=True, parser_class=_Parser)
    f = fam.add_parser("gaussian-equal-var")
    f.add_argument("--mu0", type=float, required=True)
    f.add_argument("--mu1", type=float, required=True)
    f.add_argument("--sigma", type=float, required=True)
    f = fam.add_parser("gaussian-iso")
    f.add_argument("--mean0", required=True, help="comma-separated mean of class 0")
    f.add_argument("--mean1", required=True, help="comma-separated mean of class 1")
    f.add_argument("--sigma", type=float, required=True)
    f = fam.add_parser("gaussian-same-mean")
    f.add_argument("--sigma1", type=float, required=True)
    f.add_argument("--sigma2", type=float, required=True)
    f.add_argument("--mean", type=float, default=0.0)
    f = fam.add_parser("gaussian-general")
    for name in ("--mu1", "--sigma1", "--mu2", "--sigma2"):
        f.add_argument(name, type=float, required=True)
    f = fam.add_parser("uniform")
    f.add_argument("--I", required=True, help="a,b")
    f.add_argument("--J", required=True, help="c,d")
    f = fam.add_parser("triangular")
    f.add_argument("--t1", required=True, help="center,halfwidth")
    f.add_argument("--t2", required=True, help="center,halfwidth")
    f = fam.add_parser("motivating")
    f.add_argument("--sigma0", type=float, required=True)
    f.add_argument("--sigma1", type=float, required=True)
    for f in fam.choices.values():
        _add_eps(f)
        _add_output(f)
    q.set_defaults(func=cmd_analytic)

    q = sub.add_parser("mixture", help="lower bounds for Gaussian-smoothed data")
    _add_data(q)
    _add_eps(q)
    _add_metric(q)
    q.add_argument("--sigma", help="comma-separated sigma values")
    q.add_argument("--sigma-star", help="comma-separated multiples of the reference scale")
    q.add_argument("--mode", choices=("tight", "empirical"), default="tight")
    _add_output(q)
    q.set_defaults(func=cmd_mixture)

    q = sub.add_parser("wp", help="Wasserstein lower bound")
    _add_data(q)
    _add_eps(q, default="0.1")
    _add_metric(q)
    q.add_argument("--p", type=float, default=1.0)
    _add_output(q)
    q.set_defaults(func=cmd_wp)

    q = sub.add_parser("lossbounds", help="continuous-loss bounds from scalar summaries")
    q.add_argument("--r0", type=float, required=True)
    q.add_argument("--grad-exp", type=float)
    q.add_argument("--lipschitz", type=float)
    q.add_argument("--hessian-min-eig", type=float)
    _add_eps(q)
    _add_output(q)
    q.set_defaults(func=cmd_lossbounds)

    q = sub.add_parser("riskof", help="robust risk of a given interval classifier")
    q.add_argument("--region", required=True, help="decide-class-1 set, e.g. -inf..0.5,2..3 or empty")
    q.add_argument("--law0", help="class 0 law, e.g. gaussian:0,1")
    q.add_argument("--law1", help="class 1 law")
    _add_data(q)
    _add_eps(q)
    _add_metric(q)
    _add_output(q)
    q.set_defaults(func=cmd_riskof)

    q = sub.add_parser("verify", help="cross-check solvers against brute-force oracles")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--scale", type=float, default=1.0, help="multiply the number of random instances")
    _add_output(q)
    q.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        rows, extra = args.func(args)
        if rows is not None:
            for r in rows:
                r.validate()
            text = to_json_text(rows, args.command, extra) if args.format == "json" else to_csv_text(rows)
            _emit(text, args.out)
        return 0
    except (InvariantViolation, AssertionError) as exc:
        print(f"otrisk: invariant violated: {exc}", file=sys.stderr)
        return 2
    except (InputError, DataFormatError, ValueError, TypeError, OSError) as exc:
        print(f"otrisk: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
