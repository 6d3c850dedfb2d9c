"""Command-line front end: ``nlw-strichartz <command> [flags]``.

Every command builds a :class:`RunReport` with the parameters, results,
named checks (each with the tolerance it was tested against), grid sizes
and the constants table, then prints it as a table, CSV or JSON.

Exit codes: 0 all checks pass, 2 a check failed, 64 usage error,
70 numerical failure.
"""

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import functional, noninv, picard, profiles, projection
from .errors import (AccuracyError, ConfigError, DivergenceError, DomainError,
                     NumericError)
from .functional import CONSTANTS, SPHERE_VOLUME
from .penrose import DEFAULT_NODES, l4_norm4, square_grid, theta_field
from .sobolev import (DEFAULT_GRID, DataPair, gaussian_profile, pair_transform)

EXIT_OK = 0
EXIT_CHECK = 2
EXIT_USAGE = 64
EXIT_NUMERIC = 70


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    params: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def check(self, name, value, tol, ok):
        self.checks[name] = {"value": float(value), "tol": float(tol), "pass": bool(ok)}

    @property
    def passed(self):
        return all(c["pass"] for c in self.checks.values())

    def as_dict(self):
        return {
            "command": self.command,
            "params": self.params,
            "results": self.results,
            "residuals": self.residuals,
            "checks": self.checks,
            "rows": self.rows,
            "warnings": self.warnings,
            "constants": CONSTANTS.as_dict(),
            "pass": self.passed,
        }


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def render(report, fmt):
    if fmt == "json":
        return json.dumps(_jsonable(report.as_dict()), indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if report.rows:
            header = list(report.rows[0])
            writer.writerow(header)
            for row in report.rows:
                writer.writerow([_fmt(row[k]) for k in header])
        else:
            writer.writerow(["key", "value"])
            for k, v in {**report.params, **report.results}.items():
                writer.writerow([k, _fmt(v)])
            for k, c in report.checks.items():
                writer.writerow([f"check.{k}", _fmt(c["value"])])
                writer.writerow([f"check.{k}.tol", _fmt(c["tol"])])
                writer.writerow([f"check.{k}.pass", _fmt(c["pass"])])
        return buf.getvalue()
    lines = [f"# {report.command}"]
    for k, v in report.params.items():
        lines.append(f"param   {k:<24} {_fmt(v)}")
    for k, v in CONSTANTS.as_dict().items():
        lines.append(f"const   {k:<24} {_fmt(v)}")
    for k, v in report.results.items():
        lines.append(f"result  {k:<24} {_fmt(v)}")
    for k, v in report.residuals.items():
        lines.append(f"resid   {k:<24} {_fmt(v)}")
    if report.rows:
        header = list(report.rows[0])
        widths = [max(len(h), 24) for h in header]
        lines.append("  ".join(h.rjust(w) for h, w in zip(header, widths)))
        for row in report.rows:
            lines.append("  ".join(_fmt(row[h]).rjust(w) for h, w in zip(header, widths)))
    for k, c in report.checks.items():
        status = "PASS" if c["pass"] else "FAIL"
        lines.append(f"check   {k:<24} {status}  value={_fmt(c['value'])} tol={_fmt(c['tol'])}")
    for w in report.warnings:
        lines.append(f"warning {w}")
    return "\n".join(lines) + "\n"


def parse_deltas(text):
    """``a:b:k`` -> ``k`` geometrically spaced values from ``a`` to ``b``."""
    try:
        a, b, k = text.split(":")
        a, b, k = float(a), float(b), int(k)
    except ValueError:
        raise UsageError(f"--deltas expects a:b:k, got {text!r}")
    if not (0 < a <= b) or k < 1:
        raise UsageError("--deltas needs 0 < a <= b and k >= 1")
    if k == 1:
        return np.array([a])
    return np.geomspace(a, b, k)


def _tol(args, default):
    return default if args.tol is None else args.tol


def _rel(a, b):
    return abs(a - b) / abs(b)


def cmd_constants(args):
    rep = RunReport("constants")
    n = args.n or DEFAULT_NODES
    rep.params.update(n=n)
    tol = _tol(args, 1e-10)
    for k, v in CONSTANTS.provenance.items():
        rep.results[f"provenance.{k}"] = v
    l4 = l4_norm4(theta_field(0.0, square_grid(n)))
    s0_num = l4 / SPHERE_VOLUME**2
    rep.results["s0_from_l4"] = s0_num
    rep.check("s0_quadrature", _rel(s0_num, CONSTANTS.s0), tol, _rel(s0_num, CONSTANTS.s0) < tol)
    for sigma, name in ((1, "focusing"), (-1, "defocusing")):
        closed = functional.s1_from_closed_form(sigma)
        quad = functional.scal_quadrature4(functional.best_theta(sigma), n=96) / SPHERE_VOLUME**3
        table = CONSTANTS.s1(sigma)
        rep.results[f"s1_{name}_closed"] = closed
        rep.results[f"s1_{name}_quadrature"] = quad
        rep.rows.append({"sigma": sigma, "s1_table": table, "s1_closed": closed, "s1_quadrature": quad})
        rep.check(f"s1_{name}_closed", _rel(closed, table), 1e-15, _rel(closed, table) <= 1e-15)
        rep.check(f"s1_{name}_quadrature", _rel(quad, table), tol, _rel(quad, table) < tol)
    return rep


def cmd_scal(args):
    rep = RunReport("scal")
    n = args.n or 200
    if n < functional.MIN_QUADRATURE_NODES:
        rep.warnings.append(f"accuracy warning: n={n} is below the minimum "
                            f"{functional.MIN_QUADRATURE_NODES}; using the minimum")
        print(rep.warnings[-1], file=sys.stderr)
        n = functional.MIN_QUADRATURE_NODES
    theta = args.theta
    tol = _tol(args, 1e-5)
    rep.params.update(theta=theta, n=n)
    closed = functional.scal_closed_form(theta)
    quad = functional.scal_quadrature4(theta, n)
    pipe = functional.scal(theta_field(theta, square_grid(n)))
    rep.results.update(closed_form=closed, quadrature4=quad, pipeline=pipe)
    for name, (a, b) in {"quadrature4_vs_closed": (quad, closed),
                         "pipeline_vs_closed": (pipe, closed),
                         "pipeline_vs_quadrature4": (pipe, quad)}.items():
        err = _rel(a, b)
        rep.residuals[name] = err
        rep.check(name, err, tol, err <= tol)
    return rep


def cmd_orders(args):
    rep = RunReport("orders")
    deltas = parse_deltas(args.deltas or "0.05:0.4:8")
    n = args.n or DEFAULT_NODES
    rep.params.update(sigma=args.sigma, theta=args.theta, n=n, fp_tol=1e-12)
    fit = picard.order_fit(args.theta, args.sigma, deltas, n)
    for d, e1, e2 in zip(fit.deltas, fit.err1, fit.err2):
        rep.rows.append({"delta": d, "err1": e1, "err2": e2})
    rep.results.update(slope1=fit.slope1, slope2=fit.slope2)
    tol1 = _tol(args, 0.2)
    tol2 = _tol(args, 0.3)
    rep.check("slope1", abs(fit.slope1 - 3.0), tol1, abs(fit.slope1 - 3.0) <= tol1)
    rep.check("slope2", abs(fit.slope2 - 5.0), tol2, abs(fit.slope2 - 5.0) <= tol2)
    return rep


def cmd_expansion(args):
    rep = RunReport("expansion")
    theta = args.theta_given if args.theta_given is not None else float(functional.best_theta(args.sigma))
    deltas = parse_deltas(args.deltas or "0.2:0.5:5")
    n = args.n or DEFAULT_NODES
    rep.params.update(sigma=args.sigma, theta=theta, n=n, fp_tol=1e-12)
    res = picard.expansion_coefficient(theta, args.sigma, deltas, n)
    for d, N, c6, r in zip(res.deltas, res.norms, res.c6_estimates, res.c8_ratios):
        rep.rows.append({"delta": d, "norm4": N, "c6_richardson": c6, "c8_ratio": r})
    rep.results.update(c6_measured=res.c6_measured,
                       predicted_4_sigma_S_over_S3cubed=res.predicted_eq_factor4,
                       predicted_sigma_S1=res.predicted_s1,
                       ratio_to_sigma_S1=res.c6_measured / res.predicted_s1,
                       c8_bound=res.c8_bound, c8_spread=res.c8_spread)
    tol = _tol(args, 0.02)
    err = _rel(res.c6_measured, res.predicted_eq_factor4)
    rep.residuals["c6_vs_4_sigma_S"] = err
    rep.residuals["c6_vs_sigma_S1"] = _rel(res.c6_measured, res.predicted_s1)
    rep.check("c6_vs_4_sigma_S", err, tol, err <= tol)
    rep.check("c6_sign", np.sign(res.c6_measured), args.sigma, np.sign(res.c6_measured) == args.sigma)
    rep.check("c8_spread", res.c8_spread, 0.25, res.c8_spread <= 0.25)
    rep.warnings.append("factor-4 question: c6 is compared against both 4 sigma S/|S^3|^3 and "
                        "sigma S1; only the former is checked")
    return rep


def cmd_project(args):
    rep = RunReport("project")
    tol = _tol(args, 1e-5)
    theta = args.theta
    eps = args.eps
    rep.params.update(theta=theta, lam=args.lam, t0=args.t0, eps=eps,
                      frequency_nodes=DEFAULT_GRID.n, rho_max=DEFAULT_GRID.rho_max)
    truth = projection.ManifoldParams(1.0, args.lam, theta, args.t0)
    d = projection.gamma_apply(truth)
    if eps:
        bump = gaussian_profile(eps, 1.0)
        d = DataPair(d.f0 + bump, d.f1)
    res = projection.project_radial(pair_transform(d))
    p = res.params
    rep.results.update(c=p.c, lam=p.lam, theta=p.theta, t0=p.t0, residual=res.residual,
                       orthogonality=res.orthogonality, stagnated=res.stagnated)
    gram = projection.gram_matrix(p)
    for name, row in zip(gram.order, gram.matrix):
        rep.rows.append({"direction": name, **{f"g_{k}": v for k, v in zip(gram.order, row)}})
    for i, ev in enumerate(gram.eigenvalues):
        rep.results[f"gram_eigenvalue_{i}"] = ev
    rep.check("orthogonality", res.orthogonality, tol, res.orthogonality < tol)
    rep.check("gram_min_eigenvalue", gram.eigenvalues.min(), 0.0, gram.eigenvalues.min() > 0)
    if not eps:
        perr = float(np.max(np.abs(p.as_array() - truth.as_array())))
        rep.residuals["parameter_error"] = perr
        rep.check("residual", res.residual, 1e-8, res.residual < 1e-8)
        rep.check("parameter_error", perr, tol, perr < tol)
    return rep


def cmd_noninv(args):
    rep = RunReport("noninv")
    tol = _tol(args, 1e-4)
    n = args.n or DEFAULT_NODES
    deltas = parse_deltas(args.deltas) if args.deltas else np.array([0.2, 0.3])
    thetas = [args.theta_given] if args.theta_given is not None else [0.0, np.pi / 4, np.pi / 2]
    sigmas = [args.sigma_given] if args.sigma_given is not None else [1, -1]
    rep.params.update(t0=args.t0, h=args.h, n=n, fp_tol=1e-12, richardson=True,
                      frequency_nodes=DEFAULT_GRID.n)
    worst = 0.0
    for sigma in sigmas:
        for theta in thetas:
            for delta in deltas:
                field = picard.solve(None, picard.SolverConfig(
                    sigma=sigma, delta=float(delta), theta=theta, grid_n=n)).field
                formula = noninv.dt_norm_formula(noninv.snapshot(field, args.t0), sigma)
                fd = noninv.dt_norm_fd(theta, sigma, delta, args.t0, args.h, field=field)
                err = abs(formula - fd) / max(abs(formula), 1e-300)
                worst = max(worst, err)
                rep.rows.append({"sigma": sigma, "theta": theta, "delta": float(delta),
                                 "formula": formula, "finite_difference": fd, "rel_error": err})
    rep.check("formula_vs_fd", worst, tol, worst < tol)
    return rep


def cmd_profiles(args):
    rep = RunReport("profiles")
    a = profiles.parse_sequence(args.a)
    b = profiles.parse_sequence(args.b)
    n = args.n or DEFAULT_NODES
    rep.params.update(a=args.a, b=args.b, alpha=args.alpha, n_max=args.n_max,
                      classify_n_max=args.classify_n, grow_threshold=profiles.DEFAULT_THRESHOLD, n=n,
                      mixed_rtol=profiles.MIXED_RTOL, max_mixed_nodes=profiles.MAX_MIXED_NODES)
    verdict = profiles.classify(a, b, args.classify_n)
    rep.results.update(kind=verdict.kind, witness=verdict.witness)
    for i, note in enumerate(verdict.notes):
        rep.results[f"note_{i}"] = note
    if a.radial and b.radial:
        w = theta_field(0.0, square_grid(n))
        dec = profiles.mixed_l4_decay(w, w, a, b, args.alpha, range(args.n_max + 1))
        for k, v, fr, m, ok in zip(dec.n, dec.values, dec.frames, dec.nodes, dec.converged):
            rep.rows.append({"n": int(k), "integral": v, "ratio": v / dec.values[0], "frame": fr,
                             "quadrature_nodes": m, "converged": bool(ok)})
        if not dec.converged.all():
            rep.warnings.append("grid refinement of some mixed integrals stopped at the node cap")
        ratios = dec.values / dec.values[0]
        rep.results["final_ratio"] = ratios[-1]
        if args.alpha in (0.0, 4.0) or verdict.kind == "none":
            tol = _tol(args, 1e-6)
            spread = float(np.max(np.abs(ratios - 1.0)))
            rep.check("invariance", spread, tol, spread <= tol)
        elif verdict.kind != "inconclusive":
            tail = np.diff(ratios[len(ratios) // 2:])
            rep.check("eventual_decay", float(tail.max()), 0.0, bool(np.all(tail < 0)))
    else:
        rep.warnings.append("mixed integrals need dilation/time-translation sequences; skipped")
    return rep


def cmd_solve(args):
    rep = RunReport("solve")
    n = args.n or DEFAULT_NODES
    cfg = picard.SolverConfig(sigma=args.sigma, delta=args.delta, theta=args.theta,
                              grid_n=n, anchor=args.anchor)
    rep.params.update(sigma=cfg.sigma, theta=cfg.theta, delta=cfg.delta, n=n,
                      fp_tol=cfg.fp_tol, anchor=cfg.anchor)
    out = picard.solve(None, cfg)
    rep.results.update(iterations=out.iterations, final_residual=out.final_residual,
                       l4_norm4=out.l4_norm4, linear_l4_norm4=l4_norm4(out.linear))
    for k, u in enumerate(out.updates, 1):
        rep.rows.append({"iteration": k, "update": u})
    rep.check("converged", out.final_residual, cfg.fp_tol, out.final_residual < cfg.fp_tol)
    if args.dump:
        out.field.dump(args.dump)
        rep.results["dump"] = args.dump
    return rep


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _sign(text):
    if text not in ("1", "-1", "+1"):
        raise argparse.ArgumentTypeError("sigma must be 1 or -1")
    return int(text)


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("table", "csv", "json"), default="table")
    common.add_argument("--json", dest="format", action="store_const", const="json",
                        help="shorthand for --format json")
    common.add_argument("--n", type=int, default=None, help="number of quadrature nodes")
    common.add_argument("--tol", type=float, default=None, help="override the check tolerance")

    parser = _Parser(prog="nlw-strichartz", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("constants", parents=[common], help="sharp constants with cross-checks")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("scal", parents=[common], help="S(v_theta) by three methods")
    p.add_argument("--theta", type=float, default=0.0)
    p.set_defaults(func=cmd_scal)

    p = sub.add_parser("orders", parents=[common], help="Picard remainder orders")
    p.add_argument("--sigma", type=_sign, default=1)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--deltas", default=None)
    p.set_defaults(func=cmd_orders)

    p = sub.add_parser("expansion", parents=[common], help="delta^6 coefficient of the norm")
    p.add_argument("--sigma", type=_sign, default=1)
    p.add_argument("--theta", dest="theta_given", type=float, default=None)
    p.add_argument("--deltas", default=None)
    p.set_defaults(func=cmd_expansion)

    p = sub.add_parser("project", parents=[common], help="projection onto the radial manifold")
    p.add_argument("--theta", type=float, default=0.7)
    p.add_argument("--lam", type=float, default=1.5)
    p.add_argument("--t0", type=float, default=0.3)
    p.add_argument("--eps", type=float, default=0.0, help="size of an off-manifold Gaussian bump")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("noninv", parents=[common], help="time derivative of the pair norm")
    p.add_argument("--sigma", dest="sigma_given", type=_sign, default=None)
    p.add_argument("--theta", dest="theta_given", type=float, default=None)
    p.add_argument("--deltas", default=None)
    p.add_argument("--t0", type=float, default=0.25)
    p.add_argument("--h", type=float, default=noninv.DEFAULT_STEP)
    p.set_defaults(func=cmd_noninv)

    p = sub.add_parser("profiles", parents=[common], help="orthogonality of transform sequences")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--n-max", type=int, default=8, help="last index of the mixed integrals")
    p.add_argument("--classify-n", type=int, default=32, help="last index for the classifier")
    p.set_defaults(func=cmd_profiles)

    p = sub.add_parser("solve", parents=[common], help="one Picard solve")
    p.add_argument("--sigma", type=int, choices=(-1, 0, 1), default=1)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--delta", type=float, default=0.2)
    p.add_argument("--anchor", choices=picard.ANCHORS, default="past")
    p.add_argument("--dump", default=None, help="write the solution field to this path")
    p.set_defaults(func=cmd_solve)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code in (0, None) else EXIT_USAGE
    try:
        report = args.func(args)
    except (UsageError, ConfigError, DomainError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AccuracyError, DivergenceError, NumericError, FloatingPointError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    sys.stdout.write(render(report, args.format))
    return EXIT_OK if report.passed else EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
