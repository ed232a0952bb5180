"""Command-line front end: topical subcommands for the individual
functionals plus ``run-all`` for the full acceptance battery.

Exit codes: 0 all pass, 1 usage/config error, 2 at least one fail,
3 at least one inconclusive (and no fail).  Reports are emitted as CSV
(17 significant digits, minimal RFC-4180 quoting) and as JSON with a
schema_version field; identical configurations produce byte-identical
files.  The environment variable LAB_THREADS caps experiment parallelism
(default 1; row order is fixed by sorting, so results do not depend on it).
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import io
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field

import numpy as np

SCHEMA_VERSION = 1

_ALLOWED_CONFIG_KEYS = {"experiment_id", "n", "function", "a_grid", "t_grid",
                        "tolerances", "output_dir"}


@dataclass
class ExperimentConfig:
    """One configured experiment; unknown fields are rejected on load."""
    experiment_id: str
    n: int = 1
    function: dict = field(default_factory=dict)   # variant + parameters + seed
    a_grid: list = field(default_factory=list)
    t_grid: list = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
    output_dir: str = "."

    @staticmethod
    def from_dict(d):
        unknown = set(d) - _ALLOWED_CONFIG_KEYS
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        if "experiment_id" not in d:
            raise ValueError("config needs an experiment_id")
        return ExperimentConfig(**d)

    def to_dict(self):
        return asdict(self)


def load_config(path):
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    if isinstance(raw, dict):
        raw = [raw]
    return [ExperimentConfig.from_dict(d) for d in raw]


# ---------------------------------------------------------------------------
# report emission
# ---------------------------------------------------------------------------

def _fmt(x):
    return format(float(x), ".17g")


def render_report_bytes(rows):
    """Deterministic CSV bytes for a row list (sorted by id, then params)."""
    rows = sorted(rows, key=lambda r: (r.experiment_id, r.params))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["experiment_id", "params", "measured", "reference", "rel_err", "verdict"])
    for r in rows:
        w.writerow([r.experiment_id, r.params, _fmt(r.measured), _fmt(r.reference),
                    _fmt(r.rel_err), r.verdict])
    return buf.getvalue().encode("utf-8")


def render_report_json_bytes(rows):
    rows = sorted(rows, key=lambda r: (r.experiment_id, r.params))
    doc = {
        "schema_version": SCHEMA_VERSION,
        "rows": [
            {
                "experiment_id": r.experiment_id,
                "params": r.params,
                "measured": float(_fmt(r.measured)),
                "reference": float(_fmt(r.reference)),
                "rel_err": float(_fmt(r.rel_err)),
                "verdict": r.verdict,
            }
            for r in rows
        ],
    }
    return (json.dumps(doc, sort_keys=True, indent=2) + "\n").encode("utf-8")


def emit_report(rows, csv_path=None, json_path=None):
    """Write the CSV/JSON reports; returns the rendered byte strings."""
    cb = render_report_bytes(rows)
    jb = render_report_json_bytes(rows)
    if csv_path:
        with open(csv_path, "wb") as fh:
            fh.write(cb)
    if json_path:
        with open(json_path, "wb") as fh:
            fh.write(jb)
    return cb, jb


def _exit_code(rows):
    verdicts = {r.verdict for r in rows}
    if "fail" in verdicts:
        return 2
    if "inconclusive" in verdicts:
        return 3
    return 0


def _print_rows(rows):
    for r in sorted(rows, key=lambda r: (r.experiment_id, r.params)):
        print(f"{r.experiment_id:7s} {r.verdict:12s} measured={_fmt(r.measured)} "
              f"reference={_fmt(r.reference)} rel_err={r.rel_err:.3e}  [{r.params}]")


# ---------------------------------------------------------------------------
# function specs shared by subcommands
# ---------------------------------------------------------------------------

def _build_function(variant, n=1, seed=0, deg=8, eigen_class=0, b=0.0, delta=1.0):
    from .functions import (FiniteHermite, PolyGaussian, PolyGaussianForm,
                            dilate, make_ft_eigenfunction)
    if variant == "gaussian":
        f = PolyGaussianForm(PolyGaussian(n, {tuple([0] * n): 1.0}, 0.5 * np.eye(n)))
    elif variant == "chirp":
        f = PolyGaussianForm(PolyGaussian(n, {tuple([0] * n): 1.0},
                                          0.5 * np.eye(n), b * np.eye(n)))
    elif variant == "eigenfunction":
        f = FiniteHermite(make_ft_eigenfunction(n, deg, eigen_class, seed))
    else:
        raise ValueError(f"unknown function variant {variant!r}")
    if delta != 1.0:
        f = dilate(f, delta)
    return f


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_ka_eval(args):
    from .experiments import ReportRow, ka_gaussian_reference
    from .functional import ka_eval
    f = _build_function(args.fn, n=args.n, seed=args.seed, deg=args.deg,
                        eigen_class=args.eigen_class, delta=args.delta)
    res = ka_eval(f, args.a, reltol=args.reltol)
    print(f"K_a value = {_fmt(res.value)}  error <= {res.error:.3e}  "
          f"status={res.status} depth={res.depth}")
    if args.fn == "gaussian" and args.n == 1 and args.delta == 1.0:
        ref = ka_gaussian_reference(args.a)
        ok = res.converged and abs(res.value - ref) / ref < max(args.reltol * 10, 1e-6)
        rows = [ReportRow.make("ka-eval", f"fn=gaussian;a={args.a:g}", res.value, ref, ok)]
    else:
        rows = [ReportRow.make("ka-eval", f"fn={args.fn};a={args.a:g}", res.value,
                               res.value, res.converged)]
    _print_rows(rows)
    return rows


def _cmd_e_poly(args):
    from .experiments import ReportRow
    from .functional import e_monomial_bound, e_poly_quad
    R = {(args.m1,): 1.0}
    S = {(args.m2,): 1.0}
    res = e_poly_quad(R, S, args.a, reltol=args.reltol)
    bound = e_monomial_bound(args.m1, args.m2, args.a)
    print(f"E value = {_fmt(res.value)}  monomial bound sum = {_fmt(bound)} "
          f"(2x sum dominates the absolute-kernel integral)")
    ok = res.converged and res.value <= 2.0 * bound
    rows = [ReportRow.make("e-poly", f"m1={args.m1};m2={args.m2};a={args.a:g}",
                           res.value, 2.0 * bound, ok)]
    _print_rows(rows)
    return rows


def _cmd_scaling_fit(args):
    from .experiments import ReportRow
    from .functional import scaling_fit
    grid = tuple(float(x) for x in args.grid.split(","))
    if args.fn == "gaussian":
        target = ({(0,): 1.0}, {(0,): 1.0})
        expected = 0.5
    else:
        target = ({(args.m1,): 1.0}, {(args.m2,): 1.0})
        expected = (1 + args.m1 + args.m2) / 2.0
    fit = scaling_fit(target, a_grid=grid, reltol=args.reltol)
    print(f"fitted exponent = {fit.exponent:.6f} (asymptotic value {expected}), "
          f"residual = {fit.residual:.3e}")
    ok = abs(fit.exponent - expected) <= 0.05 * expected
    rows = [ReportRow.make("scaling-fit", f"fn={args.fn};grid={args.grid}",
                           fit.exponent, expected, ok)]
    _print_rows(rows)
    return rows


def _cmd_weighted_bdj(args):
    from .experiments import ReportRow
    from .functional import weighted_bdj
    f = _build_function(args.fn, n=args.n, seed=args.seed, b=args.b)
    res = weighted_bdj(f, args.N)
    print(f"weighted functional: status={res.status} value={res.value}")
    ok = res.status in ("converged", "diverged")
    rows = [ReportRow.make("weighted-bdj", f"fn={args.fn};N={args.N:g}",
                           res.value if np.isfinite(res.value) else -1.0,
                           res.value if np.isfinite(res.value) else -1.0,
                           ok, inconclusive=res.status == "inconclusive")]
    _print_rows(rows)
    return rows


def _cmd_hermite_coeffs(args):
    from .experiments import ReportRow, REGISTRY
    from .hermite import project
    if args.orthonormality:
        rows = REGISTRY["acc01"]()
        _print_rows(rows)
        return rows
    f = _build_function(args.fn, n=args.n, seed=args.seed, deg=args.deg,
                        eigen_class=args.eigen_class, delta=args.delta)
    e = project(f, args.n, args.deg)
    for a, c in e.coeffs.items():
        print(f"  {a}: {c.real:+.12e} {c.imag:+.12e}j")
    rows = [ReportRow.make("hermite-coeffs", f"fn={args.fn};D={args.deg}",
                           e.norm2(), e.norm2(), True)]
    return rows


def _cmd_bargmann_taylor(args):
    from .bargmann import QuadratureBargmann, coeff_bridge, contour_taylor
    from .experiments import ReportRow
    from .hermite import project
    f = _build_function(args.fn, n=args.n, seed=args.seed, deg=args.deg,
                        eigen_class=args.eigen_class)
    Bq = QuadratureBargmann(f)
    tc = contour_taylor(Bq, (args.radius,) * args.n, 2 * args.deg + 16,
                        max_degree=args.deg)
    bridged = coeff_bridge(tc)
    direct = project(f, args.n, args.deg)
    v1, _ = direct.coefficient_vector(args.deg)
    v2, _ = bridged.coefficient_vector(args.deg)
    dev = float(np.max(np.abs(v1 - v2)))
    print(f"two-path coefficient deviation = {dev:.3e}")
    rows = [ReportRow.make("bargmann-taylor", f"fn={args.fn};D={args.deg}",
                           dev, 0.0, dev < 1e-8)]
    _print_rows(rows)
    return rows


def _cmd_duality_check(args):
    from .bargmann import duality_check, polydisc_grid
    from .experiments import ReportRow
    from .functions import FiniteHermite, make_ft_eigenfunction
    e = make_ft_eigenfunction(args.n, args.deg, args.eigen_class, args.seed,
                              amplitude_decay=0.0)
    grid = polydisc_grid(args.n, args.radius, 5)
    dev = duality_check(FiniteHermite(e), grid)
    print(f"max |Bf(-iz) - B fhat(z)| = {dev:.3e}")
    rows = [ReportRow.make("duality-check", f"seed={args.seed};D={args.deg}",
                           dev, 0.0, dev < 1e-8)]
    _print_rows(rows)
    return rows


def _cmd_product_bound(args):
    from .bargmann import polydisc_grid, product_estimate_check
    from .experiments import ReportRow
    f = _build_function(args.fn, n=args.n, seed=args.seed, deg=args.deg,
                        eigen_class=args.eigen_class)
    zgrid = np.concatenate([np.linspace(-3, 3, 13)[:, None] + 0j,
                            polydisc_grid(args.n, args.radius, 8)])
    rep = product_estimate_check(f, args.a, zgrid)
    print(f"max ratio = {rep.max_ratio:.6e} (K_a = {rep.ka_value:.6g})")
    rows = [ReportRow.make("product-bound", f"fn={args.fn};a={args.a:g}",
                           rep.max_ratio, 1.0, rep.max_ratio <= 1.0 + 1e-9)]
    _print_rows(rows)
    return rows


def _cmd_envelope_check(args):
    from .envelopes import DecayEnvelope, envelope_check
    from .experiments import ReportRow
    from .functional import ka_eval
    from .functions import FiniteHermite, make_ft_eigenfunction
    e = make_ft_eigenfunction(args.n, args.deg, args.eigen_class, args.seed)
    params = {"n": args.n}
    if args.kind in ("eigenfunction", "onfinite"):
        params["a"] = args.a
        ka = ka_eval(FiniteHermite(e), args.a,
                     reltol=1e-6 if args.n == 1 else 1e-2)
        params["ka"] = ka.value
    else:
        params["t"] = args.t
    rep = envelope_check(e, DecayEnvelope(args.kind, params))
    print(f"max log-ratio = {rep.max_log_ratio:.4f}, trend slope = {rep.slope:.4f} "
          f"-> {'dominated' if rep.dominated else 'NOT dominated'}")
    rows = [ReportRow.make("envelope-check",
                           f"kind={args.kind};seed={args.seed};n={args.n}",
                           rep.slope, rep.slope_tol, rep.dominated)]
    _print_rows(rows)
    return rows


def _cmd_decay_fit(args):
    from .envelopes import decay_rate_fit
    from .experiments import ReportRow
    from .heisenberg import poisson_semigroup
    from .hermite import HermiteExpansion
    rng = np.random.default_rng(args.seed)
    g = HermiteExpansion(1, {(k,): v for k, v in
                             enumerate(rng.uniform(0.5, 2.0, size=args.deg + 1))})
    f = poisson_semigroup(g, args.t)
    fit = decay_rate_fit(f, args.law)
    print(f"fitted rate = {fit.t_hat:.5f} (planted {args.t}), "
          f"max residual = {fit.residual:.3e} over {fit.npoints} coefficients")
    ok = abs(fit.t_hat - args.t) <= 0.04 if args.law == "sqrt-exponential" else True
    rows = [ReportRow.make("decay-fit", f"law={args.law};t={args.t:g}",
                           fit.t_hat, args.t, ok)]
    _print_rows(rows)
    return rows


def _cmd_poisson(args):
    from .envelopes import DecayEnvelope, envelope_check
    from .experiments import ReportRow
    from .heisenberg import poisson_semigroup
    from .hermite import HermiteExpansion
    D = args.deg
    g = HermiteExpansion(1, {(k,): 1.0 / np.sqrt(D + 1.0) for k in range(D + 1)})
    f = poisson_semigroup(g, args.t)
    tprime = args.tprime if args.tprime is not None else 0.95 * args.t
    rep = envelope_check(f, DecayEnvelope("entire", {"t": tprime, "n": 1}))
    print(f"semigroup image at t={args.t}: entire-vector envelope at t'={tprime:g} "
          f"slope={rep.slope:.4f} -> {'pass' if rep.dominated else 'fail'}")
    rows = [ReportRow.make("poisson", f"t={args.t:g};tprime={tprime:g}",
                           rep.slope, rep.slope_tol, rep.dominated)]
    _print_rows(rows)
    return rows


def _cmd_kaverage_check(args):
    from .experiments import ReportRow
    from .functions import make_ft_eigenfunction
    from .heisenberg import kaverage_identity_check
    from .hermite import HermiteExpansion
    if args.fn == "phi0":
        e = HermiteExpansion(1, {(0,): 1.0})
    elif args.fn == "phi1":
        e = HermiteExpansion(1, {(1,): 1.0})
    else:
        e = make_ft_eigenfunction(1, args.deg, args.eigen_class, args.seed,
                                  amplitude_decay=0.0)
    rep = kaverage_identity_check(e, args.y, args.v, angles=args.angles)
    print(f"lhs = {_fmt(rep.lhs)}, rhs = {_fmt(rep.rhs)}, "
          f"rel deviation = {rep.rel_deviation:.3e}")
    rows = [ReportRow.make("kaverage-check", f"fn={args.fn};y={args.y};v={args.v}",
                           rep.rel_deviation, 0.0, rep.rel_deviation < 1e-4)]
    _print_rows(rows)
    return rows


def _cmd_run_all(args):
    from .experiments import REGISTRY
    if args.config:
        configs = load_config(args.config)
        names = [c.experiment_id for c in configs]
        outdir = configs[0].output_dir if configs else args.out
    else:
        names = sorted(REGISTRY)
        outdir = args.out
    if args.only:
        wanted = set(args.only.split(","))
        unknown = wanted - set(REGISTRY)
        if unknown:
            print(f"unknown experiments: {sorted(unknown)}", file=sys.stderr)
            return None
        names = [n for n in names if n in wanted]
    threads = max(1, int(os.environ.get("LAB_THREADS", "1")))
    rows = []
    results = {}
    t0 = time.time()
    if threads == 1:
        for name in names:
            t1 = time.time()
            results[name] = REGISTRY[name]()
            worst = _exit_code(results[name])
            tag = {0: "pass", 2: "FAIL", 3: "inconclusive"}[worst]
            print(f"{name}: {tag} ({time.time() - t1:.1f} s)")
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as ex:
            futs = {ex.submit(REGISTRY[name]): name for name in names}
            for fut in concurrent.futures.as_completed(futs):
                name = futs[fut]
                results[name] = fut.result()
                worst = _exit_code(results[name])
                tag = {0: "pass", 2: "FAIL", 3: "inconclusive"}[worst]
                print(f"{name}: {tag}")
    for name in sorted(results):
        rows.extend(results[name])
    os.makedirs(outdir, exist_ok=True)
    csv_path = os.path.join(outdir, "report.csv")
    json_path = os.path.join(outdir, "report.json")
    emit_report(rows, csv_path, json_path)
    print(f"ran {len(names)} experiments, {len(rows)} rows in {time.time() - t0:.1f} s")
    print(f"reports: {csv_path}, {json_path}")
    return rows


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------

def _add_function_args(p, default_fn="gaussian"):
    p.add_argument("--fn", default=default_fn,
                   choices=("gaussian", "chirp", "eigenfunction"))
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--seed", type=int, default=101)
    p.add_argument("--deg", type=int, default=8)
    p.add_argument("--eigen-class", type=int, default=0)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--b", type=float, default=0.5)


def build_parser():
    ap = argparse.ArgumentParser(
        prog="beurlinglab",
        description="numerical verification lab for subcritical uncertainty functionals")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ka-eval", help="evaluate the subcritical functional")
    _add_function_args(p)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--reltol", type=float, default=1e-7)
    p.set_defaults(func=_cmd_ka_eval)

    p = sub.add_parser("e-poly", help="Gaussian-weighted monomial functional")
    p.add_argument("--m1", type=int, default=1)
    p.add_argument("--m2", type=int, default=1)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--reltol", type=float, default=1e-7)
    p.set_defaults(func=_cmd_e_poly)

    p = sub.add_parser("scaling-fit", help="fit the (1-a^2) exponent")
    p.add_argument("--fn", default="gaussian", choices=("gaussian", "monomials"))
    p.add_argument("--m1", type=int, default=1)
    p.add_argument("--m2", type=int, default=1)
    p.add_argument("--grid", default="0.9,0.99,0.999")
    p.add_argument("--reltol", type=float, default=1e-6)
    p.set_defaults(func=_cmd_scaling_fit)

    p = sub.add_parser("weighted-bdj", help="critical weighted functional verdict")
    _add_function_args(p)
    p.add_argument("--N", type=float, required=True)
    p.set_defaults(func=_cmd_weighted_bdj)

    p = sub.add_parser("hermite-coeffs", help="project onto the Hermite basis")
    _add_function_args(p)
    p.add_argument("--orthonormality", action="store_true",
                   help="run the basis Gram-matrix check instead")
    p.set_defaults(func=_cmd_hermite_coeffs)

    p = sub.add_parser("bargmann-taylor", help="contour Taylor coefficients vs projection")
    _add_function_args(p, default_fn="eigenfunction")
    p.add_argument("--radius", type=float, default=1.5)
    p.set_defaults(func=_cmd_bargmann_taylor)

    p = sub.add_parser("duality-check", help="Bargmann duality on a polydisc")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--seed", type=int, default=101)
    p.add_argument("--deg", type=int, default=8)
    p.add_argument("--eigen-class", type=int, default=0)
    p.add_argument("--radius", type=float, default=2.0)
    p.set_defaults(func=_cmd_duality_check)

    p = sub.add_parser("product-bound", help="subcritical product estimate")
    _add_function_args(p, default_fn="eigenfunction")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--radius", type=float, default=2.0)
    p.set_defaults(func=_cmd_product_bound)

    p = sub.add_parser("envelope-check", help="coefficient-envelope dominance")
    p.add_argument("--kind", default="eigenfunction",
                   choices=("eigenfunction", "onfinite", "expdecay", "entire",
                            "vemuri-hardy", "geometric"))
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--seed", type=int, default=101)
    p.add_argument("--deg", type=int, default=12)
    p.add_argument("--eigen-class", type=int, default=0)
    p.add_argument("--a", type=float, default=0.5)
    p.add_argument("--t", type=float, default=0.5)
    p.set_defaults(func=_cmd_envelope_check)

    p = sub.add_parser("decay-fit", help="fit a coefficient decay rate")
    p.add_argument("--law", default="sqrt-exponential",
                   choices=("sqrt-exponential", "geometric"))
    p.add_argument("--t", type=float, default=0.8)
    p.add_argument("--deg", type=int, default=40)
    p.add_argument("--seed", type=int, default=505)
    p.set_defaults(func=_cmd_decay_fit)

    p = sub.add_parser("poisson", help="Hermite-Poisson semigroup envelope check")
    p.add_argument("--t", type=float, default=0.8)
    p.add_argument("--tprime", type=float, default=None)
    p.add_argument("--deg", type=int, default=36)
    p.set_defaults(func=_cmd_poisson)

    p = sub.add_parser("kaverage-check", help="n=1 compact-average norm identity")
    p.add_argument("--fn", default="phi0", choices=("phi0", "phi1", "random"))
    p.add_argument("--y", type=float, default=0.3)
    p.add_argument("--v", type=float, default=0.0)
    p.add_argument("--deg", type=int, default=4)
    p.add_argument("--seed", type=int, default=101)
    p.add_argument("--eigen-class", type=int, default=1)
    p.add_argument("--angles", type=int, default=64)
    p.set_defaults(func=_cmd_kaverage_check)

    p = sub.add_parser("run-all", help="run the acceptance battery")
    p.add_argument("--only", default=None,
                   help="comma-separated experiment ids (default: all)")
    p.add_argument("--out", default="reports")
    p.add_argument("--config", default=None,
                   help="JSON experiment list overriding the defaults")
    p.set_defaults(func=_cmd_run_all)

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        rows = args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if rows is None:
        return 1
    return _exit_code(rows)


if __name__ == "__main__":
    sys.exit(main())
