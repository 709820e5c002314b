"""Command-line experiment runner.

    fracheat COMMAND [--config PATH] [--seed N] [--out PREFIX] [--threads N]
                     [--tol X] [--set key=value ...]

Exit status: 0 success, 1 a verification failed, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time

import numpy as np

from . import __version__
from . import kernels as K
from . import moments as Mo
from . import sim
from . import special as spc
from .config import COMMANDS, ConfigError, ExperimentConfig, build, load
from .model import (
    ModelParams,
    ParameterError,
    exponents,
    existence_condition,
    necessity_precondition,
    p_growth_exponent,
    time_growth_exponent,
)
from .results import ResultRow, emit_plot_data, write_csv

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
RHO_FIT_RTOL = 0.05
P_FIT_RTOL = 0.10


class Run:
    """Accumulates result rows and a verification verdict."""

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.rows: list[ResultRow] = []
        self.failed: list[str] = []
        self.extra_files: dict[str, object] = {}

    def row(self, quantity, value, err=math.nan, method="", t=math.nan, params: ModelParams | None = None, seed=None):
        p = params or self.cfg.params
        self.rows.append(
            ResultRow(p.d, float(p.alpha), float(p.beta), float(p.hurst), float(t), quantity,
                      float(value), float(err), method, seed)
        )

    def check(self, label: str, ok: bool) -> None:
        if not ok:
            self.failed.append(label)


def _c_growth(cfg: ExperimentConfig, params: ModelParams | None = None) -> float:
    if cfg.c_growth is not None:
        return cfg.c_growth
    return Mo.calibrate_c_growth(params or cfg.params)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_constants(run: Run) -> None:
    p = run.cfg.params
    ex = exponents(p)
    for name in ("rho", "delta", "alpha_H", "beta_H", "m", "h"):
        run.row(name, getattr(ex, name), method="closed-form")
    run.row("existence", existence_condition(p), method="closed-form")
    run.row("necessity_precondition", necessity_precondition(p), method="closed-form")
    run.row("time_growth_exponent", time_growth_exponent(p), method="closed-form")
    if p.alpha < p.beta:
        run.row("p_growth_exponent", p_growth_exponent(p), method="closed-form")
    sc = spc.spectral_constants(p.alpha, p.beta, p.d)
    for name in ("c_d", "C_riesz", "kappa", "c_beta", "C_stable_negmom", "I_bessel_riesz"):
        run.row(name, getattr(sc, name), method="closed-form")
    run.row("c_beta_valid", spc.c_beta_valid(p.beta), method="closed-form")
    for t in run.cfg.t_grid:
        run.row("gaussian_negative_moment", spc.gaussian_negative_moment(p.alpha, p.d, t), t=t, method="closed-form")


def _identity_params(rep_params: dict, hurst=math.nan) -> ModelParams:
    # ModelParams only as a carrier for the CSV columns of kernel reports
    return ModelParams(
        int(rep_params.get("d", 1)), float(rep_params.get("alpha", math.nan)),
        float(rep_params.get("beta", math.nan)), hurst,
    )


def _tag(rep_params: dict) -> str:
    return ";".join(f"{k}={v:g}" for k, v in rep_params.items())


def _report_rows(run: Run, rep: K.IdentityReport, tol: float) -> None:
    cp = _identity_params(rep.params)
    tag = f"{rep.name}({_tag(rep.params)})"
    run.row(f"{tag}:lhs", rep.lhs, method="quadrature", params=cp)
    run.row(f"{tag}:rhs", rep.rhs, method="quadrature", params=cp)
    run.row(f"{tag}:gap", rep.gap, err=tol, method="quadrature", params=cp)
    run.check(tag, rep.passed)


def cmd_verify_identities(run: Run) -> None:
    tol = run.cfg.quad.tol
    for args in ((1.0, 1.0, 0.5, 1), (1.0, 2.0, 1.0, 2), (0.3, 0.7, 0.7, 3), (0.5, 0.5, 0.95, 1)):
        _report_rows(run, K.verify_parseval(*args, tol=tol), tol)
    for args in ((0.5, 2.0, 1), (1.0, 2.0, 2), (0.5, 0.75, 1), (0.3, 1.5, 3), (1.0, 1.0, 2)):
        rep = K.verify_identity1(*args, tol=tol)
        _report_rows(run, rep, tol)
        if args[0] < args[1]:
            cp = _identity_params(rep.params)
            tag = f"identity1({_tag(rep.params)})"
            run.row(f"{tag}:validated_constant", rep.extras["validated_constant"], method="quadrature", params=cp)
            run.row(f"{tag}:C_riesz", rep.extras["C_riesz"], method="closed-form", params=cp)
    for args in ((0.5, 2.0, 1, 0.0), (0.5, 2.0, 1, 1.0), (0.5, 2.0, 1, 5.0), (0.5, 1.5, 2, 1.0), (0.5, 1.5, 3, 2.0)):
        rep = K.verify_identity2(*args, tol=tol)
        _report_rows(run, rep, tol)
        run.check(f"identity2 sup at 0 ({args})", rep.rhs <= rep.extras["rhs_at_zero"] * (1 + 1e-12))
    for al, be in ((0.5, 2.0), (0.5, 1.2)):
        e = K.verify_elem_ineq(al, be)
        cp = _identity_params(e.params)
        tag = f"elem_ineq({_tag(e.params)})"
        worst = max(pt["lhs"] / pt["rhs"] for pt in e.points)
        run.row(f"{tag}:max_lhs_over_rhs", worst, method="quadrature", params=cp)
        run.row(f"{tag}:K", e.K_estimate, method="quadrature", params=cp)
        run.row(f"{tag}:scaling_spread", e.scaling_spread, err=1e-3, method="quadrature", params=cp)
        run.check(tag, e.passed)
    for a, b in ((1.0, 1.0), (2.0, 2.0)):
        _report_rows(run, K.verify_semigroup(a, b, xs=np.linspace(0.1, 5.0, 6), tol=tol), tol)
    for be, al, d, finite in ((2.0, 1.0, 2, True), (1.0, 1.0, 2, False)):
        q = K.dalang_integral(be, al, d)
        cp = ModelParams(d, al, be, math.nan)
        run.row("dalang_integral", q.value, err=q.err_est, method="divergent" if q.divergent else "quadrature", params=cp)
        run.check(f"dalang({be},{al},{d})", q.divergent != finite)


def cmd_simulate(run: Run) -> None:
    cfg = run.cfg
    p, mc = cfg.params, cfg.mc
    dumps = []
    for k, t in enumerate(cfg.t_grid):
        s = sim.simulate_functionals(p, t, mc.grid_M, mc.n_paths, mc.seed, mc.threads, stream_offset=k * mc.n_paths)
        eL, ez = sim.mc_mean(s.L), sim.mc_mean(s.zeta)
        run.row("mean_L", eL.mean, eL.stderr, "monte-carlo", t, seed=mc.seed)
        run.row("mean_zeta", ez.mean, ez.stderr, "monte-carlo", t, seed=mc.seed)
        bH = exponents(p).beta_H * t ** (2 * p.hurst - 2)
        frac = float(np.mean(s.L >= bH * s.zeta))
        run.row("pathwise_L_ge_betaH_zeta_fraction", frac, method="monte-carlo", t=t, seed=mc.seed)
        run.check(f"pathwise inequality at t={t}", frac == 1.0)
        e = sim.exp_moment(s.L, 1.0)
        run.row("exp_moment_L", e.mean, e.stderr, "monte-carlo" + (":unreliable" if e.unreliable else ""), t, seed=mc.seed)
        run.row("coincidences", s.coincidences, method="monte-carlo", t=t, seed=mc.seed)
        if p.alpha < min(p.d, 2 * p.beta):
            run.row("mean_zeta_closed", sim.mean_zeta_closed(p, t), method="closed-form", t=t)
        if necessity_precondition(p):
            a1 = Mo.alpha1_exact(p, t)
            run.row("alpha1_exact", a1.value, a1.err_est, "quadrature", t)
        dumps.append(s)
    if mc.dump:
        run.extra_files["samples.csv"] = dumps


def cmd_moments(run: Run) -> None:
    cfg = run.cfg
    p = cfg.params
    C = _c_growth(cfg)
    run.row("C_growth", C, method="calibrated" if cfg.c_growth is None else "configured")
    for t in cfg.t_grid:
        if necessity_precondition(p):
            a1 = Mo.alpha1_exact(p, t)
            run.row("alpha1_exact", a1.value, a1.err_est, "quadrature", t)
        sb = Mo.upper_bound_series(p, t, C)
        run.row("log_bound", sb.log_sum, method=sb.method, t=t)
        run.row("certified_tail", sb.certified_tail, method=sb.method, t=t)
        if p.alpha < p.beta:
            for q in cfg.p_grid:
                run.row(f"log_pmoment_bound:p={q:g}", Mo.p_moment_log_bound(p, q, t, C), method="series", t=t)


def _t_sweep(run: Run, C: float):
    p = run.cfg.params
    ts, vals = [], []
    for t in run.cfg.t_grid:
        sb = Mo.upper_bound_series(p, t, C)
        run.row("log_bound", sb.log_sum, method=sb.method, t=t)
        ts.append(t)
        vals.append(sb.log_sum)
    return ts, vals


def _p_sweep(run: Run, C: float):
    p = run.cfg.params
    t = run.cfg.p_time
    ps, vals = [], []
    for q in run.cfg.p_grid:
        v = Mo.p_moment_log_bound(p, q, t, C)
        run.row(f"log_pmoment_bound:p={q:g}", v, method="series", t=t)
        ps.append(q)
        vals.append(v)
    return ps, vals


def cmd_exponent_fit(run: Run) -> None:
    cfg = run.cfg
    p = cfg.params
    if not existence_condition(p):
        raise ConfigError("exponent-fit needs alpha < beta")
    C = _c_growth(cfg)
    ex = exponents(p)
    ts, vals = _t_sweep(run, C)
    fit = Mo.exponent_fit(ts, vals)
    run.row("rho_fit", fit.slope, method="least-squares")
    run.row("rho_fit_r_squared", fit.r_squared, method="least-squares")
    run.row("rho_exact", ex.rho, method="closed-form")
    run.check("rho recovery", abs(fit.slope - ex.rho) <= RHO_FIT_RTOL * abs(ex.rho))
    ps, pv = _p_sweep(run, C)
    pf = Mo.exponent_fit(ps, pv)
    want = p_growth_exponent(p)
    run.row("p_exponent_fit", pf.slope, method="least-squares", t=cfg.p_time)
    run.row("p_exponent_exact", want, method="closed-form")
    run.check("p-exponent recovery", abs(pf.slope - want) <= P_FIT_RTOL * want)


def cmd_sweep(run: Run) -> None:
    cfg = run.cfg
    p = cfg.params
    if existence_condition(p):
        C = _c_growth(cfg)
        run.row("C_growth", C, method="calibrated" if cfg.c_growth is None else "configured")
        _t_sweep(run, C)
        _p_sweep(run, C)
    for al in cfg.alpha_grid:
        q = p.replace(alpha=al)
        # the constant is irrelevant for the convergence verdict
        sb = Mo.upper_bound_series(q, cfg.t_grid[-1], cfg.c_growth or 1.0)
        run.row("certified_tail", sb.certified_tail, method=sb.method, t=cfg.t_grid[-1], params=q)
        run.check(f"dichotomy alpha={al}", sb.certified_tail == existence_condition(q))


_COMMANDS = {
    "constants": cmd_constants,
    "verify-identities": cmd_verify_identities,
    "simulate": cmd_simulate,
    "moments": cmd_moments,
    "exponent-fit": cmd_exponent_fit,
    "sweep": cmd_sweep,
}


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fracheat", description=__doc__.splitlines()[0] if __doc__ else None)
    ap.add_argument("command", nargs="?", choices=COMMANDS, help="overrides 'command' in the config file")
    ap.add_argument("--config", metavar="PATH")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--out", metavar="PREFIX", help="output path prefix (a trailing '/' makes a directory)")
    ap.add_argument("--threads", type=int)
    ap.add_argument("--tol", type=float)
    ap.add_argument("--set", metavar="KEY=VALUE", action="append", default=[], help="override one config key")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return ap


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    entries = load(args.config) if args.config else {}
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        entries[k.strip()] = v.strip()
    if args.command:
        entries["command"] = args.command
    if args.seed is not None:
        entries["mc.seed"] = str(args.seed)
    if args.threads is not None:
        entries["mc.threads"] = str(args.threads)
    if args.tol is not None:
        entries["quad.tol"] = repr(args.tol)
    if args.out is not None:
        entries["output"] = args.out
    cfg = build(entries)
    if cfg.command is None:
        raise ConfigError("no command given (positional argument or 'command' key)")
    return cfg


def _write_manifest(path: str, cfg: ExperimentConfig, run: Run, timings: dict, status: int) -> None:
    with open(path, "w") as fh:
        fh.write(f"fracheat {__version__}\n")
        fh.write(f"status = {status}\n")
        fh.write(f"seed = {cfg.mc.seed}\n")
        fh.write("[config]\n")
        for k, v in cfg.items():
            fh.write(f"{k} = {v}\n")
        fh.write("[timings]\n")
        for k, v in timings.items():
            fh.write(f"{k} = {v:.3f}s\n")
        fh.write("[failed]\n")
        for f in run.failed:
            fh.write(f"{f}\n")


def run(cfg: ExperimentConfig) -> int:
    """Execute ``cfg.command`` and write its outputs; returns the exit status."""
    prefix = cfg.output
    parent = os.path.dirname(prefix)
    if parent:
        os.makedirs(parent, exist_ok=True)
    written: list[str] = []
    r = Run(cfg)
    timings = {}
    try:
        t0 = time.perf_counter()
        _COMMANDS[cfg.command](r)
        timings[cfg.command] = time.perf_counter() - t0
        status = EXIT_FAIL if r.failed else EXIT_OK
        res = f"{prefix}results.csv"
        written.append(res)
        write_csv(res, r.rows)
        if cfg.command == "sweep":
            written.extend(f"{prefix}plotdata-{k}.tsv" for k in ("rho", "p"))
            emit_plot_data(res, prefix)
        if "samples.csv" in r.extra_files:
            path = f"{prefix}samples.csv"
            written.append(path)
            sim.write_samples_csv(path, r.extra_files["samples.csv"])
        man = f"{prefix}manifest.txt"
        written.append(man)
        _write_manifest(man, cfg, r, timings, status)
    except BaseException:
        for path in written:
            if os.path.exists(path):
                os.remove(path)
        raise
    for f in r.failed:
        print(f"FAILED: {f}", file=sys.stderr)
    return status


def main(argv=None) -> int:
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve_config(args)
    except (ConfigError, ParameterError, OSError) as exc:
        print(f"fracheat: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return run(cfg)
    except (ConfigError, ParameterError) as exc:
        print(f"fracheat: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
