"""Command-line front end.

Configuration precedence, lowest to highest: built-in defaults, the ``--config``
JSON file, ``--set section.key=value`` overrides, then dedicated flags
(``--seed``, ``--output``, ``--j``, ``--N``). Artifacts go to
``<root>/<command>/<config-hash>/`` where ``root`` is ``--output``, else
``output.directory``, else ``$ALBERLAB_OUTPUT_ROOT``, else ``./runs``.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import experiments as ex
from . import io
from .alber import (ContourSpec, KernelParams, default_xi_range, detect_instability_contour,
                    detect_instability_gridscan, eigenvalue_oracle, image_curve,
                    riemann_convergence_study, to_kernel_coefficients)
from .config import ConfigError, RunConfig, apply_overrides, load
from .nlssim import (LinearSolveError, NumericalAbort, SimConfig, extract_inhomogeneity_planewave,
                     grid_points, solve)
from .seastate import GENERATOR, derive_seeds, generate, sample_on_grid
from .spectrum import (PowerSpectrum, SpectrumError, discretize, gaussian_spectrum,
                       jonswap_spectrum, load_spectrum_csv, zero_spectrum)

ENV_OUTPUT_ROOT = "ALBERLAB_OUTPUT_ROOT"
EXIT_OK, EXIT_CONFIG, EXIT_ABORT, EXIT_INDETERMINATE = 0, 2, 3, 4
COMMANDS = ("spectrum", "realize", "stability", "converge", "simulate", "table1", "gmi")


class Indeterminate(RuntimeError):
    pass


def build_spectrum(cfg: RunConfig) -> PowerSpectrum:
    s = cfg.spectrum
    if s.kind == "zero":
        return zero_spectrum(s.k_max or 1.0)
    if s.kind == "gaussian":
        return gaussian_spectrum(s.variance, s.center, s.width)
    if s.kind == "jonswap":
        return jonswap_spectrum(s.alpha, s.gamma, s.peak_wavenumber, k_max=s.k_max)
    return load_spectrum_csv(s.csv_path)


def kernel_params(cfg: RunConfig) -> KernelParams:
    st = cfg.stability
    p, q = to_kernel_coefficients(st.p, st.q, st.half_factor_convention)
    return KernelParams(p, q, discretize(build_spectrum(cfg), cfg.domain.L, cfg.domain.m))


def xi_range(cfg: RunConfig, kp: KernelParams):
    st = cfg.stability
    if st.xi_min is None:
        return default_xi_range(kp)
    return [x for x in range(st.xi_min, st.xi_max + 1) if x != 0]


def contour_spec(cfg: RunConfig) -> ContourSpec:
    st = cfg.stability
    return ContourSpec(st.epsilon, st.n_line, st.n_arc, st.max_refine, st.max_shrink)


def output_root(cfg: RunConfig, flag) -> Path:
    return Path(flag or cfg.output.directory or os.environ.get(ENV_OUTPUT_ROOT) or "runs")


# each command returns (outputs, artifacts) relative to the run directory


def cmd_spectrum(cfg, d, args):
    S = build_spectrum(cfg)
    D = discretize(S, cfg.domain.L, cfg.domain.m)
    io.write_discrete_spectrum_csv(d / "spectrum.csv", D)
    return ({"variance": D.variance, "M": D.mode_count, "integral": S.integral(),
             "spectrum": S.describe()}, ["spectrum.csv"])


def cmd_realize(cfg, d, args):
    S = build_spectrum(cfg)
    n = cfg.experiment.realizations
    seeds = [cfg.seed] if n == 1 else [int(s) for s in derive_seeds(cfg.seed, n)]
    arts, rows = [], []
    for i, seed in enumerate(seeds):
        r = generate(S, cfg.domain.L, cfg.domain.m, seed)
        name = f"realization_{i:04d}"
        io.write_realization_csv(d / f"{name}.csv", r)
        arts.append(f"{name}.csv")
        if cfg.output.field_format != "none":
            n_x = max(2 * r.spacing_multiplier * r.mode_count, 16)
            arts.extend(_write_field(cfg, d, name, sample_on_grid(r, n_x),
                                     x=-cfg.domain.L / 2 + cfg.domain.L * np.arange(n_x) / n_x))
        rows.append((i, seed, r.mode_count, r.variance))
    io.write_csv(d / "seeds.csv", ["index", "seed", "M", "variance"], rows)
    return ({"generator": GENERATOR, "seeds": seeds, "M": rows[0][2]}, arts + ["seeds.csv"])


def _write_field(cfg, d, name, values, x, **meta):
    if cfg.output.field_format == "binary":
        io.write_field_binary(d / f"{name}.bin", values, **meta)
        return [f"{name}.bin", f"{name}.bin.json"]
    if values.ndim == 1:
        io.write_complex_csv(d / f"{name}.csv", values, x)
    else:
        io.write_heatmap_csv(d / f"{name}.csv", np.abs(values), x, meta["times"])
    return [f"{name}.csv"]


def cmd_stability(cfg, d, args):
    st = cfg.stability
    if st.method == "pipeline":
        return _stability_pipeline(cfg, d)
    kp = kernel_params(cfg)
    xis = xi_range(cfg, kp)
    if st.method == "argument_principle":
        v = detect_instability_contour(kp, xi_range=xis, c=contour_spec(cfg),
                                       refine_tol=st.refine_tol, marginal_tol=st.marginal_tol)
    elif st.method == "grid_scan":
        v = detect_instability_gridscan(kp, xi_range=xis, threshold=st.grid_threshold,
                                        refine_tol=st.refine_tol)
    else:
        v = eigenvalue_oracle(kp, K_trunc=st.K_trunc, xi_range=xis)
    io.write_json(d / "verdict.json", v.to_json())
    arts = ["verdict.json"] + _nyquist(cfg, d, kp, xis, v)
    out = {"unstable": v.unstable, "status": v.status, "max_growth_rate": v.max_growth_rate,
           "n_witnesses": len(v.witnesses)}
    if v.status == "indeterminate":
        raise Indeterminate(out, arts)
    return out, arts


def _nyquist(cfg, d, kp, xis, v):
    xi = cfg.stability.curve_xi
    if xi is None:
        w = v.strongest_witness()
        xi = w.xi if w is not None else (max(xis) if xis else None)
    if xi is None or kp.q == 0 or xi == 0:
        return []
    try:
        curve = image_curve(int(xi), kp, contour_spec(cfg))
    except Exception:  # the verdict is already written; the plot is best effort
        return []
    io.write_csv(d / "nyquist.csv", ["re_omega", "im_omega", "re_h", "im_h"], curve)
    return ["nyquist.csv"]


def _stability_pipeline(cfg, d):
    st = cfg.stability
    p, q = to_kernel_coefficients(st.p, st.q, st.half_factor_convention)
    kp0 = kernel_params(cfg)
    res = ex.run_stability_pipeline(build_spectrum(cfg), cfg.domain.L, p, q, cfg.domain.m,
                                    xi_range=xi_range(cfg, kp0), contour=contour_spec(cfg),
                                    K_trunc=st.K_trunc, L_ladder=st.L_ladder,
                                    omega=complex(st.omega_re, st.omega_im),
                                    refine_tol=st.refine_tol)
    io.write_json(d / "verdict.json", res.contour.to_json())
    io.write_json(d / "oracle.json", res.oracle.to_json())
    _write_convergence(d / "convergence.csv", res.convergence)
    out = {"unstable": res.contour.unstable, "status": res.status, "agree": res.agree,
           "flags": res.flags, "max_growth_rate": res.contour.max_growth_rate,
           "oracle_max_growth_rate": res.oracle.max_growth_rate}
    arts = ["verdict.json", "oracle.json", "convergence.csv"]
    if res.contour.status == "indeterminate":
        raise Indeterminate(out, arts)
    return out, arts


def _write_convergence(path, rows):
    out, prev = [], None
    for r in rows:
        ratio = prev / r["error"] if prev is not None and r["error"] > 0 else ""
        out.append((r["L"], r["xi"], r["h_L"].real, r["h_L"].imag, r["h_inf"].real,
                    r["h_inf"].imag, r["error"], ratio))
        prev = r["error"]
    io.write_csv(path, ["L", "xi", "re_h_L", "im_h_L", "re_h_inf", "im_h_inf", "error", "ratio"], out)


def cmd_converge(cfg, d, args):
    st = cfg.stability
    p, q = to_kernel_coefficients(st.p, st.q, st.half_factor_convention)
    rows = riemann_convergence_study(build_spectrum(cfg), st.X, complex(st.omega_re, st.omega_im),
                                     p, q, st.L_ladder, cfg.domain.m)
    _write_convergence(d / "convergence.csv", rows)
    errs = [r["error"] for r in rows]
    return ({"errors": errs, "monotone": all(a >= b for a, b in zip(errs, errs[1:]))},
            ["convergence.csv"])


def cmd_simulate(cfg, d, args):
    sim = cfg.simulation
    p, q = sim.solver_coefficients()
    L = cfg.domain.L
    n_x = sim.N_x if sim.N_x is not None else grid_points(L, sim.dx)
    x = -L / 2 + L * np.arange(n_x) / n_x
    out = {}
    if sim.initial == "planewave":
        u0 = sim.A * (1.0 + (ex.inhomogeneity(sim.inhomogeneity, x, sim.A)
                             if sim.inhomogeneity else 0.0)) * np.ones(n_x)
    else:
        r = generate(build_spectrum(cfg), L, cfg.domain.m, cfg.seed)
        u0 = sample_on_grid(r, n_x)
        out.update({"generator": GENERATOR, "M": r.mode_count})
    wf = solve(SimConfig(p, q, L, n_x, sim.dt, sim.T, u0), sim.store_every)
    io.write_csv(d / "invariants.csv", ["t", "mass", "energy", "relaxation_energy"],
                 wf.invariant_trace)
    arts = ["invariants.csv"]
    out.update({"mass_drift": wf.mass_drift, "energy_drift": wf.energy_drift,
                "relaxation_energy_drift": wf.relaxation_energy_drift,
                "max_abs_u": float(np.abs(wf.snapshots).max()), "n_snapshots": len(wf.times)})
    if cfg.output.field_format != "none":
        arts += _write_field(cfg, d, "field", wf.snapshots, wf.x, times=wf.times, x0=float(wf.x[0]),
                             dx=wf.dx)
    if sim.initial == "planewave":
        delta = extract_inhomogeneity_planewave(wf, sim.A, q)
        out["max_delta"] = float(np.abs(delta).max())
    return out, arts


def cmd_table1(cfg, d, args):
    cells = [(int(j), float(N)) for j in cfg.experiment.j for N in cfg.experiment.N]
    for j, N in cells:
        if j not in ex.TABLE1 or N <= 0:
            raise ConfigError(f"invalid table1 cell j={j}, N={N}")
    sim = cfg.simulation
    results = ex.run_table1_matrix(cells, workers=args.workers, dt=sim.dt, dx=sim.dx or 4e-3,
                                   T=sim.T, store_every=sim.store_every)
    rows = [(r.j, r.N, r.L, r.max_delta, "" if r.reference_value is None else r.reference_value,
             "" if r.within_tolerance() is None else r.within_tolerance(), r.mass_drift)
            for r in results]
    io.write_csv(d / "table1.csv", ["j", "N", "L", "max_delta", "reference_value",
                                    "within_tolerance", "mass_drift"], rows)
    return {"cells": [r.summary() for r in results]}, ["table1.csv"]


def _gmi_cell(args):
    N, kw = args
    return ex.run_gmi(N, **kw)


def cmd_gmi(cfg, d, args):
    Ns = cfg.experiment.N
    for N in Ns:
        if float(N) != int(N) or N < 1:
            raise ConfigError(f"gmi needs positive integer N, got {N}")
    sim = cfg.simulation
    kw = dict(dt=sim.dt, dx=sim.dx or 4e-3, T=sim.T, store_every=sim.store_every,
              keep_field=cfg.output.field_format != "none")
    jobs = [(int(N), kw) for N in Ns]
    if args.workers > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_gmi_cell, jobs))
    else:
        results = [_gmi_cell(j) for j in jobs]
    io.write_csv(d / "gmi.csv", ["N", "L", "sup_delta", "initial_sup", "mass_drift"],
                 [(r.N, r.L, r.sup_delta, r.initial_sup, r.mass_drift) for r in results])
    arts = ["gmi.csv"]
    for r in results:
        if r.delta is not None:
            arts += _write_field(cfg, d, f"delta_N{r.N}", r.delta, r.x, times=r.times,
                                 x0=float(r.x[0]), dx=float(r.x[1] - r.x[0]))
    return {"cells": [r.summary() for r in results]}, arts


HANDLERS = {"spectrum": cmd_spectrum, "realize": cmd_realize, "stability": cmd_stability,
            "converge": cmd_converge, "simulate": cmd_simulate, "table1": cmd_table1,
            "gmi": cmd_gmi}


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="alberlab", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON run configuration")
        sp.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE",
                        help="override a config field (value parsed as JSON)")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--output", help="output root directory")
        sp.add_argument("--workers", type=int, default=os.cpu_count() or 1)
        sp.add_argument("--dry-run", action="store_true", help="print the resolved config and exit")
        if name == "table1":
            sp.add_argument("--j", type=int, nargs="+")
            sp.add_argument("--N", type=float, nargs="+")
        if name == "gmi":
            sp.add_argument("--N", type=int, nargs="+")
    return ap


def resolve_config(args) -> RunConfig:
    cfg = load(args.config) if args.config else RunConfig().validate()
    overrides = list(args.set)
    if args.seed is not None:
        overrides.append(f"seed={args.seed}")
    if args.command in ("table1", "gmi"):
        overrides.append(f'experiment.name="{args.command}"')
        if args.command == "gmi" and args.N is None and not _set_in(args.set, "experiment.N"):
            overrides.append(f"experiment.N={list(ex.GMI_N)}")
        if args.command == "gmi" and not _set_in(args.set, "simulation.T") and not args.config:
            overrides.append(f"simulation.T={ex.GMI_T}")
        if getattr(args, "j", None):
            overrides.append(f"experiment.j={args.j}")
        if getattr(args, "N", None):
            overrides.append(f"experiment.N={args.N}")
    return apply_overrides(cfg, overrides)


def _set_in(items, key):
    return any(s.split("=", 1)[0].strip() == key for s in items)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
    except (ConfigError, SpectrumError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    resolved = cfg.to_dict()
    if args.dry_run:
        print(io.dumps(resolved))
        return EXIT_OK
    root = output_root(cfg, args.output)
    d = ex.record_dir(root, args.command, resolved)
    d.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    code = EXIT_OK
    try:
        outputs, arts = HANDLERS[args.command](cfg, d, args)
    except Indeterminate as exc:
        outputs, arts = exc.args
        code = EXIT_INDETERMINATE
        print("indeterminate stability verdict", file=sys.stderr)
    except (NumericalAbort, LinearSolveError) as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return EXIT_ABORT
    except (ConfigError, SpectrumError, ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    rec = ex.RunRecord(args.command, resolved, outputs, arts, time.perf_counter() - t0)
    ex.write_record(rec, root)
    print(d)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
