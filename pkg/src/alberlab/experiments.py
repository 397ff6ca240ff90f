"""Scripted reproductions: plane-wave MI bifurcation table, gMI suppression, stability pipeline."""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .alber import (ContourSpec, KernelParams, StabilityVerdict, default_xi_range,
                    detect_instability_contour, eigenvalue_oracle, riemann_convergence_study)
from .io import dumps
from .nlssim import (SimConfig, critical_length, extract_inhomogeneity_general,
                     extract_inhomogeneity_planewave, solve)
from .spectrum import PowerSpectrum, discretize

DT = 4e-3
DX = 4e-3

# Maximum inhomogeneity over x and t in [0, 10], indexed [j][N]
TABLE1_N = (0.98, 1.3, 3, 10)
TABLE1 = {
    1: (0.0359, 2.59, 3.08, 3.03),
    2: (0.0393, 2.59, 3.09, 3.03),
    3: (0.149, 2.65, 3.17, 3.12),
    4: (0.25, 2.69, 3.22, 3.18),
    5: (0.03, 2.57, 3.05, 2.96),
}
TABLE1_REL_TOL = 0.15
TABLE1_STABLE_CAP = 0.3

GMI_L0 = 4.4518
GMI_T = 10.3
GMI_N = (1, 2, 3, 10)


def inhomogeneity(j: int, x, A: float = 1.0):
    """Initial inhomogeneity profiles delta_1 .. delta_5."""
    x = np.asarray(x, dtype=float)
    if j == 1:
        return 0.03 * A * np.cos(5 * x) / np.cosh(15 * x)
    if j == 2:
        return 0.03 * A / np.cosh(15 * x)
    if j == 3:
        return 0.03 * A * np.exp(-3 * x**2)
    if j == 4:
        return 0.03 * A * np.exp(-(x**4))
    if j == 5:
        return 0.06 * A * x * np.exp(-(x**4))
    raise ValueError(f"inhomogeneity index must be 1..5, got {j}")


def table1_value(j: int, N: float) -> float:
    return TABLE1[j][TABLE1_N.index(N)]


def gmi_background(x, L0: float = GMI_L0):
    return 0.018 * np.exp(-2j * np.pi * x / L0) + 0.899 + 0.1252 * np.exp(2j * np.pi * x / L0)


def gmi_perturbation(x):
    return 0.07 * np.cos(5 * x) / np.cosh(15 * x)


@dataclass
class Table1Result:
    j: int
    N: float
    L: float
    max_delta: float
    config: dict
    mass_drift: float
    energy_drift: float
    runtime_s: float
    times: np.ndarray = field(repr=False)
    x: np.ndarray = field(repr=False)
    delta: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def reference_value(self) -> Optional[float]:
        try:
            return table1_value(self.j, self.N)
        except (KeyError, ValueError):
            return None

    def within_tolerance(self) -> Optional[bool]:
        ref = self.reference_value
        if ref is None:
            return None
        if self.N < 1:
            return self.max_delta <= TABLE1_STABLE_CAP
        return abs(self.max_delta - ref) <= TABLE1_REL_TOL * ref

    def summary(self) -> dict:
        return {"j": self.j, "N": self.N, "L": self.L, "max_delta": self.max_delta,
                "reference_value": self.reference_value, "within_tolerance": self.within_tolerance(),
                "mass_drift": self.mass_drift, "energy_drift": self.energy_drift}


def run_table1(j: int, N: float, p: float = 1.0, q: float = 1.0, A: float = 1.0,
               dt: float = DT, dx: float = DX, T: float = 10.0, store_every: int = 25,
               keep_field: bool = False) -> Table1Result:
    """Plane wave ``A (1 + delta_j)`` on ``L = N L_c``; returns ``max |delta(x, t)|``."""
    L = N * critical_length(p, q, A)
    cfg = SimConfig.from_function(p, q, L, dx, dt, T, lambda x: A * (1.0 + inhomogeneity(j, x, A)))
    t0 = time.perf_counter()
    wf = solve(cfg, store_every=store_every)
    runtime = time.perf_counter() - t0
    delta = extract_inhomogeneity_planewave(wf, A, q)
    return Table1Result(
        j=j, N=N, L=L, max_delta=float(np.max(np.abs(delta))),
        config={"experiment": "table1", "j": j, "N": N, "A": A, "store_every": store_every,
                **cfg.metadata()},
        mass_drift=wf.mass_drift, energy_drift=wf.energy_drift, runtime_s=runtime,
        times=wf.times, x=wf.x, delta=delta if keep_field else None,
    )


@dataclass
class GMIResult:
    N: int
    L: float
    sup_delta: float
    initial_sup: float
    config: dict
    mass_drift: float
    runtime_s: float
    times: np.ndarray = field(repr=False)
    x: np.ndarray = field(repr=False)
    delta: Optional[np.ndarray] = field(default=None, repr=False)

    def summary(self) -> dict:
        return {"N": self.N, "L": self.L, "sup_delta": self.sup_delta,
                "initial_sup": self.initial_sup, "growth_factor": self.sup_delta / self.initial_sup,
                "mass_drift": self.mass_drift}


def run_gmi(N: int, p: float = 1.0, q: float = 1.0, L0: float = GMI_L0, dt: float = DT,
            dx: float = DX, T: float = GMI_T, store_every: int = 25, perturbation=gmi_perturbation,
            keep_field: bool = False) -> GMIResult:
    """Three-mode background ``u`` and perturbed ``v`` on ``L = N L0``; ``delta = v - u``."""
    if int(N) != N or N < 1:
        raise ValueError(f"N must be a positive integer so the background is periodic, got {N}")
    N = int(N)
    L = N * L0
    cu = SimConfig.from_function(p, q, L, dx, dt, T, lambda x: gmi_background(x, L0))
    cv = SimConfig.from_function(p, q, L, dx, dt, T,
                                 lambda x: gmi_background(x, L0) + perturbation(x))
    t0 = time.perf_counter()
    wu = solve(cu, store_every)
    wv = solve(cv, store_every)
    runtime = time.perf_counter() - t0
    delta = extract_inhomogeneity_general(wv, wu)
    return GMIResult(
        N=N, L=L, sup_delta=float(np.max(np.abs(delta))),
        initial_sup=float(np.max(np.abs(delta[0]))),
        config={"experiment": "gmi", "N": N, "L0": L0, "store_every": store_every,
                **cu.metadata()},
        mass_drift=max(wu.mass_drift, wv.mass_drift), runtime_s=runtime,
        times=wu.times, x=wu.x, delta=delta if keep_field else None,
    )


def _table1_cell(args):
    j, N, kw = args
    return run_table1(j, N, **kw)


def run_table1_matrix(cells=None, workers: int = 1, **kw) -> list[Table1Result]:
    """All requested ``(j, N)`` cells, in input order regardless of ``workers``."""
    if cells is None:
        cells = [(j, N) for j in TABLE1 for N in TABLE1_N]
    jobs = [(j, N, kw) for j, N in cells]
    if workers <= 1:
        return [_table1_cell(a) for a in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(_table1_cell, jobs))


@dataclass
class PipelineResult:
    contour: StabilityVerdict
    oracle: StabilityVerdict
    convergence: list[dict]
    flags: list[str]

    @property
    def agree(self) -> bool:
        return self.contour.unstable == self.oracle.unstable

    @property
    def status(self) -> str:
        if not self.contour.decided:
            return self.contour.status
        return self.contour.status if self.agree else "disagreement"

    def summary(self) -> dict:
        return {"status": self.status, "agree": self.agree, "flags": self.flags,
                "contour": self.contour.to_json(), "oracle": self.oracle.to_json(),
                "convergence": self.convergence}


def run_stability_pipeline(S: PowerSpectrum, L: float, p: float, q: float, m: int = 1,
                           xi_range=None, contour: ContourSpec = ContourSpec(),
                           K_trunc: Optional[int] = None, X: Optional[float] = None,
                           omega: complex = 0.5, L_ladder=None,
                           refine_tol: float = 1e-10) -> PipelineResult:
    """Discretize, decide by contour, cross-check by eigenvalues, and study the L limit.

    Disagreement between methods is reported in ``flags`` and ``status`` and is
    never resolved in favour of either method.
    """
    D = discretize(S, L, m)
    kp = KernelParams(p, q, D)
    xis = default_xi_range(kp) if xi_range is None else list(xi_range)
    v_contour = detect_instability_contour(kp, xi_range=xis, c=contour, refine_tol=refine_tol)
    v_oracle = eigenvalue_oracle(kp, K_trunc=K_trunc, xi_range=xis)
    flags = []
    if v_contour.unstable != v_oracle.unstable:
        flags.append("contour and eigenvalue oracle disagree")
    if not v_contour.decided:
        flags.append(f"contour verdict {v_contour.status}")
    g_c, g_o = v_contour.max_growth_rate, v_oracle.max_growth_rate
    if g_c is not None and g_o is not None and abs(g_c - g_o) > 0.1 * g_o:
        flags.append("growth rates differ by more than 10%")

    if X is None:
        w = v_contour.strongest_witness()
        X = abs(w.xi) / L if w is not None else 0.25
    ladder = L_ladder or [L / 2, L, 2 * L, 4 * L]
    conv = riemann_convergence_study(S, X, omega, p, q, ladder, m) if q > 0 else [
        {"L": float(x), "xi": int(round(X * x)), "h_L": 0j, "h_inf": 0j, "error": 0.0}
        for x in ladder]
    return PipelineResult(v_contour, v_oracle, conv, flags)


@dataclass
class RunRecord:
    experiment: str
    config: dict
    outputs: dict
    artifacts: list = field(default_factory=list)
    duration_s: float = 0.0
    version: str = __version__
    created: str = ""

    @property
    def config_hash(self) -> str:
        return config_hash(self.config)

    def to_json(self) -> dict:
        d = asdict(self)
        d["config_hash"] = self.config_hash
        return d


def config_hash(config: dict) -> str:
    canon = json.dumps(json.loads(dumps(config)), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def record_dir(root, experiment: str, config: dict) -> Path:
    return Path(root) / experiment / config_hash(config)


def write_record(rec: RunRecord, root) -> Path:
    """Append ``rec`` to ``<root>/<experiment>/<hash>/records.jsonl`` and refresh ``record.json``.

    The timestamp lives only in ``created``; everything else is deterministic.
    """
    d = record_dir(root, rec.experiment, rec.config)
    d.mkdir(parents=True, exist_ok=True)
    if not rec.created:
        rec.created = datetime.now(timezone.utc).isoformat()
    payload = rec.to_json()
    with open(d / "records.jsonl", "a") as fh:
        fh.write(json.dumps(json.loads(dumps(payload)), sort_keys=True) + "\n")
    stable = {k: v for k, v in payload.items() if k not in ("created", "duration_s")}
    (d / "record.json").write_text(dumps(stable) + "\n")
    return d


__all__ = [
    "GMIResult", "PipelineResult", "RunRecord", "TABLE1", "TABLE1_N", "Table1Result",
    "config_hash", "gmi_background", "gmi_perturbation", "inhomogeneity", "record_dir",
    "run_gmi", "run_stability_pipeline", "run_table1", "run_table1_matrix", "table1_value",
    "write_record",
]
