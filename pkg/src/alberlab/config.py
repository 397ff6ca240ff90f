"""Run configuration: JSON document with fixed sections, strict keys, and dotted overrides."""

from __future__ import annotations

import copy
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional


class ConfigError(ValueError):
    """Invalid, unknown or inconsistent configuration entry."""


@dataclass
class SpectrumSection:
    kind: str = "gaussian"  # zero | gaussian | jonswap | tabulated
    variance: float = 1.0
    center: float = 1.0
    width: float = 0.02
    alpha: float = 0.0081
    gamma: float = 3.3
    peak_wavenumber: float = 1.0
    k_max: Optional[float] = None
    csv_path: Optional[str] = None

    def validate(self):
        if self.kind not in ("zero", "gaussian", "jonswap", "tabulated"):
            raise ConfigError(f"spectrum.kind must be zero|gaussian|jonswap|tabulated, got {self.kind!r}")
        if self.kind == "tabulated" and not self.csv_path:
            raise ConfigError("spectrum.csv_path is required for kind 'tabulated'")


@dataclass
class DomainSection:
    L: float = 100.0
    m: int = 1

    def validate(self):
        if not self.L > 0:
            raise ConfigError("domain.L must be positive")
        if int(self.m) != self.m or self.m < 1:
            raise ConfigError("domain.m must be a positive integer")


@dataclass
class StabilitySection:
    method: str = "argument_principle"  # argument_principle | grid_scan | eigenvalue_oracle | pipeline
    p: float = 1.0
    q: float = 1.0
    # True: p, q already multiply (p/2) u_xx and (q/2)|u|^2 u
    half_factor_convention: bool = True
    xi_min: Optional[int] = None
    xi_max: Optional[int] = None
    epsilon: float = 1e-4
    n_line: int = 256
    n_arc: int = 128
    max_refine: int = 14
    max_shrink: int = 6
    refine_tol: float = 1e-10
    marginal_tol: float = 1e-6
    K_trunc: Optional[int] = None
    grid_threshold: float = 0.1
    curve_xi: Optional[int] = None
    X: float = 0.5
    omega_re: float = 0.5
    omega_im: float = 0.0
    L_ladder: list = field(default_factory=lambda: [50.0, 100.0, 200.0, 400.0])

    def validate(self):
        if self.method not in ("argument_principle", "grid_scan", "eigenvalue_oracle", "pipeline"):
            raise ConfigError(f"unknown stability.method {self.method!r}")
        if (self.xi_min is None) != (self.xi_max is None):
            raise ConfigError("stability.xi_min and xi_max must be given together")
        if self.xi_min is not None and self.xi_min > self.xi_max:
            raise ConfigError("stability.xi_min > xi_max")
        if not self.p > 0 or self.q < 0:
            raise ConfigError("stability needs p > 0 and q >= 0")
        if not self.omega_re > 0:
            raise ConfigError("stability.omega_re must be positive")


@dataclass
class SimulationSection:
    # i u_t + p u_xx + q |u|^2 u = 0
    p: float = 1.0
    q: float = 1.0
    half_factor_convention: bool = False
    dt: float = 4e-3
    dx: Optional[float] = 4e-3
    N_x: Optional[int] = None
    T: float = 10.0
    store_every: int = 25
    initial: str = "realization"  # realization | planewave
    A: float = 1.0
    inhomogeneity: Optional[int] = None

    def validate(self):
        if (self.dx is None) == (self.N_x is None):
            raise ConfigError("give exactly one of simulation.dx and simulation.N_x")
        if not self.dt > 0 or not self.T > 0:
            raise ConfigError("simulation.dt and simulation.T must be positive")
        if self.initial not in ("realization", "planewave"):
            raise ConfigError("simulation.initial must be realization|planewave")
        if self.store_every < 1:
            raise ConfigError("simulation.store_every must be >= 1")

    def solver_coefficients(self) -> tuple[float, float]:
        """``(p, q)`` for ``p u_xx + q |u|^2 u``."""
        return (self.p / 2, self.q / 2) if self.half_factor_convention else (self.p, self.q)


@dataclass
class ExperimentSection:
    name: str = "none"  # none | table1 | gmi
    j: list = field(default_factory=lambda: [1, 2, 3, 4, 5])
    N: list = field(default_factory=lambda: [0.98, 1.3, 3, 10])
    realizations: int = 1

    def validate(self):
        if self.name not in ("none", "table1", "gmi"):
            raise ConfigError(f"unknown experiment.name {self.name!r}")
        if self.realizations < 1:
            raise ConfigError("experiment.realizations must be >= 1")


@dataclass
class OutputSection:
    directory: Optional[str] = None
    field_format: str = "binary"  # binary | csv | none

    def validate(self):
        if self.field_format not in ("binary", "csv", "none"):
            raise ConfigError("output.field_format must be binary|csv|none")


SECTIONS = {
    "spectrum": SpectrumSection,
    "domain": DomainSection,
    "stability": StabilitySection,
    "simulation": SimulationSection,
    "experiment": ExperimentSection,
    "output": OutputSection,
}


@dataclass
class RunConfig:
    spectrum: SpectrumSection = field(default_factory=SpectrumSection)
    domain: DomainSection = field(default_factory=DomainSection)
    stability: StabilitySection = field(default_factory=StabilitySection)
    simulation: SimulationSection = field(default_factory=SimulationSection)
    experiment: ExperimentSection = field(default_factory=ExperimentSection)
    output: OutputSection = field(default_factory=OutputSection)
    seed: int = 0

    def validate(self) -> "RunConfig":
        for name in SECTIONS:
            getattr(self, name).validate()
        if int(self.seed) != self.seed or self.seed < 0:
            raise ConfigError("seed must be a nonnegative integer")
        return self

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("config document must be a JSON object")
        unknown = set(data) - set(SECTIONS) - {"seed"}
        if unknown:
            raise ConfigError(f"unknown top-level keys: {sorted(unknown)}")
        kw = {}
        for name, sec in SECTIONS.items():
            body = data.get(name, {})
            if not isinstance(body, dict):
                raise ConfigError(f"section {name!r} must be an object")
            allowed = {f.name for f in fields(sec)}
            bad = set(body) - allowed
            if bad:
                raise ConfigError(f"unknown keys in {name}: {sorted(bad)}")
            kw[name] = sec(**body)
        if "seed" in data:
            kw["seed"] = data["seed"]
        return cls(**kw).validate()


def load(path) -> RunConfig:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return RunConfig.from_dict(data)


def apply_overrides(cfg: RunConfig, overrides) -> RunConfig:
    """Apply ``section.key=value`` strings; values parse as JSON, falling back to a string."""
    data = copy.deepcopy(cfg.to_dict())
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        key, raw = item.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        parts = key.strip().split(".")
        if len(parts) == 1 and parts[0] == "seed":
            data["seed"] = value
            continue
        if len(parts) != 2 or parts[0] not in SECTIONS:
            raise ConfigError(f"override key {key!r} must be section.field or seed")
        if parts[1] not in data[parts[0]]:
            raise ConfigError(f"unknown key {key!r}")
        data[parts[0]][parts[1]] = value
    try:
        return RunConfig.from_dict(data)
    except TypeError as exc:  # pragma: no cover - dataclass signature mismatch
        raise ConfigError(str(exc)) from exc
