from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Optional


@dataclass
class Witness:
    """A located solution of ``h(xi, omega) = 1`` with ``Re(omega) > 0``."""

    xi: float
    omega: complex
    residual: float

    def to_json(self) -> dict:
        return {"xi": self.xi, "omega": [self.omega.real, self.omega.imag],
                "residual": self.residual}


@dataclass
class StabilityVerdict:
    """Outcome of one stability test.

    ``status`` is ``"stable"``, ``"unstable"``, ``"marginal"`` (the image curve
    comes within the marginal tolerance of 1) or ``"indeterminate"``.
    """

    unstable: bool
    method: str
    status: str
    witnesses: list[Witness] = field(default_factory=list)
    winding_numbers: dict[int, int] = field(default_factory=dict)
    parameters: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    METHODS = ("argument_principle", "grid_scan", "eigenvalue_oracle")

    def __post_init__(self):
        if self.method not in self.METHODS:
            raise ValueError(f"unknown method {self.method!r}")

    @property
    def decided(self) -> bool:
        return self.status in ("stable", "unstable")

    @property
    def max_growth_rate(self) -> Optional[float]:
        if not self.witnesses:
            return None
        return max(w.omega.real for w in self.witnesses)

    def strongest_witness(self) -> Optional[Witness]:
        if not self.witnesses:
            return None
        return max(self.witnesses, key=lambda w: w.omega.real)

    def to_json(self) -> dict:
        return {
            "unstable": self.unstable,
            "status": self.status,
            "method": self.method,
            "witnesses": [w.to_json() for w in self.witnesses],
            "winding_numbers": {str(k): v for k, v in self.winding_numbers.items()},
            "parameters": self.parameters,
            "tolerances": self.tolerances,
            "diagnostics": self.diagnostics,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True, default=_default)

    @classmethod
    def from_json(cls, data: dict) -> "StabilityVerdict":
        return cls(
            unstable=data["unstable"], method=data["method"], status=data["status"],
            witnesses=[Witness(w["xi"], complex(*w["omega"]), w["residual"])
                       for w in data.get("witnesses", [])],
            winding_numbers={int(k): v for k, v in data.get("winding_numbers", {}).items()},
            parameters=data.get("parameters", {}), tolerances=data.get("tolerances", {}),
            diagnostics=data.get("diagnostics", {}),
        )


def _default(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if hasattr(obj, "item"):
        return obj.item()
    if hasattr(obj, "__dataclass_fields__"):
        return asdict(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")
