"""Result records shared by the verification routines."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

SAMPLED_LABEL = "sampled lower bound"


def plain(value: Any) -> Any:
    """Convert numpy scalars, arrays and complex numbers to JSON-ready data.

    Complex values become ``[re, im]`` pairs.  Large arrays are dropped by
    callers before reaching here; this function converts whatever it gets.
    """
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return plain(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    return value


@dataclass
class BoundReport:
    """Outcome of a grid verification.

    ``min_value`` is the exact minimum over the evaluated points, and
    ``witness`` the point where it is attained (first index on ties).
    Grid minima are evidence only, which ``label`` records.
    """

    quantity: str
    min_value: float
    witness: dict
    grid: dict
    tolerance: float
    passed: bool
    skipped: int = 0
    runtime: float = 0.0
    details: dict = field(default_factory=dict)
    label: str = SAMPLED_LABEL

    def to_dict(self, timings: bool = False) -> dict:
        scalars = {k: v for k, v in self.details.items()
                   if not isinstance(v, np.ndarray)}
        out = {
            "quantity": self.quantity,
            "min_value": self.min_value,
            "witness": self.witness,
            "grid": self.grid,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "skipped": self.skipped,
            "details": scalars,
            "label": self.label,
        }
        if timings:
            out["runtime"] = self.runtime
        return plain(out)


@dataclass
class MuEstimate:
    """Grid estimate of ``mu = -min F_s(z,t) / (pi |z|^2)``.

    A grid minimum is at least the true minimum, so ``mu_hat`` never
    exceeds the true value of the functional.
    """

    mu_hat: float
    witness: dict
    grid: dict
    stages: dict = field(default_factory=dict)
    note: str = "grid minimum: mu_hat is a lower estimate of mu"

    def to_dict(self) -> dict:
        return plain({"mu_hat": self.mu_hat, "witness": self.witness,
                      "grid": self.grid, "stages": self.stages, "note": self.note})


def argmin_first(values: np.ndarray) -> int:
    """Index of the minimum, lowest flat index on ties."""
    return int(np.argmin(np.asarray(values).ravel()))
