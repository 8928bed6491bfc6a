"""Result records for numerical experiments and their JSON form."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..exceptions import UnreliableFitError

MIN_SAMPLES = 4


@dataclass(frozen=True)
class SlopeFit:
    """Least-squares line through (log tau, log quantity) samples."""

    parameter: int
    samples: tuple[tuple[float, float], ...]
    slope: float
    intercept: float
    max_residual: float

    def to_dict(self) -> dict:
        return {
            "parameter": self.parameter,
            "samples": [list(s) for s in self.samples],
            "slope": self.slope,
            "intercept": self.intercept,
            "max_residual": self.max_residual,
        }


def fit_slope(log_x, log_y, parameter: int = 0, max_residual: float | None = None) -> SlopeFit:
    """Fit ``log_y ~ slope * log_x + intercept``.

    Raises
    ------
    ValueError
        Fewer than four samples, or non-finite data.
    UnreliableFitError
        ``max_residual`` is given and the worst residual exceeds it.
    """
    x = np.asarray(log_x, dtype=float)
    y = np.asarray(log_y, dtype=float)
    if x.size < MIN_SAMPLES or x.shape != y.shape:
        raise ValueError(f"need at least {MIN_SAMPLES} paired samples")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("samples must be finite")
    if np.ptp(x) == 0:
        raise ValueError("degenerate grid: all abscissae coincide")
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.max(np.abs(y - (slope * x + intercept))))
    if max_residual is not None and resid > max_residual:
        raise UnreliableFitError(f"fit residual {resid:.3g} exceeds {max_residual:g}")
    return SlopeFit(
        parameter=parameter,
        samples=tuple(zip(x.tolist(), y.tolist())),
        slope=float(slope),
        intercept=float(intercept),
        max_residual=resid,
    )


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of one numerical certification run.

    ``passed`` is ``worst_case <= tolerance`` when ``sense == "max"`` (a
    discrepancy) and ``worst_case >= tolerance`` when ``sense == "min"`` (a
    slope, rank or margin).
    """

    axiom: str
    passed: bool
    worst_case: float
    tolerance: float
    sense: str = "max"
    details: list = field(default_factory=list)

    @classmethod
    def from_worst(cls, axiom: str, worst_case: float, tolerance: float, sense: str = "max",
                   details=None) -> "AxiomReport":
        if sense == "max":
            passed = worst_case <= tolerance
        elif sense == "min":
            passed = worst_case >= tolerance
        else:
            raise ValueError("sense must be 'max' or 'min'")
        return cls(axiom, bool(passed), float(worst_case), float(tolerance), sense, list(details or []))

    def to_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "passed": self.passed,
            "worst_case": self.worst_case,
            "tolerance": self.tolerance,
            "sense": self.sense,
            "details": self.details,
        }
