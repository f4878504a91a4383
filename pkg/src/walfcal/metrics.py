"""Evaluation statistics: RMSE, mean prediction error, percent improvement."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = ["MetricsReport", "improvement_pct", "mpe", "rmse"]


def _paired(predicted, measured):
    p = np.atleast_1d(np.asarray(predicted, dtype=float))
    m = np.atleast_1d(np.asarray(measured, dtype=float))
    if p.ndim != 1 or m.ndim != 1 or p.size != m.size:
        raise DomainError(f"series must be 1-d and equal length, got {p.shape} vs {m.shape}")
    if p.size == 0:
        raise DomainError("series must be nonempty")
    if not (np.all(np.isfinite(p)) and np.all(np.isfinite(m))):
        raise DomainError("series must be finite")
    return p, m


def rmse(predicted, measured) -> float:
    """Root-mean-square error sqrt(mean((predicted - measured)^2)), dB."""
    p, m = _paired(predicted, measured)
    diff = p - m
    return float(np.sqrt(np.mean(diff * diff)))


def mpe(predicted, measured) -> float:
    """Mean prediction error mean(predicted - measured), dB.

    Sign convention: positive when the model over-predicts the measurements.
    """
    p, m = _paired(predicted, measured)
    return float(np.mean(p - m))


def improvement_pct(rmse_basic: float, rmse_calibrated: float) -> float:
    """Percent RMSE reduction of the calibrated model over the basic one."""
    if not (math.isfinite(rmse_basic) and rmse_basic > 0.0):
        raise DomainError(f"rmse_basic must be positive and finite, got {rmse_basic!r}")
    if not (math.isfinite(rmse_calibrated) and rmse_calibrated >= 0.0):
        raise DomainError(
            f"rmse_calibrated must be non-negative and finite, got {rmse_calibrated!r}"
        )
    return 100.0 * (rmse_basic - rmse_calibrated) / rmse_basic


@dataclass(frozen=True)
class MetricsReport:
    """Fit statistics for one model, optionally paired with its basic form.

    rmse_db / mpe_db describe the calibrated predictions.  When the basic
    model's statistics are attached, improvement_pct gives the percent RMSE
    reduction (None when rmse_basic_db is 0, where the ratio is undefined).
    """

    rmse_db: float
    mpe_db: float
    rmse_basic_db: float | None = None
    mpe_basic_db: float | None = None
    improvement_pct: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.rmse_db) and self.rmse_db >= 0.0):
            raise DomainError(f"rmse_db must be non-negative, got {self.rmse_db!r}")
        # mean of residuals can never beat their root mean square
        if abs(self.mpe_db) > self.rmse_db + 1e-9:
            raise DomainError(
                f"|mpe_db| = {abs(self.mpe_db)!r} exceeds rmse_db = {self.rmse_db!r}"
            )

    @classmethod
    def from_series(cls, measured, calibrated, basic=None) -> "MetricsReport":
        """Build a report from raw series; basic series is optional."""
        rmse_cal = rmse(calibrated, measured)
        mpe_cal = mpe(calibrated, measured)
        if basic is None:
            return cls(rmse_db=rmse_cal, mpe_db=mpe_cal)
        rmse_bas = rmse(basic, measured)
        mpe_bas = mpe(basic, measured)
        gain = improvement_pct(rmse_bas, rmse_cal) if rmse_bas > 0.0 else None
        return cls(
            rmse_db=rmse_cal,
            mpe_db=mpe_cal,
            rmse_basic_db=rmse_bas,
            mpe_basic_db=mpe_bas,
            improvement_pct=gain,
        )
