"""Least-squares calibration of a model against field measurements.

Component terms of the chosen variant act as expansion and testing functions;
testing against the measurements yields the normal equations of a linear
least-squares problem whose Gram matrix is singular by construction (most
terms are constants in d).  The coefficients are therefore recovered as the
minimum-norm least-squares solution via SVD with a relative cutoff, which
coincides with the Gram-system solve whenever that system is well posed and
leaves the fitted values dependent only on the column space.

Consequences worth knowing before comparing runs: coefficient vectors are
unique only modulo the null space, so per-coefficient (and per-group) values
can differ wildly between numerically equal fits; the fitted curve and the
residuals are the stable quantities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import BasisSet, build_basis, design_matrix
from .errors import DomainError
from .models import ModelKind, Terrain, _as_distance

__all__ = [
    "Calibration",
    "DisaggregationProfile",
    "MeasurementSet",
    "SVD_CUTOFF_DEFAULT",
    "calibrate",
    "disaggregate",
    "minimum_norm_lstsq",
    "predict_calibrated",
]

SVD_CUTOFF_DEFAULT = 1e-10


@dataclass(frozen=True)
class MeasurementSet:
    """Ordered (distance, measured pathloss) samples from one campaign.

    Distances need not be unique or sorted; duplicates act as natural
    weights in the fit.  Pathloss values must be positive and finite.
    """

    distances_km: np.ndarray
    pathloss_db: np.ndarray
    label: str | None = None

    def __post_init__(self):
        d = np.atleast_1d(np.asarray(self.distances_km, dtype=float))
        p = np.atleast_1d(np.asarray(self.pathloss_db, dtype=float))
        if d.ndim != 1 or p.ndim != 1 or d.size != p.size:
            raise DomainError(
                f"distances and pathloss must be 1-d and equal length, got {d.shape} vs {p.shape}"
            )
        if d.size == 0:
            raise DomainError("a measurement set needs at least one sample")
        if not (np.all(np.isfinite(d)) and np.all(d > 0.0)):
            raise DomainError("measurement distances must be positive and finite")
        if not (np.all(np.isfinite(p)) and np.all(p > 0.0)):
            raise DomainError("measured pathloss values must be positive and finite")
        d.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "distances_km", d)
        object.__setattr__(self, "pathloss_db", p)

    def __len__(self) -> int:
        return self.distances_km.size


@dataclass(frozen=True)
class Calibration:
    """Result of one fit: coefficients, rank, fitted values, residuals."""

    kind: ModelKind
    terrain: Terrain
    basis: BasisSet
    alpha: np.ndarray
    rank: int
    distances_km: np.ndarray
    measured_db: np.ndarray
    fitted_db: np.ndarray
    residual_db: np.ndarray


def minimum_norm_lstsq(matrix: np.ndarray, rhs: np.ndarray, cutoff: float = SVD_CUTOFF_DEFAULT):
    """Minimum-norm least-squares solve of matrix @ x ~ rhs.

    Returns (x, rank) where rank counts singular values above cutoff times
    the largest.  Deterministic for given inputs; the unique minimizer of
    ||x|| among all least-squares solutions.
    """
    matrix = np.asarray(matrix, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    if matrix.ndim != 2 or rhs.ndim != 1 or matrix.shape[0] != rhs.size:
        raise DomainError(
            f"incompatible system: matrix {matrix.shape}, rhs length {rhs.size}"
        )
    x, _, rank, _ = np.linalg.lstsq(matrix, rhs, rcond=cutoff)
    return x, int(rank)


def calibrate(
    kind: ModelKind,
    terrain: Terrain,
    meas: MeasurementSet,
    cutoff: float = SVD_CUTOFF_DEFAULT,
) -> Calibration:
    """Fit one variant's component weights to a measurement set.

    The residual (fitted minus measured) is orthogonal to every design-matrix
    column; in particular its mean is zero because constants lie in the span.
    """
    basis = build_basis(kind, terrain)
    dm = design_matrix(basis, meas.distances_km)
    alpha, rank = minimum_norm_lstsq(dm.matrix, meas.pathloss_db, cutoff)
    fitted = dm.matrix @ alpha
    for arr in (alpha, fitted):
        arr.setflags(write=False)
    residual = fitted - meas.pathloss_db
    residual.setflags(write=False)
    return Calibration(
        kind=kind,
        terrain=terrain,
        basis=basis,
        alpha=alpha,
        rank=rank,
        distances_km=meas.distances_km,
        measured_db=meas.pathloss_db,
        fitted_db=fitted,
        residual_db=residual,
    )


def predict_calibrated(c: Calibration, d_km):
    """Calibrated pathloss: the coefficient-weighted sum of component terms."""
    d, scalar = _as_distance(d_km)
    d1 = np.atleast_1d(d)
    columns = np.column_stack([fn.evaluate(d1) for fn in c.basis.functions])
    values = columns @ c.alpha
    return float(values[0]) if scalar else values


@dataclass(frozen=True)
class DisaggregationProfile:
    """Per-group contributions to net pathloss over a distance axis.

    basic uses unit weights, calibrated uses the fitted coefficients; each
    mapping's values sum per distance to the corresponding net prediction.
    """

    kind: ModelKind
    distances_km: np.ndarray
    groups: tuple[str, ...]
    basic: dict[str, np.ndarray]
    calibrated: dict[str, np.ndarray]

    def net_basic(self) -> np.ndarray:
        return np.sum([self.basic[g] for g in self.groups], axis=0)

    def net_calibrated(self) -> np.ndarray:
        return np.sum([self.calibrated[g] for g in self.groups], axis=0)


def disaggregate(c: Calibration, distances_km) -> DisaggregationProfile:
    """Split basic and calibrated predictions into per-group contributions."""
    d, _ = _as_distance(distances_km)
    d = np.atleast_1d(d).astype(float)
    columns = np.column_stack([fn.evaluate(d) for fn in c.basis.functions])
    basic: dict[str, np.ndarray] = {}
    calibrated: dict[str, np.ndarray] = {}
    for group in c.basis.groups:
        idx = list(c.basis.group_indices(group))
        basic[group] = columns[:, idx].sum(axis=1)
        calibrated[group] = columns[:, idx] @ c.alpha[idx]
    return DisaggregationProfile(
        kind=c.kind,
        distances_km=d,
        groups=c.basis.groups,
        basic=basic,
        calibrated=calibrated,
    )
