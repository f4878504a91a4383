"""Component-term basis sets of the Walfisch-type models.

Each model variant is rewritten as a plain sum of component terms; the terms
become the expansion (and, in Galerkin fashion, also the testing) functions
of the calibration fit.  A Walfisch-Ikegami variant contributes 13 functions
tagged FSP / RTS / MSD; the Walfisch-Bertoni model contributes 8 functions
tagged CORE / HEIGHT / GEOMETRY / CURVATURE, with the overlapping free-space
constants merged (89.5 = 32.4 + 57.1, 38 log10 d, 21 log10 f).

The sum of a variant's basis functions reproduces predict_basic exactly.
For fixed terrain most functions are constants in d, so the design matrix
over any set of distances is rank deficient by construction: its numeric
rank is 2 for Walfisch-Ikegami (span {1, log10 d}) and 3 for
Walfisch-Bertoni (the curvature term adds one dimension).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError
from .models import (
    RTS_LEAD_COST,
    RTS_LEAD_ITU,
    Family,
    ModelKind,
    Terrain,
    _as_distance,
    _check_wb_domain,
    multiscreen_constants,
    street_orientation_term,
)

__all__ = [
    "BasisFunction",
    "BasisSet",
    "DesignMatrix",
    "RANK_TOL_DEFAULT",
    "WB_GROUPS",
    "WI_GROUPS",
    "build_basis",
    "design_matrix",
    "effective_rank",
]

WI_GROUPS = ("FSP", "RTS", "MSD")
WB_GROUPS = ("CORE", "HEIGHT", "GEOMETRY", "CURVATURE")
RANK_TOL_DEFAULT = 1e-10


@dataclass(frozen=True)
class BasisFunction:
    """One component term: index, printable label, group tag, evaluator."""

    index: int
    label: str
    group: str
    evaluator: Callable[[np.ndarray], np.ndarray] = field(repr=False)

    def evaluate(self, d_km):
        """Term value in dB at the given distance(s)."""
        d, scalar = _as_distance(d_km)
        values = np.broadcast_to(np.asarray(self.evaluator(d), dtype=float), d.shape)
        return float(values) if scalar else np.array(values, dtype=float)


@dataclass(frozen=True)
class BasisSet:
    """Ordered component functions of one model variant at fixed terrain."""

    kind: ModelKind
    terrain: Terrain
    functions: tuple[BasisFunction, ...]

    def __len__(self) -> int:
        return len(self.functions)

    def __iter__(self):
        return iter(self.functions)

    @property
    def groups(self) -> tuple[str, ...]:
        """Group tags in profile order."""
        return WB_GROUPS if self.kind is ModelKind.W_BERT else WI_GROUPS

    def group_indices(self, group: str) -> tuple[int, ...]:
        """Indices of the functions carrying the given group tag."""
        found = tuple(fn.index for fn in self.functions if fn.group == group)
        if not found:
            raise DomainError(f"unknown group {group!r} for {self.kind.value}")
        return found

    def labels(self) -> tuple[str, ...]:
        return tuple(fn.label for fn in self.functions)


@dataclass(frozen=True)
class DesignMatrix:
    """Rows of basis-function values, one row per distance."""

    matrix: np.ndarray
    distances_km: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


def _const(value: float):
    def evaluate(d: np.ndarray) -> np.ndarray:
        return np.broadcast_to(np.float64(value), d.shape)

    return evaluate


def _wi_functions(terrain: Terrain, kind: ModelKind) -> list[BasisFunction]:
    family, density = kind.family, kind.density
    lead = RTS_LEAD_ITU if family is Family.ITU else RTS_LEAD_COST
    ka, kf = multiscreen_constants(terrain, density, family)
    log_f = math.log10(terrain.f_mhz)
    specs = [
        ("32.4", "FSP", _const(32.4)),
        ("20 log10 d", "FSP", lambda d: 20.0 * np.log10(d)),
        ("20 log10 f", "FSP", _const(20.0 * log_f)),
        (f"{lead:g}", "RTS", _const(lead)),
        ("-10 log10 w", "RTS", _const(-10.0 * math.log10(terrain.w_m))),
        ("10 log10 f", "RTS", _const(10.0 * log_f)),
        ("20 log10 dh_rx", "RTS", _const(20.0 * math.log10(terrain.dh_rx_m))),
        ("orientation(phi)", "RTS", _const(street_orientation_term(terrain.phi_deg))),
        ("-18 log10(1 + dh_tx)", "MSD", _const(-18.0 * math.log10(1.0 + terrain.dh_tx_m))),
        ("k_a", "MSD", _const(ka)),
        ("18 log10 d", "MSD", lambda d: 18.0 * np.log10(d)),
        ("k_f log10 f", "MSD", _const(kf * log_f)),
        ("-9 log10 b", "MSD", _const(-9.0 * math.log10(terrain.b_m))),
    ]
    return [BasisFunction(n, label, group, fn) for n, (label, group, fn) in enumerate(specs)]


def _wb_functions(terrain: Terrain) -> list[BasisFunction]:
    dh_tx = terrain.dh_tx_m
    half_b = terrain.b_m / 2.0
    angle_deg = math.degrees(math.atan(2.0 * terrain.dh_rx_m / terrain.b_m))

    def curvature(d: np.ndarray) -> np.ndarray:
        _check_wb_domain(d, dh_tx)
        return -18.0 * np.log10(1.0 - d * d / (17.0 * dh_tx))

    specs = [
        ("89.5", "CORE", _const(89.5)),
        ("38 log10 d", "CORE", lambda d: 38.0 * np.log10(d)),
        ("-18 log10 dh_tx", "HEIGHT", _const(-18.0 * math.log10(dh_tx))),
        ("21 log10 f", "CORE", _const(21.0 * math.log10(terrain.f_mhz))),
        (
            "5 log10((b/2)^2 + dh_rx^2)",
            "GEOMETRY",
            _const(5.0 * math.log10(half_b * half_b + terrain.dh_rx_m * terrain.dh_rx_m)),
        ),
        ("-9 log10 b", "GEOMETRY", _const(-9.0 * math.log10(terrain.b_m))),
        ("20 log10 atan_deg(2 dh_rx / b)", "GEOMETRY", _const(20.0 * math.log10(angle_deg))),
        ("-18 log10(1 - d^2 / (17 dh_tx))", "CURVATURE", curvature),
    ]
    return [BasisFunction(n, label, group, fn) for n, (label, group, fn) in enumerate(specs)]


def build_basis(kind: ModelKind, terrain: Terrain) -> BasisSet:
    """Component functions of one variant, closed over fixed terrain.

    13 functions for a Walfisch-Ikegami variant, 8 for Walfisch-Bertoni;
    their sum over n equals predict_basic(kind, terrain, d) at every d.
    """
    if kind is ModelKind.W_BERT:
        functions = _wb_functions(terrain)
    else:
        functions = _wi_functions(terrain, kind)
    return BasisSet(kind=kind, terrain=terrain, functions=tuple(functions))


def design_matrix(basis: BasisSet, distances_km) -> DesignMatrix:
    """Tabulate every basis function at every distance (rows = distances)."""
    d, _ = _as_distance(distances_km)
    d = np.atleast_1d(d).astype(float)
    matrix = np.column_stack([fn.evaluate(d) for fn in basis.functions])
    return DesignMatrix(matrix=matrix, distances_km=d)


def effective_rank(m, tol: float = RANK_TOL_DEFAULT) -> int:
    """Singular values above tol times the largest one.

    Accepts a DesignMatrix or a plain 2-d array.  This is the numeric stand-in
    for the symbolic linear-independence argument: constants collapse into a
    single dimension no matter how many columns carry them.
    """
    if not (math.isfinite(tol) and tol >= 0.0):
        raise DomainError(f"tol must be a finite non-negative number, got {tol!r}")
    matrix = m.matrix if isinstance(m, DesignMatrix) else np.asarray(m, dtype=float)
    singular = np.linalg.svd(matrix, compute_uv=False)
    if singular.size == 0 or singular[0] == 0.0:
        return 0
    return int(np.count_nonzero(singular > tol * singular[0]))
