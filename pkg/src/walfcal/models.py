"""Basic Walfisch-type pathloss models and their component terms.

Five NLOS variants are covered: the COST231 Walfisch-Ikegami model for
metropolitan and suburban environments (CWI-M / CWI-SU), the ITU-R flavour of
both (ITWI-M / ITWI-SU: roof-top leading constant -8.2 instead of -16.9, plus
substituted multiscreen constants above 2 GHz), and the Walfisch-Bertoni
model (W-BERT).

Units are fixed throughout and never auto-converted: distance in km,
frequency in MHz, street/building geometry in m, losses in dB.  Every
function is pure and accepts scalar or numpy-array distances, so they are
safe to call from any number of workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import CurvatureDomainError, DomainError

__all__ = [
    "Density",
    "Family",
    "ModelKind",
    "Terrain",
    "building_geometry_term",
    "free_space_loss",
    "multiscreen_constants",
    "multiscreen_loss",
    "predict_basic",
    "rooftop_to_street_loss",
    "street_orientation_term",
    "wb_excess_loss",
    "wb_max_distance_km",
]

RTS_LEAD_COST = -16.9
RTS_LEAD_ITU = -8.2


class Family(Enum):
    """Constant family of a Walfisch-Ikegami variant."""

    COST = "COST"
    ITU = "ITU"


class Density(Enum):
    """Built-up density selecting the multiscreen frequency coefficient."""

    METRO = "METRO"
    SUBURBAN = "SUBURBAN"


class ModelKind(Enum):
    """The five supported model variants, named as in the report tables."""

    CWI_M = "CWI-M"
    CWI_SU = "CWI-SU"
    ITWI_M = "ITWI-M"
    ITWI_SU = "ITWI-SU"
    W_BERT = "W-BERT"

    @classmethod
    def from_label(cls, label: str) -> "ModelKind":
        """Look up a variant by its table label, e.g. ``"CWI-M"``."""
        try:
            return cls(label.strip().upper())
        except ValueError:
            known = ", ".join(kind.value for kind in cls)
            raise DomainError(f"unknown model kind {label!r}; expected one of {known}") from None

    @property
    def is_walfisch_bertoni(self) -> bool:
        return self is ModelKind.W_BERT

    @property
    def family(self) -> Family | None:
        """COST or ITU for Walfisch-Ikegami variants, None for W-BERT."""
        if self is ModelKind.W_BERT:
            return None
        return Family.ITU if self.value.startswith("ITWI") else Family.COST

    @property
    def density(self) -> Density | None:
        """METRO or SUBURBAN for Walfisch-Ikegami variants, None for W-BERT."""
        if self is ModelKind.W_BERT:
            return None
        return Density.SUBURBAN if self.value.endswith("-SU") else Density.METRO


@dataclass(frozen=True)
class Terrain:
    """Fixed per-campaign link and environment parameters.

    Attributes:
        f_mhz:    operating frequency (MHz)
        w_m:      street width (m)
        b_m:      building separation (m)
        phi_deg:  street orientation / incidence angle (degrees, 0..55)
        dh_rx_m:  roof-top height minus mobile-station height (m)
        dh_tx_m:  transmitter antenna height minus roof-top height (m);
                  must be positive (transmitter above the rooftops)
    """

    f_mhz: float
    w_m: float
    b_m: float
    phi_deg: float
    dh_rx_m: float
    dh_tx_m: float

    def __post_init__(self):
        for name in ("f_mhz", "w_m", "b_m", "dh_rx_m", "dh_tx_m"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise DomainError(f"{name} must be positive and finite, got {value!r}")
        if not (math.isfinite(self.phi_deg) and 0.0 <= self.phi_deg <= 55.0):
            raise DomainError(
                f"phi_deg must lie in [0, 55] degrees, got {self.phi_deg!r}"
            )


def _as_distance(d_km):
    """Validate distances (km, > 0, finite); returns (array, was_scalar)."""
    d = np.asarray(d_km, dtype=float)
    if d.size == 0:
        raise DomainError("at least one distance is required")
    if not (np.all(np.isfinite(d)) and np.all(d > 0.0)):
        raise DomainError(f"distances must be positive and finite km, got {d_km!r}")
    return d, d.ndim == 0


def wb_max_distance_km(dh_tx_m: float) -> float:
    """Upper distance limit sqrt(17 * dh_tx) of the Walfisch-Bertoni model."""
    return math.sqrt(17.0 * dh_tx_m)


def _check_wb_domain(d: np.ndarray, dh_tx_m: float) -> None:
    """Reject distances with d^2 >= 17 * dh_tx (curvature term undefined)."""
    flat = np.atleast_1d(d)
    bad = flat[flat * flat >= 17.0 * dh_tx_m]
    if bad.size:
        listed = ", ".join(f"{value:g}" for value in bad[:8])
        if bad.size > 8:
            listed += f", ... ({bad.size} total)"
        raise CurvatureDomainError(
            f"distance(s) {listed} km at or beyond the curvature limit "
            f"{wb_max_distance_km(dh_tx_m):.4f} km (requires d^2 < 17 * dh_tx)"
        )


def free_space_loss(d_km, f_mhz: float):
    """Free-space loss: 32.4 + 20 log10(d_km) + 20 log10(f_mhz)."""
    if not (math.isfinite(f_mhz) and f_mhz > 0.0):
        raise DomainError(f"f_mhz must be positive and finite, got {f_mhz!r}")
    d, scalar = _as_distance(d_km)
    loss = 32.4 + 20.0 * np.log10(d) + 20.0 * np.log10(f_mhz)
    return float(loss) if scalar else loss


def street_orientation_term(phi_deg: float) -> float:
    """Street-orientation correction of the roof-top-to-street loss.

    -10 + 0.354 * phi on [0, 35); 2.5 + 0.075 * (phi - 35) on [35, 55].
    """
    if not (math.isfinite(phi_deg) and 0.0 <= phi_deg <= 55.0):
        raise DomainError(f"phi_deg must lie in [0, 55] degrees, got {phi_deg!r}")
    if phi_deg < 35.0:
        return -10.0 + 0.354 * phi_deg
    return 2.5 + 0.075 * (phi_deg - 35.0)


def rooftop_to_street_loss(terrain: Terrain, family: Family) -> float:
    """Roof-top-to-street diffraction and scatter loss (constant in distance).

    lead - 10 log10(w) + 10 log10(f) + 20 log10(dh_rx) + orientation(phi),
    with lead = -16.9 for the COST family and -8.2 for ITU.
    """
    lead = RTS_LEAD_ITU if family is Family.ITU else RTS_LEAD_COST
    return (
        lead
        - 10.0 * math.log10(terrain.w_m)
        + 10.0 * math.log10(terrain.f_mhz)
        + 20.0 * math.log10(terrain.dh_rx_m)
        + street_orientation_term(terrain.phi_deg)
    )


def multiscreen_constants(terrain: Terrain, density: Density, family: Family):
    """Return the (k_a, k_f) multiscreen constants for one variant.

    k_a = 54 and k_f = (1.5 or 0.7) * (f/925 - 1) - 4 (METRO resp. SUBURBAN);
    the ITU family above 2 GHz substitutes k_a = 71.4 and k_f = -8.
    """
    above_2ghz = family is Family.ITU and terrain.f_mhz > 2000.0
    ka = 71.4 if above_2ghz else 54.0
    if above_2ghz:
        kf = -8.0
    else:
        factor = 1.5 if density is Density.METRO else 0.7
        kf = factor * (terrain.f_mhz / 925.0 - 1.0) - 4.0
    return ka, kf


def multiscreen_loss(terrain: Terrain, d_km, density: Density, family: Family):
    """Multiscreen diffraction loss.

    -18 log10(1 + dh_tx) + k_a + 18 log10(d) + k_f log10(f) - 9 log10(b).
    """
    ka, kf = multiscreen_constants(terrain, density, family)
    d, scalar = _as_distance(d_km)
    loss = (
        -18.0 * math.log10(1.0 + terrain.dh_tx_m)
        + ka
        + 18.0 * np.log10(d)
        + kf * math.log10(terrain.f_mhz)
        - 9.0 * math.log10(terrain.b_m)
    )
    return float(loss) if scalar else loss


def building_geometry_term(terrain: Terrain) -> float:
    """Building-geometry loss of the Walfisch-Bertoni model.

    A = 5 log10((b/2)^2 + dh_rx^2) - 9 log10(b) + 20 log10(arctan(2 dh_rx / b)),
    the arc tangent expressed in degrees.
    """
    half_b = terrain.b_m / 2.0
    angle_deg = math.degrees(math.atan(2.0 * terrain.dh_rx_m / terrain.b_m))
    return (
        5.0 * math.log10(half_b * half_b + terrain.dh_rx_m * terrain.dh_rx_m)
        - 9.0 * math.log10(terrain.b_m)
        + 20.0 * math.log10(angle_deg)
    )


def wb_excess_loss(terrain: Terrain, d_km):
    """Walfisch-Bertoni excess loss over free space.

    57.1 + log10(f) + 18 log10(d) - 18 log10(dh_tx)
    - 18 log10(1 - d^2 / (17 dh_tx)) + A(terrain),
    defined only while d^2 < 17 * dh_tx.
    """
    d, scalar = _as_distance(d_km)
    _check_wb_domain(d, terrain.dh_tx_m)
    loss = (
        57.1
        + math.log10(terrain.f_mhz)
        + 18.0 * np.log10(d)
        - 18.0 * math.log10(terrain.dh_tx_m)
        - 18.0 * np.log10(1.0 - d * d / (17.0 * terrain.dh_tx_m))
        + building_geometry_term(terrain)
    )
    return float(loss) if scalar else loss


def predict_basic(kind: ModelKind, terrain: Terrain, d_km):
    """Nominal (uncalibrated) pathloss of one model variant.

    Walfisch-Ikegami variants sum free-space, roof-top-to-street, and
    multiscreen losses; W-BERT sums free-space and excess losses.
    """
    if kind is ModelKind.W_BERT:
        return free_space_loss(d_km, terrain.f_mhz) + wb_excess_loss(terrain, d_km)
    return (
        free_space_loss(d_km, terrain.f_mhz)
        + rooftop_to_street_loss(terrain, kind.family)
        + multiscreen_loss(terrain, d_km, kind.density, kind.family)
    )
