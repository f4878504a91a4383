"""Randomized-input builders shared by the test modules."""

import math

import numpy as np

from walfcal import MeasurementSet, ModelKind, Terrain

ALL_KINDS = tuple(ModelKind)
WI_KINDS = tuple(kind for kind in ModelKind if kind is not ModelKind.W_BERT)


def random_terrain(rng, f_lo=150.0, f_hi=2000.0) -> Terrain:
    return Terrain(
        f_mhz=rng.uniform(f_lo, f_hi),
        w_m=rng.uniform(5.0, 40.0),
        b_m=rng.uniform(10.0, 60.0),
        phi_deg=rng.uniform(0.0, 55.0),
        dh_rx_m=rng.uniform(2.0, 20.0),
        dh_tx_m=rng.uniform(4.0, 40.0),
    )


def random_distances(rng, terrain, n, margin=0.9) -> np.ndarray:
    # stay inside the Walfisch-Bertoni curvature domain with headroom
    d_max = margin * math.sqrt(17.0 * terrain.dh_tx_m)
    return rng.uniform(0.1, d_max, n)


def random_campaign(rng, n_lo=30, n_hi=300):
    """Random terrain plus noisy smooth-trend measurements, WB-domain safe."""
    terrain = random_terrain(rng)
    n = int(rng.integers(n_lo, n_hi + 1))
    d = random_distances(rng, terrain, n)
    trend = rng.uniform(100.0, 140.0) + rng.uniform(20.0, 40.0) * np.log10(d)
    noisy = trend + rng.normal(0.0, rng.uniform(0.5, 6.0), size=n)
    return terrain, MeasurementSet(d, np.maximum(noisy, 1.0))
