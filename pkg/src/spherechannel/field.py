"""Electric field of a point dipole near the sphere, with dB magnitudes.

E(x) = i omega mu_s G(x, x0) p, where mu_s is the permeability of the region
containing the source and p the complex current moment (A m) in the spherical
basis at the source point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .greens import TruncationSpec, scattered_dgf, total_dgf
from .scenario import DipoleSource, SphereScenario, classify
from .vswf import SphericalPoint

DB_FLOOR = -300.0


def magnitude_db(linear: float) -> float:
    """20 log10 of a linear magnitude, floored at -300 dB for zero fields."""
    if linear <= 0.0 or not math.isfinite(linear):
        return DB_FLOOR
    return max(20.0 * math.log10(linear), DB_FLOOR)


@dataclass(frozen=True)
class FieldSample:
    """Complex E-field vector (spherical basis at the receiver) plus magnitudes."""

    position: SphericalPoint
    e: tuple  # (e_r, e_theta, e_phi)
    mag_total_db: float
    mag_phi_db: float

    def e_array(self):
        return np.array(self.e, dtype=complex)


def _sample_from_vector(position, e_vec):
    e_vec = np.asarray(e_vec, dtype=complex)
    return FieldSample(
        position=position,
        e=tuple(complex(c) for c in e_vec),
        mag_total_db=magnitude_db(float(np.linalg.norm(e_vec))),
        mag_phi_db=magnitude_db(abs(e_vec[2])),
    )


def _source_prefactor(scenario: SphereScenario, source: DipoleSource) -> complex:
    medium = scenario.body if source.is_inside(scenario) else scenario.exterior
    return 1j * scenario.omega * medium.permeability


def efield(scenario: SphereScenario, source: DipoleSource, x: SphericalPoint,
           trunc: TruncationSpec = TruncationSpec()) -> FieldSample:
    """Total field: direct plus interface response (transmission alone across regions)."""
    g = total_dgf(scenario, x, source.position, trunc)
    e_vec = _source_prefactor(scenario, source) * g.apply(source.moment_array())
    return _sample_from_vector(x, e_vec)


def scattered_efield(scenario: SphereScenario, source: DipoleSource, x: SphericalPoint,
                     trunc: TruncationSpec = TruncationSpec()) -> FieldSample:
    """Interface response only: what the field-vs-azimuth sweeps plot."""
    case = classify(scenario, source.position.r, x.r)
    g = scattered_dgf(scenario, case, x, source.position, trunc)
    e_vec = _source_prefactor(scenario, source) * g.apply(source.moment_array())
    return _sample_from_vector(x, e_vec)
