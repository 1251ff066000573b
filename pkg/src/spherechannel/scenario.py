"""Media, sphere geometry, dipole sources and the four placement cases.

Conventions: time dependence exp(-i omega t), outgoing waves carry the
first-kind Hankel radial factor.  The complex permittivity of a conducting
medium is eps' + i sigma/omega, so every wavenumber lies in the closed first
quadrant (Re k >= 0, Im k >= 0: decaying outgoing waves).
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import InterfacePlacementError, ScenarioValidationError
from .vswf import SphericalPoint

INTERFACE_REL_TOL = 1e-12


@dataclass(frozen=True)
class Medium:
    """Homogeneous isotropic material (absolute permittivity/permeability)."""

    name: str
    permittivity: float  # F/m, real part
    permeability: float  # H/m
    conductivity: float = 0.0  # S/m

    def __post_init__(self):
        if self.permittivity <= 0:
            raise ScenarioValidationError(f"{self.name}: permittivity must be > 0")
        if self.permeability <= 0:
            raise ScenarioValidationError(f"{self.name}: permeability must be > 0")
        if self.conductivity < 0:
            raise ScenarioValidationError(f"{self.name}: conductivity must be >= 0")

    def complex_permittivity(self, omega: float) -> complex:
        return self.permittivity + 1j * self.conductivity / omega


def wavenumber(medium: Medium, frequency: float) -> complex:
    """k = omega sqrt(mu eps_c), branch in the closed first quadrant."""
    if frequency <= 0:
        raise ScenarioValidationError(f"frequency must be > 0, got {frequency}")
    omega = 2.0 * math.pi * frequency
    k = omega * cmath.sqrt(medium.permeability * medium.complex_permittivity(omega))
    if k.real < 0:
        k = -k
    return k


class PlacementCase(Enum):
    """Transmitter/receiver placement relative to the sphere (1 = inside, 2 = outside)."""

    CASE11 = "11"  # both inside
    CASE21 = "21"  # transmitter inside, receiver outside
    CASE12 = "12"  # transmitter outside, receiver inside
    CASE22 = "22"  # both outside

    @property
    def source_inside(self):
        return self in (PlacementCase.CASE11, PlacementCase.CASE21)

    @property
    def receiver_inside(self):
        return self in (PlacementCase.CASE11, PlacementCase.CASE12)

    @property
    def cross_region(self):
        return self in (PlacementCase.CASE21, PlacementCase.CASE12)


@dataclass(frozen=True)
class SphereScenario:
    """Sphere of one medium embedded in another, at a fixed operating frequency."""

    radius: float  # m
    body: Medium  # region 1, r < radius
    exterior: Medium  # region 2, r > radius
    frequency: float  # Hz

    def __post_init__(self):
        if self.radius <= 0:
            raise ScenarioValidationError(f"radius must be > 0, got {self.radius}")
        if self.frequency <= 0:
            raise ScenarioValidationError(f"frequency must be > 0, got {self.frequency}")

    @property
    def omega(self):
        return 2.0 * math.pi * self.frequency

    @property
    def k_body(self):
        return wavenumber(self.body, self.frequency)

    @property
    def k_exterior(self):
        return wavenumber(self.exterior, self.frequency)

    def is_inside(self, r: float) -> bool:
        self._reject_interface(r)
        return r < self.radius

    def medium_at(self, r: float) -> Medium:
        return self.body if self.is_inside(r) else self.exterior

    def wavenumber_at(self, r: float) -> complex:
        return self.k_body if self.is_inside(r) else self.k_exterior

    def _reject_interface(self, r: float):
        if abs(r - self.radius) <= INTERFACE_REL_TOL * self.radius:
            raise InterfacePlacementError(
                f"radius {r} lies on the interface r = {self.radius}"
            )


def classify(scenario: SphereScenario, source_r: float, receiver_r: float) -> PlacementCase:
    """Placement case from the two radii; rejects points on the interface."""
    src_in = scenario.is_inside(source_r)
    rx_in = scenario.is_inside(receiver_r)
    if src_in and rx_in:
        return PlacementCase.CASE11
    if src_in:
        return PlacementCase.CASE21
    if rx_in:
        return PlacementCase.CASE12
    return PlacementCase.CASE22


@dataclass(frozen=True)
class DipoleSource:
    """Point current dipole: position plus complex moment in the local spherical basis (A m)."""

    position: SphericalPoint
    moment: tuple = (0j, 0j, 1.0 + 0j)  # (r, theta, phi) components

    def __post_init__(self):
        moment = tuple(complex(c) for c in np.asarray(self.moment, dtype=complex))
        if len(moment) != 3:
            raise ScenarioValidationError("dipole moment must have 3 components")
        object.__setattr__(self, "moment", moment)

    def moment_array(self):
        return np.array(self.moment, dtype=complex)

    def is_inside(self, scenario: SphereScenario) -> bool:
        return scenario.is_inside(self.position.r)


# --- JSON scenario schema -------------------------------------------------
#
# {"radius_m": ..., "frequency_hz": ...,
#  "body": {"eps": ..., "mu": ..., "sigma": ...},
#  "exterior": {"eps": ..., "mu": ..., "sigma": ...},
#  "source": {"r": ..., "theta": ..., "phi": ..., "moment": [[re, im], [re, im], [re, im]]}}


def _require(mapping, key, where):
    if key not in mapping:
        raise ScenarioValidationError(f"{where}: missing required key '{key}'")
    return mapping[key]


def _number(mapping, key, where):
    value = _require(mapping, key, where)
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ScenarioValidationError(f"{where}.{key}: expected a number, got {value!r}")
    return float(value)


def _medium_from_dict(data, name):
    if not isinstance(data, dict):
        raise ScenarioValidationError(f"{name}: expected an object")
    return Medium(
        name=name,
        permittivity=_number(data, "eps", name),
        permeability=_number(data, "mu", name),
        conductivity=float(data.get("sigma", 0.0)),
    )


def scenario_from_dict(data):
    """Build (SphereScenario, DipoleSource) from the JSON schema dictionary."""
    if not isinstance(data, dict):
        raise ScenarioValidationError("scenario: top level must be an object")
    scenario = SphereScenario(
        radius=_number(data, "radius_m", "scenario"),
        frequency=_number(data, "frequency_hz", "scenario"),
        body=_medium_from_dict(_require(data, "body", "scenario"), "body"),
        exterior=_medium_from_dict(_require(data, "exterior", "scenario"), "exterior"),
    )
    src = _require(data, "source", "scenario")
    if not isinstance(src, dict):
        raise ScenarioValidationError("source: expected an object")
    position = SphericalPoint(
        r=_number(src, "r", "source"),
        theta=_number(src, "theta", "source"),
        phi=_number(src, "phi", "source"),
    )
    raw_moment = _require(src, "moment", "source")
    try:
        moment = tuple(complex(float(re), float(im)) for re, im in raw_moment)
    except (TypeError, ValueError) as exc:
        raise ScenarioValidationError(
            "source.moment: expected three [re, im] pairs"
        ) from exc
    if len(moment) != 3:
        raise ScenarioValidationError("source.moment: expected three [re, im] pairs")
    source = DipoleSource(position=position, moment=moment)
    # sources exactly on the interface are rejected
    scenario.is_inside(position.r)
    return scenario, source


def load_scenario(path):
    """Load and validate a scenario JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioValidationError(
                f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from exc
    return scenario_from_dict(data)
