"""Scalar generating function and vector spherical wave functions L, M, N.

The generating scalar is psi = Z_n(kr) P_n^m(cos theta) {cos|sin}(m phi).
L is its gradient; M = curl(r psi r_hat) is transverse; N = curl M / k.
Components are returned in the local spherical unit basis (r, theta, phi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .specfun import RadialKind, legendre_table, radial_table

TWO_PI = 2.0 * math.pi


class Parity(Enum):
    """Azimuthal factor: Even modes carry cos(m phi), Odd modes sin(m phi)."""

    EVEN = "even"
    ODD = "odd"


@dataclass(frozen=True)
class ModeIndex:
    n: int
    m: int
    parity: Parity

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"polar order must be >= 0, got n={self.n}")
        if not 0 <= self.m <= self.n:
            raise ValueError(f"require 0 <= m <= n, got n={self.n}, m={self.m}")


@dataclass(frozen=True)
class SphericalPoint:
    """Point (r, theta, phi); phi is normalized into [0, 2 pi) on construction."""

    r: float
    theta: float
    phi: float

    def __post_init__(self):
        if self.r < 0:
            raise ValueError(f"radius must be >= 0, got {self.r}")
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        object.__setattr__(self, "phi", self.phi % TWO_PI)


@dataclass(frozen=True)
class VectorFieldValue:
    e_r: complex
    e_theta: complex
    e_phi: complex

    def as_array(self):
        return np.array([self.e_r, self.e_theta, self.e_phi], dtype=complex)


def _angular(mode: ModeIndex, theta: float):
    p, tau, pi_m = legendre_table(mode.n, theta)
    return p[mode.n, mode.m], tau[mode.n, mode.m], pi_m[mode.n, mode.m]


def _azimuthal(mode: ModeIndex, phi: float):
    c = math.cos(mode.m * phi)
    s = math.sin(mode.m * phi)
    return c, s


def _radial(mode: ModeIndex, kind: RadialKind, k: complex, r: float):
    values, derivs, riccati = radial_table(kind, mode.n, complex(k) * r)
    return values[mode.n], derivs[mode.n], riccati[mode.n]


def scalar_psi(mode: ModeIndex, kind: RadialKind, k: complex, x: SphericalPoint) -> complex:
    """Z_n(kr) P_n^m(cos theta) {cos|sin}(m phi)."""
    b, _, _ = _radial(mode, kind, k, x.r)
    p, _, _ = _angular(mode, x.theta)
    c, s = _azimuthal(mode, x.phi)
    return complex(b * p * (c if mode.parity is Parity.EVEN else s))


def vector_L(mode: ModeIndex, kind: RadialKind, k: complex, x: SphericalPoint) -> VectorFieldValue:
    """Gradient of the generating scalar, in the spherical basis."""
    if x.r <= 0:
        raise ValueError("vector wave functions require r > 0")
    b, db, _ = _radial(mode, kind, k, x.r)
    p, tau, pi_m = _angular(mode, x.theta)
    c, s = _azimuthal(mode, x.phi)
    if mode.parity is Parity.EVEN:
        az, daz = c, -s  # d/dphi of cos(m phi) carries -m sin
    else:
        az, daz = s, c
    return VectorFieldValue(
        e_r=k * db * p * az,
        e_theta=(b / x.r) * tau * az,
        e_phi=(b / x.r) * pi_m * daz,
    )


def vector_M(mode: ModeIndex, kind: RadialKind, k: complex, x: SphericalPoint) -> VectorFieldValue:
    """curl(r psi r_hat): transverse standing/traveling harmonic (TE channel)."""
    _require_wave_mode(mode, x)
    b, _, _ = _radial(mode, kind, k, x.r)
    p, tau, pi_m = _angular(mode, x.theta)
    c, s = _azimuthal(mode, x.phi)
    if mode.parity is Parity.EVEN:
        return VectorFieldValue(0.0, -b * pi_m * s, -b * tau * c)
    return VectorFieldValue(0.0, b * pi_m * c, -b * tau * s)


def vector_N(mode: ModeIndex, kind: RadialKind, k: complex, x: SphericalPoint) -> VectorFieldValue:
    """curl(M)/k: the companion harmonic carrying the radial component (TM channel)."""
    _require_wave_mode(mode, x)
    b, _, ric = _radial(mode, kind, k, x.r)
    p, tau, pi_m = _angular(mode, x.theta)
    c, s = _azimuthal(mode, x.phi)
    z = k * x.r
    radial = mode.n * (mode.n + 1) / z * b * p
    if mode.parity is Parity.EVEN:
        return VectorFieldValue(radial * c, ric / z * tau * c, -ric / z * pi_m * s)
    return VectorFieldValue(radial * s, ric / z * tau * s, ric / z * pi_m * c)


def _require_wave_mode(mode: ModeIndex, x: SphericalPoint):
    if mode.n < 1:
        raise ValueError("M and N vanish identically for n = 0; require n >= 1")
    if x.r <= 0:
        raise ValueError("vector wave functions require r > 0")
