"""Coordinate and basis transforms between Cartesian and spherical frames."""

from __future__ import annotations

import math

import numpy as np

from .vswf import SphericalPoint


def to_cartesian(point: SphericalPoint) -> np.ndarray:
    st, ct = math.sin(point.theta), math.cos(point.theta)
    sp, cp = math.sin(point.phi), math.cos(point.phi)
    return np.array([point.r * st * cp, point.r * st * sp, point.r * ct])


def from_cartesian(xyz) -> SphericalPoint:
    x, y, z = float(xyz[0]), float(xyz[1]), float(xyz[2])
    rho = math.hypot(x, y)
    r = math.hypot(rho, z)
    theta = math.atan2(rho, z)
    phi = math.atan2(y, x)
    return SphericalPoint(r=r, theta=theta, phi=phi)


def basis_matrix(point: SphericalPoint) -> np.ndarray:
    """Columns are the Cartesian components of (r_hat, theta_hat, phi_hat)."""
    st, ct = math.sin(point.theta), math.cos(point.theta)
    sp, cp = math.sin(point.phi), math.cos(point.phi)
    return np.array(
        [
            [st * cp, ct * cp, -sp],
            [st * sp, ct * sp, cp],
            [ct, -st, 0.0],
        ]
    )


def vector_to_cartesian(point: SphericalPoint, v_sph) -> np.ndarray:
    return basis_matrix(point) @ np.asarray(v_sph)


def vector_to_spherical(point: SphericalPoint, v_cart) -> np.ndarray:
    return basis_matrix(point).T @ np.asarray(v_cart)
