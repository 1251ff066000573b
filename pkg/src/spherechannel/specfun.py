"""Complex-argument spherical Bessel/Hankel functions and associated Legendre functions.

All radial functions are evaluated by recurrence for every order 0..n in one
pass: upward for the Hankel kinds (their dominant y_n part makes the upward
direction stable), downward Miller-style with closed-form normalization for
j_n (upward is unstable once n exceeds |z|).  Legendre functions use the
standard forward recurrences on P_n^m, on m P_n^m/sin(theta) and on
dP_n^m/dtheta, arranged so that the polar angles theta = 0, pi are reached
through their analytic limits rather than a division by sin(theta).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import RadialDomainError, RecurrenceOverflowError

MAX_ORDER = 120

_RESCALE_THRESHOLD = 1e250


class RadialKind(Enum):
    """Radial dependence of a spherical wave: standing, outgoing or incoming."""

    BESSEL_J = "j"
    HANKEL1 = "h1"
    HANKEL2 = "h2"


@dataclass(frozen=True)
class RadialEval:
    """Value, d/dz derivative and Riccati derivative d(z b_n)/dz of one radial function."""

    value: complex
    derivative: complex
    riccati_derivative: complex


@dataclass(frozen=True)
class LegendreEval:
    """P_n^m(cos theta) together with d/dtheta and the pole-safe m P_n^m / sin(theta)."""

    value: float
    theta_derivative: float
    over_sin_theta: float


def _check_order(n):
    if n < 0:
        raise ValueError(f"order must be >= 0, got {n}")
    if n > MAX_ORDER:
        raise ValueError(f"order {n} exceeds the configured maximum {MAX_ORDER}")


def _bessel_j_zero_arg(nmax):
    values = np.zeros(nmax + 1, dtype=complex)
    values[0] = 1.0
    derivs = np.zeros(nmax + 1, dtype=complex)
    if nmax >= 1:
        derivs[1] = 1.0 / 3.0
    # d(z j_n)/dz at z=0 equals j_n(0)
    riccati = values.copy()
    return values, derivs, riccati


def _bessel_j_table(nmax, z):
    """j_0..j_nmax by downward recurrence, normalized against closed forms."""
    if z == 0:
        return _bessel_j_zero_arg(nmax)
    # start order high enough that the downward iterates converge to j_n
    start = nmax + int(math.ceil(8.0 * math.sqrt(nmax + 1))) + max(8, int(abs(z) ** 0.5))
    raw = np.empty(start + 2, dtype=complex)
    raw[start + 1] = 0.0
    raw[start] = 1e-280
    for n in range(start, 0, -1):
        raw[n - 1] = (2 * n + 1) / z * raw[n] - raw[n + 1]
        mag = abs(raw[n - 1])
        if mag > _RESCALE_THRESHOLD:
            raw[n - 1 :] /= mag
    j0 = cmath.sin(z) / z
    j1 = cmath.sin(z) / z**2 - cmath.cos(z) / z
    # normalize on whichever seed is better conditioned (sin z may vanish)
    if abs(raw[0]) >= abs(raw[1]):
        scale = j0 / raw[0]
    else:
        scale = j1 / raw[1]
    values = raw[: nmax + 1] * scale
    if not np.all(np.isfinite(values)):
        bad = int(np.argmax(~np.isfinite(values)))
        raise RecurrenceOverflowError(bad, z)
    return values, _derivatives(values, z, nmax), None


def _hankel_table(nmax, z, sign):
    """h_n^(1) (sign=+1) or h_n^(2) (sign=-1) by upward recurrence from closed forms."""
    if z == 0:
        raise RadialDomainError("Hankel functions are singular at z = 0")
    e = cmath.exp(sign * 1j * z)
    values = np.empty(nmax + 1, dtype=complex)
    values[0] = -sign * 1j * e / z
    if nmax >= 1:
        values[1] = e * (-1.0 / z - sign * 1j / z**2)
    for n in range(1, nmax):
        values[n + 1] = (2 * n + 1) / z * values[n] - values[n - 1]
        if not (
            np.isfinite(values[n + 1].real) and np.isfinite(values[n + 1].imag)
        ):
            raise RecurrenceOverflowError(n + 1, z)
    return values, _derivatives(values, z, nmax), None


def _derivatives(values, z, nmax):
    """b_n'(z) = b_{n-1} - (n+1)/z b_n, with b_0' = -b_1 (valid for all kinds)."""
    # tables are always built to nmax >= 1, so values[1] exists
    derivs = np.empty(nmax + 1, dtype=complex)
    derivs[0] = -values[1]
    ns = np.arange(1, nmax + 1)
    derivs[1:] = values[:-1] - (ns + 1) / z * values[1:]
    return derivs


@lru_cache(maxsize=512)
def radial_table(kind: RadialKind, nmax: int, z: complex):
    """Arrays (values, derivatives, riccati_derivatives) for orders 0..nmax at z."""
    _check_order(nmax)
    nmax_eff = max(nmax, 1)
    if kind is RadialKind.BESSEL_J:
        values, derivs, _ = _bessel_j_table(nmax_eff, complex(z))
    elif kind is RadialKind.HANKEL1:
        values, derivs, _ = _hankel_table(nmax_eff, complex(z), +1)
    else:
        values, derivs, _ = _hankel_table(nmax_eff, complex(z), -1)
    riccati = values + z * derivs if z != 0 else values.copy()
    out = (values[: nmax + 1], derivs[: nmax + 1], riccati[: nmax + 1])
    for arr in out:
        arr.flags.writeable = False
    return out


def spherical_bessel(kind: RadialKind, n: int, z: complex) -> RadialEval:
    """Spherical radial function of the given kind and order at complex z."""
    _check_order(n)
    values, derivs, riccati = radial_table(kind, n, complex(z))
    return RadialEval(
        value=complex(values[n]),
        derivative=complex(derivs[n]),
        riccati_derivative=complex(riccati[n]),
    )


def wronskian_check(n: int, z: complex) -> complex:
    """j_n h_n' - j_n' h_n; identically i/z**2 for exact functions."""
    if z == 0:
        raise RadialDomainError("Wronskian undefined at z = 0")
    j = spherical_bessel(RadialKind.BESSEL_J, n, z)
    h = spherical_bessel(RadialKind.HANKEL1, n, z)
    return j.value * h.derivative - j.derivative * h.value


def _double_factorial_odd(m):
    # (2m-1)!! as float; exact up to the double range (m <= 150)
    out = 1.0
    for k in range(1, 2 * m, 2):
        out *= k
    return out


@lru_cache(maxsize=512)
def legendre_table(nmax: int, theta: float):
    """Tables P[n,m], dP/dtheta[n,m] and m P/sin(theta)[n,m] for 0 <= m <= n <= nmax.

    Entries with m > n are zero.  The over-sin column is built by its own
    recurrence so the polar angles are exact limits, never 0/0.
    """
    _check_order(nmax)
    x = math.cos(theta)
    s = math.sin(theta)
    size = nmax + 1
    p = np.zeros((size, size))
    pi_m = np.zeros((size, size))
    tau = np.zeros((size, size))

    for m in range(size):
        dfac = _double_factorial_odd(m)
        p[m, m] = dfac * s**m
        if m >= 1:
            pi_m[m, m] = m * dfac * s ** (m - 1)
        if m + 1 <= nmax:
            p[m + 1, m] = (2 * m + 1) * x * p[m, m]
            pi_m[m + 1, m] = (2 * m + 1) * x * pi_m[m, m]
        for n in range(m + 2, size):
            c1 = (2 * n - 1) * x
            c2 = n + m - 1
            denom = n - m
            p[n, m] = (c1 * p[n - 1, m] - c2 * p[n - 2, m]) / denom
            pi_m[n, m] = (c1 * pi_m[n - 1, m] - c2 * pi_m[n - 2, m]) / denom

    # dP_n^0/dtheta = -P_n^1 (no Condon-Shortley phase anywhere)
    if nmax >= 1:
        tau[1:, 0] = -p[1:, 1]
    for m in range(1, size):
        for n in range(m, size):
            prev = pi_m[n - 1, m] if n - 1 >= m else 0.0
            tau[n, m] = (n * x * pi_m[n, m] - (n + m) * prev) / m

    for arr in (p, tau, pi_m):
        arr.flags.writeable = False
    return p, tau, pi_m


def assoc_legendre(n: int, m: int, theta: float) -> LegendreEval:
    """P_n^m(cos theta) with theta-derivative and pole-safe m P_n^m/sin(theta)."""
    _check_order(n)
    if m < 0 or m > n:
        raise ValueError(f"require 0 <= m <= n, got n={n}, m={m}")
    p, tau, pi_m = legendre_table(n, float(theta))
    return LegendreEval(
        value=float(p[n, m]),
        theta_derivative=float(tau[n, m]),
        over_sin_theta=float(pi_m[n, m]),
    )
