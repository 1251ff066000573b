"""Independent brute-force references used only by tests and the verify suite.

Nothing here shares code paths with the production modules: radial functions
come from arbitrary-precision series / mpmath half-integer Bessel functions,
Legendre values from the Rodrigues formula with exact integer coefficients,
derivatives from finite differences, and the interface system from a dense
4x4 solve in extended precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp
import numpy as np

from .errors import CoincidentPointsError
from .geometry import basis_matrix, to_cartesian
from .greens import Dyadic
from .scenario import SphereScenario
from .specfun import RadialKind
from .vswf import SphericalPoint


# --- arbitrary-precision radial references ---------------------------------


def series_bessel(n: int, z: complex, terms: int = 60) -> complex:
    """Ascending power series of j_n(z) in extended precision.

    Raises if `terms` is too few for the remainder bound to drop below
    1e-14 relative.
    """
    if n < 0:
        raise ValueError("order must be >= 0")
    z = complex(z)
    with mp.workdps(30 + int(0.5 * abs(z))):
        zz = mp.mpc(z)
        half_sq = zz * zz / 2
        term = mp.mpc(1)
        for k in range(1, n + 1):  # z^n / (2n+1)!!
            term *= zz / (2 * k + 1)
        total = term
        for k in range(1, terms):
            term *= -half_sq / (k * (2 * n + 2 * k + 1))
            total += term
        # geometric remainder bound from the first omitted term
        next_term = abs(term) * abs(half_sq) / (terms * (2 * n + 2 * terms + 1))
        q = abs(half_sq) / (terms * (2 * n + 2 * terms + 1))
        bound = next_term / (1 - q) if q < 1 else mp.inf
        if not total == 0 and bound > 1e-14 * abs(total):
            raise ValueError(
                f"series tail bound {float(bound):.3e} exceeds 1e-14 relative "
                f"after {terms} terms; increase `terms`"
            )
        return complex(total)


def _mp_spherical(kind: RadialKind, n: int, z: complex, dps: int = 35):
    zz = mp.mpc(z)
    factor = mp.sqrt(mp.pi / 2) / mp.sqrt(zz)
    if kind is RadialKind.BESSEL_J:
        return factor * mp.besselj(n + mp.mpf(1) / 2, zz)
    if kind is RadialKind.HANKEL1:
        return factor * mp.hankel1(n + mp.mpf(1) / 2, zz)
    return factor * mp.hankel2(n + mp.mpf(1) / 2, zz)


def bessel_reference(kind: RadialKind, n: int, z: complex) -> complex:
    """High-precision reference value of the spherical radial function."""
    with mp.workdps(35 + int(0.5 * abs(z))):
        return complex(_mp_spherical(kind, n, complex(z)))


def bessel_reference_derivative(kind: RadialKind, n: int, z: complex) -> complex:
    """d/dz via b_n' = b_{n-1} - (n+1)/z b_n on reference values."""
    with mp.workdps(35 + int(0.5 * abs(z))):
        zz = mp.mpc(z)
        bn = _mp_spherical(kind, n, complex(z))
        if n == 0:
            b_next = _mp_spherical(kind, 1, complex(z))
            return complex(-b_next)
        b_prev = _mp_spherical(kind, n - 1, complex(z))
        return complex(b_prev - (n + 1) / zz * bn)


# --- Rodrigues-formula Legendre reference -----------------------------------


@lru_cache(maxsize=4096)
def _rodrigues_poly(n: int, m: int):
    """Integer coefficients of d^{n+m}/dx^{n+m} (x^2-1)^n, ascending powers."""
    order = n + m
    coeffs = {}
    for j in range(n + 1):
        c = math.comb(n, j) * (-1) ** (n - j)
        power = 2 * j
        if power >= order:
            fall = 1
            for t in range(order):
                fall *= power - t
            coeffs[power - order] = coeffs.get(power - order, 0) + c * fall
    top = max(coeffs) if coeffs else 0
    return tuple(coeffs.get(p, 0) for p in range(top + 1))


def legendre_rodrigues(n: int, m: int, x: float) -> float:
    """P_n^m(x) without Condon-Shortley phase, from the Rodrigues formula."""
    if not 0 <= m <= n:
        raise ValueError("require 0 <= m <= n")
    coeffs = _rodrigues_poly(n, m)
    with mp.workdps(40):
        xx = mp.mpf(x)
        poly = mp.mpf(0)
        for p, c in enumerate(coeffs):
            if c:
                poly += c * xx**p
        value = (1 - xx * xx) ** (mp.mpf(m) / 2) * poly / (2**n * mp.factorial(n))
        return float(value)


def legendre_rodrigues_theta_derivative(n: int, m: int, theta: float) -> float:
    """d/dtheta of P_n^m(cos theta) from the differentiated Rodrigues polynomial."""
    coeffs = _rodrigues_poly(n, m)
    with mp.workdps(40):
        th = mp.mpf(theta)
        x, s = mp.cos(th), mp.sin(th)
        poly = mp.mpf(0)
        dpoly = mp.mpf(0)
        for p, c in enumerate(coeffs):
            if c:
                poly += c * x**p
                if p >= 1:
                    dpoly += c * p * x ** (p - 1)
        norm = 2**n * mp.factorial(n)
        # d/dtheta [ sin^m(theta) Q(cos theta) ] / norm
        value = (
            m * s ** (m - 1) * x * poly - s ** (m + 1) * dpoly
        ) / norm if m >= 1 else -s * dpoly / norm
        return float(value)


# --- finite-difference stencils ---------------------------------------------


@dataclass(frozen=True)
class FDStencil:
    """Central-difference stencil; `step` is relative to the local length scale."""

    step: float = 1e-5
    order: int = 4

    def __post_init__(self):
        if self.order not in (2, 4):
            raise ValueError("stencil order must be 2 or 4")
        if self.step <= 0:
            raise ValueError("stencil step must be > 0")

    def check_wavenumber(self, k: complex, scale: float):
        if abs(k) * self.step * scale >= 0.05:
            raise ValueError(
                f"stencil step {self.step * scale:g} too coarse for |k|={abs(k):g}"
            )


def _axis_derivative(f, xyz, axis, h, order):
    e = np.zeros(3)
    e[axis] = 1.0
    if order == 2:
        return (f(xyz + h * e) - f(xyz - h * e)) / (2 * h)
    return (
        -f(xyz + 2 * h * e) + 8 * f(xyz + h * e) - 8 * f(xyz - h * e) + f(xyz - 2 * h * e)
    ) / (12 * h)


def fd_gradient(f, xyz, h, stencil: FDStencil = FDStencil()):
    """Gradient of a scalar function of Cartesian position."""
    return np.array(
        [_axis_derivative(f, np.asarray(xyz, float), a, h, stencil.order) for a in range(3)]
    )


def fd_jacobian(field, xyz, h, stencil: FDStencil = FDStencil()):
    """J[i, j] = d field_i / d x_j for a 3-vector Cartesian field."""
    cols = [
        _axis_derivative(field, np.asarray(xyz, float), a, h, stencil.order)
        for a in range(3)
    ]
    return np.stack(cols, axis=1)


def fd_curl(field, xyz, h, stencil: FDStencil = FDStencil()):
    jac = fd_jacobian(field, xyz, h, stencil)
    return np.array(
        [jac[2, 1] - jac[1, 2], jac[0, 2] - jac[2, 0], jac[1, 0] - jac[0, 1]]
    )


def fd_divergence(field, xyz, h, stencil: FDStencil = FDStencil()):
    jac = fd_jacobian(field, xyz, h, stencil)
    return jac[0, 0] + jac[1, 1] + jac[2, 2]


def fd_hessian(f, xyz, h, stencil: FDStencil = FDStencil()):
    """Nested first-derivative Hessian of a scalar Cartesian function."""

    def partial(axis):
        return lambda q: _axis_derivative(f, q, axis, h, stencil.order)

    return np.stack(
        [fd_gradient(partial(a), xyz, h, stencil) for a in range(3)], axis=0
    )


def spherical_field_to_cartesian(f_sph):
    """Wrap a SphericalPoint -> spherical-basis-vector callable as a Cartesian field."""

    def field(xyz):
        point = _point_from_cartesian(xyz)
        return basis_matrix(point) @ np.asarray(f_sph(point), dtype=complex)

    return field


def _point_from_cartesian(xyz):
    x, y, z = float(xyz[0]), float(xyz[1]), float(xyz[2])
    rho = math.hypot(x, y)
    return SphericalPoint(r=math.hypot(rho, z), theta=math.atan2(rho, z), phi=math.atan2(y, x))


# --- free-space references ----------------------------------------------------


def _separation(x: SphericalPoint, x0: SphericalPoint):
    dvec = to_cartesian(x) - to_cartesian(x0)
    dist = float(np.linalg.norm(dvec))
    if dist <= 1e-12 * max(x.r, x0.r, 1e-30):
        raise CoincidentPointsError("free-space kernel requested at coincident points")
    return dvec, dist


def free_space_dyadic(k: complex, x: SphericalPoint, x0: SphericalPoint,
                      stencil: FDStencil = FDStencil(step=2e-4)) -> Dyadic:
    """(I + grad grad / k^2) e^{ikR}/(4 pi R) with the Hessian taken by finite
    differences; returned in the mixed spherical bases used everywhere else."""
    _, dist = _separation(x, x0)
    k = complex(k)
    source_xyz = to_cartesian(x0)

    def g(xyz):
        r = np.linalg.norm(np.asarray(xyz) - source_xyz)
        return np.exp(1j * k * r) / (4 * np.pi * r)

    h = stencil.step * dist
    stencil.check_wavenumber(k, dist)
    hess = fd_hessian(g, to_cartesian(x), h, stencil)
    g_cart = g(to_cartesian(x)) * np.eye(3) + hess / k**2
    return Dyadic(basis_matrix(x).T @ g_cart @ basis_matrix(x0))


def free_space_dyadic_closed(k: complex, x: SphericalPoint, x0: SphericalPoint) -> Dyadic:
    """Analytic closed form of the same kernel (validates the FD variant)."""
    dvec, dist = _separation(x, x0)
    k = complex(k)
    rhat = dvec / dist
    kr = k * dist
    g = np.exp(1j * kr) / (4 * np.pi * dist)
    g_cart = g * (
        (1 + 1j / kr - 1 / kr**2) * np.eye(3)
        + (-1 - 3j / kr + 3 / kr**2) * np.outer(rhat, rhat)
    )
    return Dyadic(basis_matrix(x).T @ g_cart @ basis_matrix(x0))


def hertzian_dipole_field(k: complex, omega: float, mu: float,
                          moment_sph, x: SphericalPoint, x0: SphericalPoint):
    """Closed-form E of a point current dipole in a homogeneous medium.

    `moment_sph` is the current moment (A m) in the spherical basis at x0;
    the result is in the spherical basis at x.
    """
    dvec, dist = _separation(x, x0)
    k = complex(k)
    rhat = dvec / dist
    p_cart = basis_matrix(x0) @ np.asarray(moment_sph, dtype=complex)
    kr = k * dist
    g = np.exp(1j * kr) / (4 * np.pi * dist)
    e_cart = (1j * omega * mu) * g * (
        (1 + 1j / kr - 1 / kr**2) * p_cart
        + (-1 - 3j / kr + 3 / kr**2) * (rhat @ p_cart) * rhat
    )
    return basis_matrix(x).T @ e_cart


# --- dense interface solver (extended precision) ------------------------------


def _mp_traces(kind: RadialKind, n, z, omega, eps_c, mu, d):
    b = _mp_spherical(kind, n, z)
    b_prev = _mp_spherical(kind, n - 1, z)
    zz = mp.mpc(z)
    ric = zz * b_prev - n * b  # d(z b_n)/dz via the lowering relation
    k = zz / d
    e_tm = ric / zz
    h_tm = omega * eps_c / k * b
    e_te = b
    h_te = ric / (omega * mu * d)
    return e_tm, h_tm, e_te, h_te


def dense_interface_coefficients(scenario: SphereScenario, n: int):
    """Independent 4x4 continuity solve; returns dict of channel coefficients."""
    with mp.workdps(40):
        omega = mp.mpf(scenario.omega)
        d = mp.mpf(scenario.radius)
        out = {}
        media = {
            "1": (scenario.body, mp.mpc(scenario.k_body)),
            "2": (scenario.exterior, mp.mpc(scenario.k_exterior)),
        }
        traces = {}
        for tag, (medium, k) in media.items():
            eps_c = mp.mpc(medium.complex_permittivity(scenario.omega))
            mu = mp.mpf(medium.permeability)
            for kind, kind_tag in ((RadialKind.BESSEL_J, "j"), (RadialKind.HANKEL1, "h")):
                traces[kind_tag + tag] = _mp_traces(kind, n, k * d, omega, eps_c, mu, d)

        def solve(inc, refl, trans):
            # rows: TM-E, TM-H, TE-E, TE-H; unknowns [R_tm, R_te, T_tm, T_te]
            a = mp.zeros(4, 4)
            rhs = mp.matrix(4, 1)
            v_i, v_r, v_t = traces[inc], traces[refl], traces[trans]
            for row, comp in enumerate((0, 1, 2, 3)):
                unk = 0 if comp < 2 else 1
                a[row, unk] = v_r[comp]
                a[row, unk + 2] = -v_t[comp]
                rhs[row] = -v_i[comp]
            sol = mp.lu_solve(a, rhs)
            return [complex(sol[i]) for i in range(4)]

        r_tm, r_te, t_tm, t_te = solve("h1", "j1", "h2")
        out.update(r12_tm=r_tm, r12_te=r_te, t12_tm=t_tm, t12_te=t_te)
        r_tm, r_te, t_tm, t_te = solve("j2", "h2", "j1")
        out.update(r21_tm=r_tm, r21_te=r_te, t21_tm=t_tm, t21_te=t_te)
        return out


# --- interface continuity residual --------------------------------------------


@dataclass(frozen=True)
class InterfaceResidual:
    """Worst-case relative tangential mismatch across r = d."""

    e: float
    h: float


def _extrapolate_to_zero(deltas, samples):
    """Lagrange extrapolation of vector samples taken at offsets `deltas` to 0."""
    deltas = np.asarray(deltas, float)
    weights = np.empty(len(deltas))
    for i, di in enumerate(deltas):
        w = 1.0
        for j, dj in enumerate(deltas):
            if i != j:
                w *= dj / (dj - di)
        weights[i] = w
    return np.tensordot(weights, np.asarray(samples), axes=(0, 0))


def interface_residual(scenario: SphereScenario, field_inside, field_outside,
                       sample_count: int = 16, seed: int = 71,
                       stencil: FDStencil = FDStencil()) -> InterfaceResidual:
    """Tangential E/H mismatch across the interface, extrapolated to r = d.

    `field_inside` / `field_outside` map a SphericalPoint to the complex E
    vector (spherical basis) valid on their side; H comes from an FD curl.
    """
    rng = np.random.default_rng(seed)
    d = scenario.radius
    omega = scenario.omega
    deltas = np.array([2e-4, 4e-4, 6e-4, 8e-4])
    worst_e, worst_h = 0.0, 0.0

    curl_in = spherical_field_to_cartesian(field_inside)
    curl_out = spherical_field_to_cartesian(field_outside)

    for _ in range(sample_count):
        theta = math.acos(rng.uniform(-0.92, 0.92))
        phi = rng.uniform(0.0, 2.0 * math.pi)

        def h_field(fn_cart, point, mu):
            h_step = stencil.step * point.r
            stencil.check_wavenumber(scenario.k_body, point.r)
            return fd_curl(fn_cart, to_cartesian(point), h_step, stencil) / (
                1j * omega * mu
            )

        e_out_samples, e_in_samples, h_out_samples, h_in_samples = [], [], [], []
        for delta in deltas:
            p_out = SphericalPoint(d * (1 + delta), theta, phi)
            p_in = SphericalPoint(d * (1 - delta), theta, phi)
            e_out_samples.append(np.asarray(field_outside(p_out), dtype=complex))
            e_in_samples.append(np.asarray(field_inside(p_in), dtype=complex))
            h_out_samples.append(
                basis_matrix(p_out).T
                @ h_field(curl_out, p_out, scenario.exterior.permeability)
            )
            h_in_samples.append(
                basis_matrix(p_in).T
                @ h_field(curl_in, p_in, scenario.body.permeability)
            )

        e_out = _extrapolate_to_zero(deltas, e_out_samples)
        e_in = _extrapolate_to_zero(-deltas, e_in_samples)
        h_out = _extrapolate_to_zero(deltas, h_out_samples)
        h_in = _extrapolate_to_zero(-deltas, h_in_samples)

        e_scale = max(np.linalg.norm(e_out), np.linalg.norm(e_in), 1e-300)
        h_scale = max(np.linalg.norm(h_out), np.linalg.norm(h_in), 1e-300)
        worst_e = max(worst_e, float(np.abs(e_out[1:] - e_in[1:]).max() / e_scale))
        worst_h = max(worst_h, float(np.abs(h_out[1:] - h_in[1:]).max() / h_scale))

    return InterfaceResidual(e=worst_e, h=worst_h)
