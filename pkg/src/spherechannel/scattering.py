"""Per-order reflection/transmission matrices for the sphere interface.

Each polar order n carries two decoupled channels: the N (TM) channel, whose
tangential electric trace at r = d is the Riccati derivative over kd, and the
M (TE) channel, whose trace is the radial function itself.  Continuity of
tangential E and tangential H across r = d yields, per channel, a 2x2 linear
system in (reflection, transmission):

  incident h_n in the body    ->  R12 j_n inside  + T12 h_n outside
  incident j_n in the exterior -> R21 h_n outside + T21 j_n inside

The four channel scalars are packed into diagonal 2x2 matrices in the fixed
basis order [N (TM), M (TE)]; off-diagonals are identically zero because the
channels decouple on a spherical interface.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import SingularInterfaceError
from .scenario import Medium, SphereScenario
from .specfun import RadialKind, radial_table

_SINGULAR_REL_TOL = 1e-13

_TM, _TE = 0, 1


@dataclass(frozen=True)
class BoundaryMatrix:
    """2x2 complex matrix in the fixed channel basis [N (TM), M (TE)]."""

    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        if entries.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {entries.shape}")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    @property
    def tm(self):
        return complex(self.entries[_TM, _TM])

    @property
    def te(self):
        return complex(self.entries[_TE, _TE])


@dataclass(frozen=True)
class CoeffSet:
    """All four interface matrices for one polar order (m- and parity-independent)."""

    order: int
    r12: BoundaryMatrix
    t12: BoundaryMatrix
    r21: BoundaryMatrix
    t21: BoundaryMatrix


def _omega_from_wavenumber(medium: Medium, k: complex) -> float:
    """Angular frequency solving k^2 = omega^2 mu eps + i omega mu sigma (Re omega > 0)."""
    mu_eps = medium.permeability * medium.permittivity
    mu_sigma = medium.permeability * medium.conductivity
    if mu_sigma == 0.0:
        return abs(cmath.sqrt(k * k / mu_eps))
    disc = cmath.sqrt(4.0 * mu_eps * k * k - mu_sigma**2)
    omega = (-1j * mu_sigma + disc) / (2.0 * mu_eps)
    if omega.real < 0:
        omega = (-1j * mu_sigma - disc) / (2.0 * mu_eps)
    return omega.real


def _trace_vectors(kind: RadialKind, medium: Medium, nmax: int, k: complex, d: float, omega: float):
    """Tangential (E, H) traces of the N and M channels at r = d, orders 0..nmax.

    Returns arrays e_tm, h_tm, e_te, h_te.  A common factor i and the shared
    angular functions are dropped; only ratios across the interface matter.
    """
    rho = k * d
    values, _, riccati = radial_table(kind, nmax, rho)
    eps_c = medium.complex_permittivity(omega)
    e_tm = riccati / rho
    h_tm = omega * eps_c / k * values
    e_te = values.copy()
    h_te = riccati / (omega * medium.permeability * d)
    return e_tm, h_tm, e_te, h_te


def bessel_interface_matrix(
    kind: RadialKind, medium: Medium, n: int, k: complex, d: float
) -> BoundaryMatrix:
    """Per-medium interface matrix: rows are (tangential E, tangential H) traces,
    columns the [N (TM), M (TE)] channels, at r = d."""
    if d <= 0:
        raise ValueError(f"interface radius must be > 0, got {d}")
    omega = _omega_from_wavenumber(medium, k)
    e_tm, h_tm, e_te, h_te = _trace_vectors(kind, medium, n, k, d, omega)
    return BoundaryMatrix(
        np.array(
            [
                [e_tm[n], e_te[n]],
                [h_tm[n], h_te[n]],
            ]
        )
    )


def _det2(a_e, a_h, b_e, b_h):
    return a_e * b_h - a_h * b_e


def _solve_channel(v_inc_e, v_inc_h, v_refl_e, v_refl_h, v_trans_e, v_trans_h, order):
    """Solve refl*v_refl - trans*v_trans = -v_inc by Cramer's rule.

    Matched media make the reflection numerator an exact floating-point zero.
    """
    den = -_det2(v_refl_e, v_refl_h, v_trans_e, v_trans_h)
    scale = max(
        abs(v_refl_e * v_trans_h), abs(v_refl_h * v_trans_e), 1e-300
    )
    if abs(den) < _SINGULAR_REL_TOL * scale:
        raise SingularInterfaceError(order, abs(den))
    refl = _det2(v_inc_e, v_inc_h, v_trans_e, v_trans_h) / den
    trans = -_det2(v_refl_e, v_refl_h, v_inc_e, v_inc_h) / den
    return refl, trans


@lru_cache(maxsize=64)
def coefficient_table(scenario: SphereScenario, nmax: int):
    """Channel coefficient arrays indexed by order 0..nmax (order 0 rows unused).

    Returns a dict with keys 'r12_tm', 'r12_te', 't12_tm', ... mapping to
    read-only complex arrays.
    """
    d = scenario.radius
    omega = scenario.omega
    k1, k2 = scenario.k_body, scenario.k_exterior
    j1 = _trace_vectors(RadialKind.BESSEL_J, scenario.body, nmax, k1, d, omega)
    h1 = _trace_vectors(RadialKind.HANKEL1, scenario.body, nmax, k1, d, omega)
    j2 = _trace_vectors(RadialKind.BESSEL_J, scenario.exterior, nmax, k2, d, omega)
    h2 = _trace_vectors(RadialKind.HANKEL1, scenario.exterior, nmax, k2, d, omega)

    out = {
        name: np.zeros(nmax + 1, dtype=complex)
        for name in (
            "r12_tm", "r12_te", "t12_tm", "t12_te",
            "r21_tm", "r21_te", "t21_tm", "t21_te",
        )
    }
    for n in range(1, nmax + 1):
        for channel, (ej, hj) in (("tm", (0, 1)), ("te", (2, 3))):
            # source inside: incident h_n(k1 d), reflected j_n(k1 d), transmitted h_n(k2 d)
            r12, t12 = _solve_channel(
                h1[ej][n], h1[hj][n], j1[ej][n], j1[hj][n], h2[ej][n], h2[hj][n], n
            )
            # source outside: incident j_n(k2 d), reflected h_n(k2 d), transmitted j_n(k1 d)
            r21, t21 = _solve_channel(
                j2[ej][n], j2[hj][n], h2[ej][n], h2[hj][n], j1[ej][n], j1[hj][n], n
            )
            out[f"r12_{channel}"][n] = r12
            out[f"t12_{channel}"][n] = t12
            out[f"r21_{channel}"][n] = r21
            out[f"t21_{channel}"][n] = t21
    for arr in out.values():
        arr.flags.writeable = False
    return out


def coefficients(scenario: SphereScenario, n: int) -> CoeffSet:
    """Reflection/transmission matrices at polar order n for the given sphere."""
    if n < 1:
        raise ValueError(f"coefficients require n >= 1, got {n}")
    table = coefficient_table(scenario, n)

    def matrix(prefix):
        return BoundaryMatrix(
            np.diag([table[f"{prefix}_tm"][n], table[f"{prefix}_te"][n]])
        )

    return CoeffSet(
        order=n,
        r12=matrix("r12"),
        t12=matrix("t12"),
        r21=matrix("r21"),
        t21=matrix("t21"),
    )


def dump_coefficient_csv(scenario: SphereScenario, nmax: int, path):
    """Write per-order channel coefficients (magnitude and phase) to CSV."""
    table = coefficient_table(scenario, nmax)
    lines = [
        "n,channel,abs_r12,arg_r12,abs_t12,arg_t12,abs_r21,arg_r21,abs_t21,arg_t21"
    ]
    for n in range(1, nmax + 1):
        for channel in ("tm", "te"):
            vals = []
            for prefix in ("r12", "t12", "r21", "t21"):
                c = table[f"{prefix}_{channel}"][n]
                vals.extend([abs(c), cmath.phase(c)])
            lines.append(
                f"{n},{channel}," + ",".join(format(v, '.17g') for v in vals)
            )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
