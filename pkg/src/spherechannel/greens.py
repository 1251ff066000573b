"""Dyadic Green's function for the dielectric sphere: direct and scattered parts.

The direct part is the homogeneous-medium expansion

    G_d(x, x0) = i k sum_{n,m,parity} C_nm [ M(x) M(x0) + N(x) N(x0) ],
    C_nm = (2 - delta_m0) (2n+1) (n-m)! / (4 pi n (n+1) (n+m)!),

with the outgoing (Hankel-1) radial kind at the larger radius and the
standing (Bessel-j) kind at the smaller.  The scattered part reuses the same
mode sum with the per-order channel coefficients of the interface: reflection
for same-region placements, transmission across regions, the prefactor always
carrying the source-region wavenumber.  The omitted delta self-term confines
every evaluation to x != x0.

All dyadics map a source-basis vector (spherical basis at x0) to a
field-basis vector (spherical basis at x); entries have units 1/m.

Each side of every dyad is scaled by sqrt(C_nm) so that intermediates stay
inside the double range even where the raw radial and angular factors would
not; the truncation order is chosen from a phi-independent per-order magnitude
bound, so it is shared by all azimuths of a given (r, theta) and cached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    CoincidentPointsError,
    InterfacePlacementError,
    SeriesConvergenceError,
)
from .geometry import to_cartesian
from .scattering import coefficient_table
from .scenario import PlacementCase, SphereScenario, classify
from .specfun import MAX_ORDER, RadialKind, legendre_table, radial_table
from .vswf import SphericalPoint

NEAR_INTERFACE_REL_TOL = 1e-6

_CONVERGED_STREAK = 3


@dataclass(frozen=True)
class TruncationSpec:
    """Series truncation: order cap, azimuthal cap (None = full) and stop tolerance.

    rel_tol = 0 disables the adaptive stop and sums every order up to the cap,
    which is how fixed-order convergence studies are run.
    """

    max_order: int = MAX_ORDER
    max_azimuthal: int | None = None
    rel_tol: float = 1e-8

    def __post_init__(self):
        if self.max_order < 1:
            raise ValueError(f"max_order must be >= 1, got {self.max_order}")
        if self.max_order > MAX_ORDER:
            raise ValueError(f"max_order {self.max_order} exceeds {MAX_ORDER}")
        if self.max_azimuthal is not None and not 0 <= self.max_azimuthal <= self.max_order:
            raise ValueError("max_azimuthal must satisfy 0 <= L <= max_order")
        if self.rel_tol < 0:
            raise ValueError("rel_tol must be >= 0")


@dataclass(frozen=True)
class Dyadic:
    """3x3 complex kernel in mixed spherical bases (rows: field point, cols: source)."""

    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        if entries.shape != (3, 3):
            raise ValueError(f"expected 3x3 entries, got {entries.shape}")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    def apply(self, vec):
        return self.entries @ np.asarray(vec, dtype=complex)

    def transposed(self):
        return Dyadic(self.entries.T.copy())

    def max_abs(self):
        return float(np.max(np.abs(self.entries)))


def wiscombe_order(size_parameter: float) -> int:
    """Starting truncation order x + 4 x^(1/3) + 2 for size parameter x."""
    x = max(float(size_parameter), 0.0)
    return int(math.ceil(x + 4.0 * x ** (1.0 / 3.0) + 2.0))


@lru_cache(maxsize=32)
def _mode_layout(order_cap: int, azimuthal_cap: int):
    """Flat (n, m) indexing up to the caps plus per-order slice boundaries."""
    n_list, m_list, starts = [], [], [0]
    for n in range(1, order_cap + 1):
        m_top = min(n, azimuthal_cap)
        n_list.extend([n] * (m_top + 1))
        m_list.extend(range(m_top + 1))
        starts.append(len(n_list))
    n_idx = np.array(n_list, dtype=np.intp)
    m_idx = np.array(m_list, dtype=np.intp)
    starts = np.array(starts, dtype=np.intp)
    # split normalization: each side of the dyad carries sqrt(C_nm)
    ln_c = (
        np.log(np.where(m_idx == 0, 1.0, 2.0))
        + np.log(2.0 * n_idx + 1.0)
        - np.log(4.0 * math.pi * n_idx * (n_idx + 1.0))
        + np.array([math.lgamma(v) for v in n_idx - m_idx + 1.0])
        - np.array([math.lgamma(v) for v in n_idx + m_idx + 1.0])
    )
    sqrt_c = np.exp(0.5 * ln_c)
    nn1 = (n_idx * (n_idx + 1)).astype(float)
    for arr in (n_idx, m_idx, starts, sqrt_c, nn1):
        arr.flags.writeable = False
    return n_idx, m_idx, starts, sqrt_c, nn1


@lru_cache(maxsize=128)
def _factor_bundle(kind: RadialKind, k: complex, r: float, theta: float,
                   order_cap: int, azimuthal_cap: int):
    """Phi-independent per-mode factors at one (r, theta), scaled by sqrt(C_nm).

    Returns (a, b, c_rad, d, e, p_m, p_n): a = pi b_n (M theta component),
    b = tau b_n (M phi), c_rad = n(n+1) b_n P / z (N radial), d = ric tau / z
    (N theta), e = ric pi / z (N phi); p_m/p_n bound the M/N component
    magnitudes uniformly over phi.
    """
    n_idx, m_idx, _, sqrt_c, nn1 = _mode_layout(order_cap, azimuthal_cap)
    z = k * r
    values, _, riccati = radial_table(kind, order_cap, z)
    p_tab, tau_tab, pim_tab = legendre_table(order_cap, theta)
    bb = values[n_idx]
    rr = riccati[n_idx] / z
    pp = p_tab[n_idx, m_idx] * sqrt_c
    tt = tau_tab[n_idx, m_idx] * sqrt_c
    qq = pim_tab[n_idx, m_idx] * sqrt_c
    a = bb * qq
    b = bb * tt
    c_rad = nn1 * bb * pp / z
    d = rr * tt
    e = rr * qq
    p_m = np.maximum(np.abs(a), np.abs(b))
    p_n = np.maximum(np.abs(c_rad), np.maximum(np.abs(d), np.abs(e)))
    out = (a, b, c_rad, d, e, p_m, p_n)
    for arr in out:
        arr.flags.writeable = False
    return out


@lru_cache(maxsize=24)
def _weighted_products(field_key, source_key, weights_key,
                       order_cap: int, azimuthal_cap: int):
    """Weighted products of field-side and source-side factors, parity pair folded.

    Summing a mode over its Even/Odd pair turns the azimuthal dependence into
    cos/sin of m(phi - phi0), leaving these per-mode products independent of
    both azimuths.  Rows are grouped by the trigonometric factor and channel:

      cos_tm: cc', cd', dc', dd', ee'     sin_tm: ce', de', ec', ed'
      cos_te: aa', bb'                    sin_te: ab', ba'

    The channel weight is folded in as (field * w) * source: the weight always
    counteracts whichever side grows beyond its order, so the products stay
    representable even where the raw side-by-side product would overflow.
    Modes whose weight underflowed to zero contribute exactly zero.
    """
    fa, fb, fc, fd, fe = _factor_bundle(*field_key, order_cap, azimuthal_cap)[:5]
    sa, sb, sc, sd, se = _factor_bundle(*source_key, order_cap, azimuthal_cap)[:5]
    w_tm, w_te = _mode_weights(weights_key, order_cap, azimuthal_cap)

    def rows(pairs, w):
        with np.errstate(over="ignore", invalid="ignore", under="ignore"):
            out = np.vstack([(f * w) * s for f, s in pairs])
        out[:, w == 0] = 0.0
        return out

    cos_tm = rows([(fc, sc), (fc, sd), (fd, sc), (fd, sd), (fe, se)], w_tm)
    sin_tm = rows([(fc, se), (fd, se), (fe, sc), (fe, sd)], w_tm)
    cos_te = rows([(fa, sa), (fb, sb)], w_te)
    sin_te = rows([(fa, sb), (fb, sa)], w_te)
    out = (cos_tm, sin_tm, cos_te, sin_te)
    for arr in out:
        if not np.all(np.isfinite(arr)):
            raise SeriesConvergenceError(order_cap, math.inf, 0.0)
        arr.flags.writeable = False
    return out


class _Weights:
    """Per-order channel weights with a hashable identity for stop-order caching."""

    __slots__ = ("key", "tm", "te")

    def __init__(self, key, tm, te):
        self.key = key
        self.tm = tm
        self.te = te


_DIRECT_WEIGHTS_CACHE = {}


def _direct_weights(order_cap):
    if order_cap not in _DIRECT_WEIGHTS_CACHE:
        ones = np.ones(order_cap + 1)
        ones.flags.writeable = False
        _DIRECT_WEIGHTS_CACHE[order_cap] = _Weights(("direct", order_cap), ones, ones)
    return _DIRECT_WEIGHTS_CACHE[order_cap]


def _scattered_weights(scenario, prefix, order_cap):
    table = coefficient_table(scenario, order_cap)
    return _Weights(
        (scenario, prefix, order_cap), table[f"{prefix}_tm"], table[f"{prefix}_te"]
    )


@lru_cache(maxsize=256)
def _stop_order(field_key, source_key, weights_key, order_cap, azimuthal_cap,
                rel_tol, n_floor):
    """Truncation order from the phi-free magnitude bound (shared across azimuths).

    Returns the summation cut; raises SeriesConvergenceError if the bound never
    satisfies the streak criterion up to the cap.
    """
    field_bundle = _factor_bundle(*field_key, order_cap, azimuthal_cap)
    source_bundle = _factor_bundle(*source_key, order_cap, azimuthal_cap)
    if weights_key[0] == "direct":
        weights = _direct_weights(order_cap)
    else:
        weights = _scattered_weights(weights_key[0], weights_key[1], order_cap)
    _, _, starts, _, _ = _mode_layout(order_cap, azimuthal_cap)

    w_tm = np.repeat(np.abs(weights.tm[1:]), np.diff(starts))
    w_te = np.repeat(np.abs(weights.te[1:]), np.diff(starts))
    # fold the (possibly tiny) weight in before the product of the two sides
    proxy = 2.0 * ((w_te * field_bundle[5]) * source_bundle[5]
                   + (w_tm * field_bundle[6]) * source_bundle[6])
    if not np.all(np.isfinite(proxy)):
        raise SeriesConvergenceError(order_cap, math.inf, rel_tol)
    per_order = np.add.reduceat(proxy, starts[:-1])
    running = np.cumsum(per_order)

    if rel_tol <= 0:
        return order_cap
    streak = 0
    for n in range(1, order_cap + 1):
        scale = running[n - 1]
        ok = scale == 0.0 or per_order[n - 1] <= rel_tol * scale
        streak = streak + 1 if ok else 0
        if n >= n_floor and streak >= _CONVERGED_STREAK:
            return n
    tail_scale = float(running[-1])
    achieved = float(per_order[-1] / tail_scale) if tail_scale > 0 else 0.0
    if achieved > rel_tol:
        raise SeriesConvergenceError(order_cap, achieved, rel_tol)
    return order_cap


@lru_cache(maxsize=64)
def _mode_weights(weights_key, order_cap: int, azimuthal_cap: int):
    """Per-mode channel weights (per-order weights repeated along the m axis)."""
    if weights_key[0] == "direct":
        weights = _direct_weights(order_cap)
    else:
        weights = _scattered_weights(weights_key[0], weights_key[1], order_cap)
    _, _, starts, _, _ = _mode_layout(order_cap, azimuthal_cap)
    counts = np.diff(starts)
    w_tm = np.repeat(weights.tm[1:], counts)
    w_te = np.repeat(weights.te[1:], counts)
    w_tm.flags.writeable = False
    w_te.flags.writeable = False
    return w_tm, w_te


def _contract(weights_key, m_idx, order_cap, azimuthal_cap, hi, products, delta_phi):
    """Weighted parity-folded mode sum below `hi` (no i*k prefactor)."""
    cos_tm, sin_tm, cos_te, sin_te = products
    w_tm, w_te = _mode_weights(weights_key, order_cap, azimuthal_cap)
    harmonics = np.arange(order_cap + 1) * delta_phi
    cos_d = np.cos(harmonics)[m_idx[:hi]]
    sin_d = np.sin(harmonics)[m_idx[:hi]]
    wc_tm = w_tm[:hi] * cos_d
    ws_tm = w_tm[:hi] * sin_d
    wc_te = w_te[:hi] * cos_d
    ws_te = w_te[:hi] * sin_d
    cc, cd, dc, dd, ee = cos_tm[:, :hi] @ wc_tm
    ce, de, ec, ed = sin_tm[:, :hi] @ ws_tm
    aa, bb = cos_te[:, :hi] @ wc_te
    ab, ba = sin_te[:, :hi] @ ws_te
    total = np.array(
        [
            [cc, cd, ce],
            [dc, dd + aa, de + ab],
            [-ec, -ed - ba, ee + bb],
        ]
    )
    if not np.all(np.isfinite(total)):
        raise SeriesConvergenceError(hi, math.inf, 0.0)
    return total


def _series_dyadic(field_point_key, source_point_key, x, x0, weights_factory,
                   trunc, n_floor, ratio):
    """Shared engine: pick the order, fold the parities, contract.

    field_point_key/source_point_key are (kind, k, r, theta); the azimuths come
    from x and x0 directly.
    """
    cap = _estimate_order(trunc, n_floor, ratio)
    while True:
        l_cap = min(_azimuthal_cap(trunc), cap)
        weights = weights_factory(cap)
        try:
            stop = _stop_order(
                field_point_key, source_point_key, weights.key, cap, l_cap,
                trunc.rel_tol, min(n_floor, cap),
            )
            _, m_idx, starts, _, _ = _mode_layout(cap, l_cap)
            hi = int(starts[stop])
            products = _pair_products(field_point_key, source_point_key, cap, l_cap)
            return _contract(
                weights.key, m_idx, cap, l_cap, hi, products, x.phi - x0.phi
            )
        except SeriesConvergenceError:
            if cap >= trunc.max_order:
                raise
            cap = trunc.max_order


def _geometric_ratio_direct(x, x0):
    lo, hi = sorted((x.r, x0.r))
    return lo / hi if hi > 0 else 0.0


def _estimate_order(trunc, n_floor, ratio):
    """Order high enough for the geometric tail to undershoot the tolerance."""
    if trunc.rel_tol <= 0:
        return trunc.max_order
    ratio = min(max(ratio, 0.0), 0.999)
    tol = trunc.rel_tol * 1e-2
    if ratio == 0.0:
        n_geo = 0
    else:
        n_geo = int(math.ceil(math.log(1.0 / tol) / -math.log(ratio)))
    return min(trunc.max_order, max(n_floor, n_geo) + 8)


def _check_coincident(x, x0):
    dx = to_cartesian(x) - to_cartesian(x0)
    scale = max(x.r, x0.r)
    if math.sqrt(float(dx @ dx)) <= 1e-12 * scale:
        raise CoincidentPointsError(f"field point {x} coincides with source {x0}")


def _azimuthal_cap(trunc):
    return trunc.max_order if trunc.max_azimuthal is None else trunc.max_azimuthal


def direct_dgf(k: complex, x: SphericalPoint, x0: SphericalPoint,
               trunc: TruncationSpec = TruncationSpec()) -> Dyadic:
    """Homogeneous-medium dyadic (delta self-term omitted); x and x0 share the medium."""
    _check_coincident(x, x0)
    if x.r <= 0 or x0.r <= 0:
        raise ValueError("series evaluation requires r > 0 at both points")
    k = complex(k)
    n_floor = min(
        trunc.max_order,
        max(wiscombe_order(abs(k) * x.r), wiscombe_order(abs(k) * x0.r)),
    )
    if x.r >= x0.r:
        field_kind, source_kind = RadialKind.HANKEL1, RadialKind.BESSEL_J
    else:
        field_kind, source_kind = RadialKind.BESSEL_J, RadialKind.HANKEL1
    total = _series_dyadic(
        (field_kind, k, x.r, x.theta),
        (source_kind, k, x0.r, x0.theta),
        x, x0, _direct_weights, trunc, n_floor,
        _geometric_ratio_direct(x, x0),
    )
    return Dyadic(1j * k * total)


_CASE_SETUP = {
    # case: (field kind, field region, source kind, source region, coefficient prefix)
    PlacementCase.CASE11: (RadialKind.BESSEL_J, "body", RadialKind.BESSEL_J, "body", "r12"),
    PlacementCase.CASE22: (RadialKind.HANKEL1, "exterior", RadialKind.HANKEL1, "exterior", "r21"),
    PlacementCase.CASE21: (RadialKind.HANKEL1, "exterior", RadialKind.BESSEL_J, "body", "t12"),
    PlacementCase.CASE12: (RadialKind.BESSEL_J, "body", RadialKind.HANKEL1, "exterior", "t21"),
}


def _reject_near_interface(scenario, point):
    if abs(point.r - scenario.radius) < NEAR_INTERFACE_REL_TOL * scenario.radius:
        raise InterfacePlacementError(
            f"evaluation at r={point.r} is within {NEAR_INTERFACE_REL_TOL:g} "
            f"relative of the interface r={scenario.radius}"
        )


def _scattered_ratio(scenario, case, x, x0):
    d = scenario.radius
    if case is PlacementCase.CASE11:
        return (x.r * x0.r) / (d * d)
    if case is PlacementCase.CASE22:
        return (d * d) / (x.r * x0.r)
    if case is PlacementCase.CASE21:
        return x0.r / x.r
    return x.r / x0.r


def scattered_dgf(scenario: SphereScenario, case: PlacementCase,
                  x: SphericalPoint, x0: SphericalPoint,
                  trunc: TruncationSpec = TruncationSpec()) -> Dyadic:
    """Interface response dyadic for the given placement case."""
    _reject_near_interface(scenario, x)
    _reject_near_interface(scenario, x0)
    expected = classify(scenario, x0.r, x.r)
    if expected is not case:
        raise ValueError(
            f"placement case {case.value} inconsistent with radii "
            f"(classified as {expected.value})"
        )
    field_kind, field_region, source_kind, source_region, prefix = _CASE_SETUP[case]
    k_field = scenario.k_body if field_region == "body" else scenario.k_exterior
    k_source = scenario.k_body if source_region == "body" else scenario.k_exterior

    d = scenario.radius
    n_floor = min(
        trunc.max_order,
        max(
            wiscombe_order(abs(scenario.k_body) * d),
            wiscombe_order(abs(scenario.k_exterior) * d),
            wiscombe_order(abs(k_field) * x.r),
            wiscombe_order(abs(k_source) * x0.r),
        ),
    )

    def weights_factory(cap):
        return _scattered_weights(scenario, prefix, cap)

    total = _series_dyadic(
        (field_kind, k_field, x.r, x.theta),
        (source_kind, k_source, x0.r, x0.theta),
        x, x0, weights_factory, trunc, n_floor,
        _scattered_ratio(scenario, case, x, x0),
    )
    return Dyadic(1j * k_source * total)


def total_dgf(scenario: SphereScenario, x: SphericalPoint, x0: SphericalPoint,
              trunc: TruncationSpec = TruncationSpec()) -> Dyadic:
    """Scattering superposition: direct plus scattered in the same region,
    transmission alone across regions."""
    case = classify(scenario, x0.r, x.r)
    scattered = scattered_dgf(scenario, case, x, x0, trunc)
    if case.cross_region:
        return scattered
    k = scenario.k_body if case.source_inside else scenario.k_exterior
    direct = direct_dgf(k, x, x0, trunc)
    return Dyadic(direct.entries + scattered.entries)
