"""Self-verification: the core invariants runnable from the command line.

Each check reports a measured residual against its tolerance.  Quick mode
uses reduced grids and finishes in well under a minute; Full mode enlarges
the sample counts.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .field import efield
from .geometry import basis_matrix, to_cartesian
from .greens import TruncationSpec, direct_dgf, scattered_dgf, total_dgf
from .oracle import (
    FDStencil,
    bessel_reference,
    fd_curl,
    free_space_dyadic_closed,
    interface_residual,
    spherical_field_to_cartesian,
)
from .scenario import DipoleSource, Medium, PlacementCase, SphereScenario, classify
from .specfun import RadialKind, wronskian_check
from .vswf import ModeIndex, Parity, SphericalPoint, vector_M, vector_N


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float
    passed: bool
    seconds: float


def reference_scenario() -> SphereScenario:
    """15 cm sphere of mean-tissue dielectric in air at 1 GHz."""
    return SphereScenario(
        radius=0.15,
        body=Medium("body", permittivity=2.563e-10, permeability=1.256e-6),
        exterior=Medium("air", permittivity=8.8542e-12, permeability=1.256e-6),
        frequency=1.0e9,
    )


def matched_scenario() -> SphereScenario:
    air = Medium("air", permittivity=8.8542e-12, permeability=1.256e-6)
    return SphereScenario(radius=0.15, body=air, exterior=air, frequency=1.0e9)


def _timed(fn):
    start = time.perf_counter()
    residual = fn()
    return residual, time.perf_counter() - start


def _check_wronskian(full):
    rng = np.random.default_rng(11)
    count = 120 if full else 40
    worst = 0.0
    for _ in range(count):
        n = int(rng.integers(0, 31))
        mag = math.exp(rng.uniform(math.log(0.1), math.log(50.0)))
        ang = rng.uniform(0, 2 * math.pi)
        z = mag * complex(math.cos(ang), math.sin(ang))
        expected = 1j / (z * z)
        worst = max(worst, abs(wronskian_check(n, z) - expected) / abs(expected))
    return worst


def _check_duality(full):
    rng = np.random.default_rng(23)
    count = 40 if full else 12
    k = 21.0
    stencil = FDStencil(step=1e-5, order=4)
    worst = 0.0
    for _ in range(count):
        n = int(rng.integers(1, 8))
        m = int(rng.integers(0, n + 1))
        parity = Parity.EVEN if rng.integers(2) else Parity.ODD
        mode = ModeIndex(n, m, parity)
        point = SphericalPoint(
            rng.uniform(0.1, 0.5), rng.uniform(0.4, math.pi - 0.4), rng.uniform(0, 2 * math.pi)
        )
        m_fn = spherical_field_to_cartesian(
            lambda p: vector_M(mode, RadialKind.BESSEL_J, k, p).as_array()
        )
        n_val = vector_N(mode, RadialKind.BESSEL_J, k, point).as_array()
        curl_m = fd_curl(m_fn, to_cartesian(point), stencil.step * point.r, stencil) / k
        got = basis_matrix(point).T @ curl_m
        scale = max(np.linalg.norm(n_val), 1e-300)
        worst = max(worst, float(np.linalg.norm(got - n_val) / scale))
    return worst


def _check_free_space(full):
    scenario = matched_scenario()
    k = scenario.k_exterior
    rng = np.random.default_rng(37)
    count = 24 if full else 8
    trunc = TruncationSpec()
    worst = 0.0
    for _ in range(count):
        x, x0 = _separated_pair(rng, k)
        got = total_dgf(scenario, x, x0, trunc).entries
        want = free_space_dyadic_closed(k, x, x0).entries
        worst = max(worst, float(np.abs(got - want).max() / np.abs(want).max()))
    return worst


def _separated_pair(rng, k, lo=0.5, hi=30.0):
    while True:
        x = SphericalPoint(rng.uniform(0.05, 0.8), rng.uniform(0.3, math.pi - 0.3),
                           rng.uniform(0, 2 * math.pi))
        x0 = SphericalPoint(rng.uniform(0.05, 0.8), rng.uniform(0.3, math.pi - 0.3),
                            rng.uniform(0, 2 * math.pi))
        ratio = min(x.r, x0.r) / max(x.r, x0.r)
        sep = abs(k) * np.linalg.norm(to_cartesian(x) - to_cartesian(x0))
        if lo <= sep <= hi and ratio < 0.75:
            return x, x0


def _check_matched_null(full):
    scenario = matched_scenario()
    rng = np.random.default_rng(41)
    count = 10 if full else 4
    trunc = TruncationSpec()
    worst = 0.0
    for _ in range(count):
        x, x0 = _separated_pair(rng, scenario.k_exterior)
        case = classify(scenario, x0.r, x.r)
        gs = scattered_dgf(scenario, case, x, x0, trunc).entries
        gd = direct_dgf(scenario.k_exterior, x, x0, trunc).entries
        worst = max(worst, float(np.abs(gs).max() / np.abs(gd).max()))
    return worst


def _reciprocity_pairs(rng, scenario, count):
    inside = lambda: SphericalPoint(rng.uniform(0.03, 0.12), rng.uniform(0.3, math.pi - 0.3),
                                    rng.uniform(0, 2 * math.pi))
    outside = lambda: SphericalPoint(rng.uniform(0.17, 0.30), rng.uniform(0.3, math.pi - 0.3),
                                     rng.uniform(0, 2 * math.pi))
    makers = [(inside, inside), (inside, outside), (outside, inside), (outside, outside)]
    pairs = []
    for i in range(count):
        make_a, make_b = makers[i % 4]
        a, b = make_a(), make_b()
        if a.r > b.r * 0.85 and a.r < b.r * 1.18:  # keep the direct series fast
            a = SphericalPoint(a.r * 0.7, a.theta, a.phi)
        pairs.append((a, b))
    return pairs


def _check_reciprocity(full):
    scenario = reference_scenario()
    rng = np.random.default_rng(53)
    trunc = TruncationSpec()
    worst = 0.0
    for x, x0 in _reciprocity_pairs(rng, scenario, 8 if full else 4):
        fwd = total_dgf(scenario, x, x0, trunc).entries
        rev = total_dgf(scenario, x0, x, trunc).entries
        worst = max(worst, float(np.abs(fwd - rev.T).max() / np.abs(fwd).max()))
    return worst


def _check_interface(full):
    scenario = reference_scenario()
    trunc = TruncationSpec()
    samples = 16 if full else 6
    worst_e, worst_h = 0.0, 0.0
    sources = [
        DipoleSource(SphericalPoint(0.22, math.pi / 2, 0.0), (0.3 + 0.1j, 1.0, 0.7)),
        DipoleSource(SphericalPoint(0.08, math.pi / 3, 0.4), (0.2, 0.5j, 1.0)),
    ]
    for source in sources:
        def e_at(point):
            return efield(scenario, source, point, trunc).e_array()

        res = interface_residual(scenario, e_at, e_at, sample_count=samples)
        worst_e = max(worst_e, res.e)
        worst_h = max(worst_h, res.h)
    # report the E residual; H enters through its own looser tolerance
    return worst_e, worst_h


def run_verify(full: bool = False):
    """Run every check; returns the list of CheckResult."""
    results = []

    residual, seconds = _timed(lambda: _check_wronskian(full))
    results.append(CheckResult("wronskian-identity", residual, 1e-9, residual <= 1e-9, seconds))

    residual, seconds = _timed(lambda: _check_duality(full))
    results.append(CheckResult("vswf-duality", residual, 1e-4, residual <= 1e-4, seconds))

    residual, seconds = _timed(lambda: _check_free_space(full))
    results.append(CheckResult("free-space-equivalence", residual, 1e-6, residual <= 1e-6, seconds))

    residual, seconds = _timed(lambda: _check_matched_null(full))
    results.append(CheckResult("matched-media-null", residual, 1e-10, residual <= 1e-10, seconds))

    residual, seconds = _timed(lambda: _check_reciprocity(full))
    results.append(CheckResult("reciprocity", residual, 1e-6, residual <= 1e-6, seconds))

    start = time.perf_counter()
    res_e, res_h = _check_interface(full)
    seconds = time.perf_counter() - start
    results.append(CheckResult("interface-tangential-e", res_e, 1e-6, res_e <= 1e-6, seconds))
    results.append(CheckResult("interface-tangential-h", res_h, 1e-4, res_h <= 1e-4, 0.0))

    return results


def format_report(results):
    lines = []
    for check in results:
        status = "PASS" if check.passed else "FAIL"
        lines.append(
            f"{status}  {check.name:<26s} residual={check.residual:.3e} "
            f"tol={check.tolerance:.1e}  ({check.seconds:.2f}s)"
        )
    return "\n".join(lines)
