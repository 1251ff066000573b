"""Receiver sweeps over azimuth, polar angle and displacement, with CSV output.

The receiver for grid point (theta, phi, offset) starts at (range, theta, phi)
on the sphere of the configured range (default 18 cm) and is displaced by
`offset` metres.  Three displacement readings are supported:

  radial (default) - along +r_hat, so the receiver recedes from the sphere
                     center; monotone in source separation for every theta.
  away             - along +z in the upper hemisphere, -z in the lower
                     (height above/below the equatorial source plane grows).
  plus-z           - literally along +z (drives the theta = pi receiver into
                     the sphere at large offsets).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from multiprocessing import get_context

from .field import efield, scattered_efield
from .greens import TruncationSpec
from .scenario import DipoleSource, SphereScenario
from .vswf import SphericalPoint

CSV_HEADER = (
    "theta_rad,phi_rad,offset_m,er_re,er_im,eth_re,eth_im,eph_re,eph_im,"
    "mag_eph_db,mag_total_db"
)

DEFAULT_THETAS = (math.pi / 6, math.pi / 3, math.pi)
DEFAULT_OFFSETS = (0.0, 0.02, 0.04, 0.06, 0.08, 0.10)

OFFSET_RADIAL = "radial"
OFFSET_AWAY = "away"
OFFSET_PLUS_Z = "plus-z"


@dataclass(frozen=True)
class SweepConfig:
    theta_values: tuple = DEFAULT_THETAS
    phi_start: float = 0.0
    phi_end: float = 2.0 * math.pi
    phi_step: float = math.pi / 180.0
    offsets_m: tuple = DEFAULT_OFFSETS
    field_selector: str = "scattered"  # or "total"
    truncation: TruncationSpec = field(default_factory=TruncationSpec)
    receiver_range_m: float = 0.18
    offset_direction: str = OFFSET_RADIAL
    workers: int = 1

    def __post_init__(self):
        if self.phi_step <= 0:
            raise ValueError("phi_step must be > 0")
        if any(off < 0 for off in self.offsets_m):
            raise ValueError("offsets must be >= 0")
        if self.field_selector not in ("scattered", "total"):
            raise ValueError("field_selector must be 'scattered' or 'total'")
        if self.offset_direction not in (OFFSET_RADIAL, OFFSET_AWAY, OFFSET_PLUS_Z):
            raise ValueError("offset_direction must be 'radial', 'away' or 'plus-z'")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        object.__setattr__(self, "theta_values", tuple(float(t) for t in self.theta_values))
        object.__setattr__(self, "offsets_m", tuple(float(o) for o in self.offsets_m))

    def phi_values(self):
        count = int(math.floor((self.phi_end - self.phi_start) / self.phi_step + 1e-9)) + 1
        return [self.phi_start + i * self.phi_step for i in range(count)]


@dataclass(frozen=True)
class SweepSummary:
    rows: int
    max_db: float
    min_db: float
    monotone_trend: bool


def receiver_position(range_m: float, theta: float, phi: float, offset: float,
                      direction: str = OFFSET_RADIAL) -> SphericalPoint:
    """Receiver location for one grid point (see module docstring)."""
    if direction == OFFSET_RADIAL:
        return SphericalPoint(r=range_m + offset, theta=theta, phi=phi)
    rho = range_m * math.sin(theta)
    z = range_m * math.cos(theta)
    if direction == OFFSET_AWAY and z < 0:
        z -= offset
    else:
        z += offset
    return SphericalPoint(r=math.hypot(rho, z), theta=math.atan2(rho, z), phi=phi)


def _format(value: float) -> str:
    return format(value, ".17g")


def _sweep_block(args):
    """All phi rows for one (theta, offset) pair."""
    scenario, source, config, theta, offset = args
    evaluate = scattered_efield if config.field_selector == "scattered" else efield
    rows = []
    mags = []
    phi_dbs = []
    for phi in config.phi_values():
        point = receiver_position(
            config.receiver_range_m, theta, phi, offset, config.offset_direction
        )
        sample = evaluate(scenario, source, point, config.truncation)
        er, eth, eph = sample.e
        rows.append(
            ",".join(
                [
                    _format(theta),
                    _format(phi),
                    _format(offset),
                    _format(er.real), _format(er.imag),
                    _format(eth.real), _format(eth.imag),
                    _format(eph.real), _format(eph.imag),
                    _format(sample.mag_phi_db),
                    _format(sample.mag_total_db),
                ]
            )
        )
        mags.append(abs(eph))
        phi_dbs.append(sample.mag_phi_db)
    return rows, mags, phi_dbs


def run_sweep(scenario: SphereScenario, source: DipoleSource, config: SweepConfig,
              out_path) -> SweepSummary:
    """Evaluate the full grid, write the CSV and report the offset trend.

    Row order is deterministic (theta outer, offset middle, phi inner)
    regardless of how many workers computed the blocks.
    """
    blocks = [
        (scenario, source, config, theta, offset)
        for theta in config.theta_values
        for offset in config.offsets_m
    ]
    if config.workers > 1 and len(blocks) > 1:
        with get_context("spawn").Pool(processes=config.workers) as pool:
            results = pool.map(_sweep_block, blocks)
    else:
        results = [_sweep_block(block) for block in blocks]

    lines = [CSV_HEADER]
    mean_mag = {}
    max_db, min_db = -math.inf, math.inf
    n_offsets = len(config.offsets_m)
    for index, (rows, mags, phi_dbs) in enumerate(results):
        lines.extend(rows)
        theta = config.theta_values[index // n_offsets]
        offset = config.offsets_m[index % n_offsets]
        mean_mag[(theta, offset)] = sum(mags) / len(mags) if mags else 0.0
        if phi_dbs:
            max_db = max(max_db, max(phi_dbs))
            min_db = min(min_db, min(phi_dbs))

    monotone = all(
        mean_mag[(theta, config.offsets_m[i + 1])] < mean_mag[(theta, config.offsets_m[i])]
        for theta in config.theta_values
        for i in range(n_offsets - 1)
    )

    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")

    return SweepSummary(
        rows=len(lines) - 1,
        max_db=max_db,
        min_db=min_db,
        monotone_trend=monotone,
    )


def write_plot_script(csv_path, script_path, config: SweepConfig):
    """Emit a gnuplot companion script plotting |E_phi| dB versus phi."""
    lines = [
        "set datafile separator ','",
        "set xlabel 'phi (rad)'",
        "set ylabel '|E_phi| (dB)'",
        "set key outside",
    ]
    for theta in config.theta_values:
        lines.append(f"set title 'theta = {theta:.6g} rad'")
        plot_parts = []
        for offset in config.offsets_m:
            cond = (
                f"(abs($1 - {theta:.17g}) < 1e-12 && abs($3 - {offset:.17g}) < 1e-12)"
            )
            plot_parts.append(
                f"'{csv_path}' using ({cond} ? $2 : 1/0):10 with lines "
                f"title 'offset {offset:g} m'"
            )
        lines.append("plot \\\n  " + ", \\\n  ".join(plot_parts))
        lines.append("pause -1 'press enter for the next theta'")
    with open(script_path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
