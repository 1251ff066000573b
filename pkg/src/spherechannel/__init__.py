"""Dyadic Green's function channel model for a dielectric sphere.

Evaluate the electric field of a point dipole near or inside a lossy
dielectric sphere, for all four transmitter/receiver placement cases, and
sweep the receiver over azimuth, polar angle and vertical offset.
"""

from .errors import (
    CoincidentPointsError,
    InterfacePlacementError,
    RadialDomainError,
    RecurrenceOverflowError,
    ScenarioValidationError,
    SeriesConvergenceError,
    SingularInterfaceError,
)
from .field import FieldSample, efield, magnitude_db, scattered_efield
from .greens import Dyadic, TruncationSpec, direct_dgf, scattered_dgf, total_dgf, wiscombe_order
from .scattering import BoundaryMatrix, CoeffSet, bessel_interface_matrix, coefficients
from .scenario import (
    DipoleSource,
    Medium,
    PlacementCase,
    SphereScenario,
    classify,
    load_scenario,
    scenario_from_dict,
    wavenumber,
)
from .specfun import (
    LegendreEval,
    RadialEval,
    RadialKind,
    assoc_legendre,
    spherical_bessel,
    wronskian_check,
)
from .sweep import SweepConfig, SweepSummary, run_sweep
from .vswf import (
    ModeIndex,
    Parity,
    SphericalPoint,
    VectorFieldValue,
    scalar_psi,
    vector_L,
    vector_M,
    vector_N,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryMatrix",
    "CoeffSet",
    "CoincidentPointsError",
    "DipoleSource",
    "Dyadic",
    "FieldSample",
    "InterfacePlacementError",
    "LegendreEval",
    "Medium",
    "ModeIndex",
    "Parity",
    "PlacementCase",
    "RadialDomainError",
    "RadialEval",
    "RadialKind",
    "RecurrenceOverflowError",
    "ScenarioValidationError",
    "SeriesConvergenceError",
    "SingularInterfaceError",
    "SphereScenario",
    "SphericalPoint",
    "SweepConfig",
    "SweepSummary",
    "TruncationSpec",
    "VectorFieldValue",
    "assoc_legendre",
    "bessel_interface_matrix",
    "classify",
    "coefficients",
    "direct_dgf",
    "efield",
    "load_scenario",
    "magnitude_db",
    "run_sweep",
    "scalar_psi",
    "scattered_dgf",
    "scattered_efield",
    "scenario_from_dict",
    "spherical_bessel",
    "total_dgf",
    "vector_L",
    "vector_M",
    "vector_N",
    "wavenumber",
    "wiscombe_order",
    "wronskian_check",
]
