"""Geodesics of invariant metrics on the circle diffeomorphism group and the
Virasoro-Bott group, computed on truncated Fourier series."""

from .errors import BlowUpError, CircleGeoError, ConfigError, DomainError, SingularModeError
from .fields import FieldSeries, FourierField, Subspace, bracket, hilbert, moments, project
from .geodesics import (
    GeodesicState,
    KaehlerNormal,
    KaehlerRiemann,
    MobMultiplier,
    RiemannL2,
    RotMultiplier,
    SobolevRiemann,
    Trajectory,
    VirasoroNormal,
    VirMultiplier,
    WeilPetersson,
    diagnostics,
    integrate,
    rhs,
    rotate_shift,
)
from .metrics import MetricParams, inner, kirillov_metric, to_univalent
from .virasoro import CentralParams, VirasoroElement, VirVector, vir_multiply

__version__ = "0.1.0"

__all__ = [
    "BlowUpError",
    "CentralParams",
    "CircleGeoError",
    "ConfigError",
    "DomainError",
    "FieldSeries",
    "FourierField",
    "GeodesicState",
    "KaehlerNormal",
    "KaehlerRiemann",
    "MetricParams",
    "MobMultiplier",
    "RiemannL2",
    "RotMultiplier",
    "SingularModeError",
    "SobolevRiemann",
    "Subspace",
    "Trajectory",
    "VirMultiplier",
    "VirVector",
    "VirasoroElement",
    "VirasoroNormal",
    "WeilPetersson",
    "bracket",
    "diagnostics",
    "hilbert",
    "inner",
    "integrate",
    "kirillov_metric",
    "moments",
    "project",
    "rhs",
    "rotate_shift",
    "to_univalent",
    "vir_multiply",
]
