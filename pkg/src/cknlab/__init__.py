"""ckn-lab: numerical laboratory for rigidity of weighted critical equations."""

from . import bubble, cylfield, errors, estimates, grids, params, pressure, radial_ode, spectral
from .params import ParamSet, Regime, applicable_results, decay_thresholds, derive_params

__all__ = [
    "ParamSet",
    "Regime",
    "applicable_results",
    "bubble",
    "cylfield",
    "decay_thresholds",
    "derive_params",
    "errors",
    "estimates",
    "grids",
    "params",
    "pressure",
    "radial_ode",
    "spectral",
]

__version__ = "0.1.0"
