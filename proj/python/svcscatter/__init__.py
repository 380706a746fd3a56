"""Transmission through Smith-Volterra-Cantor potentials.

Wave numbers are in units with hbar = 2m = 1, so E = k^2.
"""

from ._core import (
    ConsistencyError,
    DegenerateFit,
    Engine,
    InvalidArgument,
    IoError,
    OracleMismatch,
    PotentialSpec,
    __version__,
    brute_force_transmission,
    find_resonances,
    fit_scaling,
    layout,
    reflection_scaled,
    renormalized_height,
    saturation_metric,
    sweep,
    transmission,
)

__all__ = [
    "ConsistencyError",
    "DegenerateFit",
    "Engine",
    "InvalidArgument",
    "IoError",
    "OracleMismatch",
    "PotentialSpec",
    "__version__",
    "brute_force_transmission",
    "find_resonances",
    "fit_scaling",
    "layout",
    "reflection_scaled",
    "renormalized_height",
    "saturation_metric",
    "sweep",
    "transmission",
]
