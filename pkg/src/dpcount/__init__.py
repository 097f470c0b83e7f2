"""Integral points of bounded height on a quartic del Pezzo surface of type A3.

Counts points over Q and imaginary quadratic fields by direct enumeration
and through the universal torsor, and computes the predicted leading
constants (Euler products, polytope volumes, local densities).
"""

from . import constants, geometry, kernels, qfield, surface, torsor
from .constants import predict
from .qfield import make_field, parse_field
from .surface import CountResult, count_direct
from .torsor import count_torsor, verify_points

__version__ = "0.1.0"

__all__ = [
    "constants",
    "geometry",
    "kernels",
    "qfield",
    "surface",
    "torsor",
    "predict",
    "make_field",
    "parse_field",
    "CountResult",
    "count_direct",
    "count_torsor",
    "verify_points",
    "__version__",
]
