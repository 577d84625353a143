"""Sasaki-Einstein Y(p,q) geometry: metrics, Killing structures, toric data,
geodesic flow, and integrability diagnostics."""

__version__ = "0.1.0"

from . import errors
from .errors import YpqError
from .ypq import PQParams, make_params

__all__ = ["errors", "YpqError", "PQParams", "make_params", "__version__"]
