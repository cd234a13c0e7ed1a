"""Exact symbolic engine for invariant solutions of the Strominger system on
six-dimensional Lie algebras with balanced SU(3)-structures."""

from .scalars import Scalar, free, radical, sign, evaluate, exact_sign
from .exterior import KForm, LieAlgebra, e, wedge
from .su3 import SU3Structure
from .connection import Connection, curvature, family_connection, levi_civita
from .catalog import builtin, symbols
from .anomaly import pontrjagin_trace, region_report, solve_alpha, solve_g7, solve_g7_u0
from .dsl import parse, serialize

__version__ = "0.1.0"

__all__ = [
    "Scalar", "free", "radical", "sign", "evaluate", "exact_sign",
    "KForm", "LieAlgebra", "e", "wedge", "SU3Structure",
    "Connection", "curvature", "family_connection", "levi_civita",
    "builtin", "symbols",
    "pontrjagin_trace", "region_report", "solve_alpha", "solve_g7", "solve_g7_u0",
    "parse", "serialize",
]
