"""Resistance curvature of graphs.

Effective and relative resistances, curvature, the spanning tree and
doubled matching polytopes, exact RP / SRN / NOT_RN classification,
weight fitting, Kron reduction, circle inversion and resistance capacity.
"""

from .errors import (
    ConnectivityError,
    ConsistencyError,
    DataError,
    ParameterError,
    PreconditionError,
    RescurvError,
    ResourceError,
    StructuralError,
)
from .graph import Graph, build_named
from .resistance import curvature, effective_resistances, relative_resistances
from .rn import classify

__version__ = "0.1.0"

__all__ = [
    "ConnectivityError",
    "ConsistencyError",
    "DataError",
    "Graph",
    "ParameterError",
    "PreconditionError",
    "RescurvError",
    "ResourceError",
    "StructuralError",
    "build_named",
    "classify",
    "curvature",
    "effective_resistances",
    "relative_resistances",
]
