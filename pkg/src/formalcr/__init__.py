"""Exact truncated power-series machinery for CR submanifolds and formal CR maps."""

from .errors import (
    ConsistencyError,
    DegenerateChartError,
    DegenerateMapError,
    FormalCRError,
    InputError,
    InsufficientCapError,
    PreconditionError,
    StructureError,
)
from .gauss import GaussRational
from .manifold import GenericManifold, build_manifold, restrict_to_M, tangent_fields
from .series import DEFAULT_CAP, TruncatedSeries

__all__ = [
    "ConsistencyError",
    "DEFAULT_CAP",
    "DegenerateChartError",
    "DegenerateMapError",
    "FormalCRError",
    "GaussRational",
    "GenericManifold",
    "InputError",
    "InsufficientCapError",
    "PreconditionError",
    "StructureError",
    "TruncatedSeries",
    "build_manifold",
    "restrict_to_M",
    "tangent_fields",
]
