"""Curvature of explicit metrics and the traceless-Ricci deformation."""

from ._core import (
    DomainError,
    GeometryError,
    ValidationError,
    __version__,
    assumption_margin,
    catalog,
    cli,
    conclusion_margin,
    conclusion_slope,
    curvature,
    deformed_curvature,
    norm1,
    norm2,
    scan,
    variation,
    verify,
)

__all__ = [
    "DomainError",
    "GeometryError",
    "ValidationError",
    "__version__",
    "assumption_margin",
    "catalog",
    "cli",
    "conclusion_margin",
    "conclusion_slope",
    "curvature",
    "deformed_curvature",
    "norm1",
    "norm2",
    "scan",
    "variation",
    "verify",
]
