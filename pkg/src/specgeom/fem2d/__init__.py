"""Planar P1 finite elements on convex domains."""

from .domain import (
    ConvexDomain2D,
    check_convex,
    disk,
    ellipse,
    ellipse_perimeter_integral,
    polygon,
    rectangle,
    regular_polygon,
    shape_metrics,
    truncated_disk,
    unit_square,
)
from .mesh import Mesh2D, export_off, overlapping_disks_mesh, read_off, triangulate_convex
from .solver import (
    EigenSolution,
    TorsionResult,
    assemble,
    dirichlet_eigs,
    export_eigenvectors_csv,
    torsion_solve,
)

__all__ = [
    "ConvexDomain2D",
    "EigenSolution",
    "Mesh2D",
    "TorsionResult",
    "assemble",
    "check_convex",
    "dirichlet_eigs",
    "disk",
    "ellipse",
    "ellipse_perimeter_integral",
    "export_eigenvectors_csv",
    "export_off",
    "overlapping_disks_mesh",
    "polygon",
    "read_off",
    "rectangle",
    "regular_polygon",
    "shape_metrics",
    "torsion_solve",
    "triangulate_convex",
    "truncated_disk",
    "unit_square",
]
