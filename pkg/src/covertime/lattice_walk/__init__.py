"""Simple random walks on Z_n^2, Z^2 and other planar lattices."""

from .exact import exact_small_cover, minimal_cover_walk_length
from .lattices import (
    LatticeSpec,
    cell_area,
    cover_time_lattice,
    degree,
    disk_graph,
    lattice_site_count,
    srw_step,
)
from .mask import VisitMask, largest_empty_disk, torus_distance_field
from .plane import DiskCoverResult, disk_cover_z2, disk_sites, outer_radius
from .torus import (
    CoverResult,
    cover_time_torus,
    first_visit_times,
    radius_at_fraction,
    time_to_uncovered_radius,
    uncovered_radius_hitting_step,
)

__all__ = [
    "CoverResult",
    "DiskCoverResult",
    "LatticeSpec",
    "VisitMask",
    "cell_area",
    "cover_time_lattice",
    "cover_time_torus",
    "degree",
    "disk_cover_z2",
    "disk_graph",
    "disk_sites",
    "exact_small_cover",
    "first_visit_times",
    "largest_empty_disk",
    "lattice_site_count",
    "minimal_cover_walk_length",
    "outer_radius",
    "radius_at_fraction",
    "srw_step",
    "time_to_uncovered_radius",
    "torus_distance_field",
    "uncovered_radius_hitting_step",
]
