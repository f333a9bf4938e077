"""Selfsimilarity complexes of contracting selfsimilar groups."""

from ._sscx import (
    BoundedDegreeStats,
    Calibration,
    Complex,
    DynatlasReport,
    GeodesicInfo,
    Group,
    HSigmaEstimate,
    OrbitResult,
    Ray,
    SscxError,
    __version__,
    boundary_degrees,
    bounded_degree_stats,
    build_dynatlas,
    builtin_names,
    calibrate,
    cone_type_counts,
    rays_equivalent,
    run_verify,
    stabilizer_orbit,
    visual_distance,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
