"""Slice stack to watertight STL reconstruction."""

from ._core import (
    SliceImage,
    TriangleMesh,
    assemble,
    audit,
    convert_directory,
    delaunay,
    enhance,
    hu_to_gray,
    mean_filter,
    median_filter,
    morph,
    parse_dicom,
    parse_pgm,
    phantom_slice,
    plan_stitch,
    power_law,
    read_stl,
    resample_closed,
    smooth_contour,
    threshold,
    trace_contours,
    write_pgm,
    write_stl,
)

__all__ = [
    "SliceImage",
    "TriangleMesh",
    "assemble",
    "audit",
    "convert_directory",
    "delaunay",
    "enhance",
    "hu_to_gray",
    "mean_filter",
    "median_filter",
    "morph",
    "parse_dicom",
    "parse_pgm",
    "phantom_slice",
    "plan_stitch",
    "power_law",
    "read_stl",
    "resample_closed",
    "smooth_contour",
    "threshold",
    "trace_contours",
    "write_pgm",
    "write_stl",
]
