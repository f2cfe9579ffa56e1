"""Index, variation and Kulkarni-Pinkall partitions for plane maps."""

from ._planetopo import (
    Curve,
    Error,
    PlaneMap,
    __version__,
    auto_partition,
    check_index_variation,
    index,
    kp_summary,
    locate_fixed_points,
    run_scene,
    variation,
)

__all__ = [
    "Curve",
    "Error",
    "PlaneMap",
    "auto_partition",
    "check_index_variation",
    "index",
    "kp_summary",
    "locate_fixed_points",
    "run_scene",
    "variation",
]
