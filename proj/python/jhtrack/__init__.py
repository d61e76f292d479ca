"""Joint homography and ground-plane state tracking."""

from ._core import (
    AffineMotion,
    BBox,
    Detection,
    Homography,
    SceneSpec,
    Tracker,
    TrackerConfig,
    apply_affine,
    biou,
    bottom_centre,
    chi2_cdf,
    generate_scene,
    idf1,
    jacobian_ground,
    jacobian_homography,
    mota,
    p_of_d,
    pattern_search,
    project,
    solve_assignment,
    track_scene,
    unproject,
)

__all__ = [
    "AffineMotion",
    "BBox",
    "Detection",
    "Homography",
    "SceneSpec",
    "Tracker",
    "TrackerConfig",
    "apply_affine",
    "biou",
    "bottom_centre",
    "chi2_cdf",
    "generate_scene",
    "idf1",
    "jacobian_ground",
    "jacobian_homography",
    "mota",
    "p_of_d",
    "pattern_search",
    "project",
    "solve_assignment",
    "track_scene",
    "unproject",
]
