"""Ground-plane multi-person localization and tracking for panoramic rigs.

People detected as 2D poses in the views of a multi-camera panoramic rig
are placed in a shared 3D ground-plane coordinate system using a constant
body-height prior, then tracked across frames by fusing appearance
similarity with Kalman-predicted trajectory proximity.
"""

from .association import (
    PAD_COST,
    Assignment,
    appearance_cost,
    build_cost_matrix,
    solve_assignment,
    trajectory_cost,
)
from .errors import (
    BehindCamera,
    ConfigInvalid,
    DegenerateHeight,
    DimensionMismatch,
    EmptyGroundTruth,
    InsufficientKeypoints,
    NonFiniteCost,
    NonMonotoneFrame,
    NonPositiveHeight,
    PanotrackError,
    SchemaError,
    ZeroNormEmbedding,
)
from .filtering import KalmanParams, KalmanState, kf_new, kf_predict, kf_update
from .geometry import (
    COCO_KEYPOINT_NAMES,
    CameraIntrinsics,
    Keypoint,
    Location3D,
    PanoramaRig,
    PixelPoint,
    ViewConfig,
    estimate_pixel_height,
    four_view_rig,
    load_rig,
    localize,
    merge_cross_view_duplicates,
    project,
    reference_column,
    rig_from_dict,
    rig_to_dict,
    rotation_y,
    save_rig,
)
from .metrics import EvalReport, GroundTruthRecord, evaluate, match_frame
from .synth import (
    OcclusionEpisode,
    SceneConfig,
    base_embedding,
    generate_scene,
    synth_embedding,
)
from .tracker import (
    Detection,
    Track,
    Tracker,
    TrackerConfig,
    TrackletRecord,
    localize_all,
    localize_detection,
    run,
    run_tracker,
)

__version__ = "0.1.0"

__all__ = [
    "PAD_COST",
    "Assignment",
    "appearance_cost",
    "build_cost_matrix",
    "solve_assignment",
    "trajectory_cost",
    "BehindCamera",
    "ConfigInvalid",
    "DegenerateHeight",
    "DimensionMismatch",
    "EmptyGroundTruth",
    "InsufficientKeypoints",
    "NonFiniteCost",
    "NonMonotoneFrame",
    "NonPositiveHeight",
    "PanotrackError",
    "SchemaError",
    "ZeroNormEmbedding",
    "KalmanParams",
    "KalmanState",
    "kf_new",
    "kf_predict",
    "kf_update",
    "COCO_KEYPOINT_NAMES",
    "CameraIntrinsics",
    "Keypoint",
    "Location3D",
    "PanoramaRig",
    "PixelPoint",
    "ViewConfig",
    "estimate_pixel_height",
    "four_view_rig",
    "load_rig",
    "localize",
    "merge_cross_view_duplicates",
    "project",
    "reference_column",
    "rig_from_dict",
    "rig_to_dict",
    "rotation_y",
    "save_rig",
    "EvalReport",
    "GroundTruthRecord",
    "evaluate",
    "match_frame",
    "OcclusionEpisode",
    "SceneConfig",
    "base_embedding",
    "generate_scene",
    "synth_embedding",
    "Detection",
    "Track",
    "Tracker",
    "TrackerConfig",
    "TrackletRecord",
    "localize_all",
    "localize_detection",
    "run",
    "run_tracker",
]
