"""Geometry of a multi-view panoramic camera rig.

Each view is a pinhole camera sharing the rig center, rotated about the
vertical axis by its yaw. People are assumed to stand on the ground plane
(world Y = 0), so their apparent pixel height together with a constant
body-height prior fixes their depth, and a single view is enough to place
them in the shared ground-plane coordinate system.

Conventions: world units are meters, image units are pixels. The camera
frame of a view looks along its +Z axis; image v grows downward, so a
point above the optical axis has negative camera-frame Y.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BehindCamera,
    DegenerateHeight,
    InsufficientKeypoints,
    NonPositiveHeight,
    SchemaError,
)

COCO_KEYPOINT_NAMES = (
    "nose",
    "left_eye",
    "right_eye",
    "left_ear",
    "right_ear",
    "left_shoulder",
    "right_shoulder",
    "left_elbow",
    "right_elbow",
    "left_wrist",
    "right_wrist",
    "left_hip",
    "right_hip",
    "left_knee",
    "right_knee",
    "left_ankle",
    "right_ankle",
)
COCO_KEYPOINT_SET = frozenset(COCO_KEYPOINT_NAMES)

DEFAULT_BODY_HEIGHT_M = 1.7
DEFAULT_VISIBILITY_TAU = 0.3
DEFAULT_MERGE_RADIUS_M = 0.3

# Stature is roughly 3.3x the shoulder-to-hip span; used when the legs are
# out of frame and only the torso can size the person.
TORSO_TO_STATURE_RATIO = 3.3


@dataclass(frozen=True)
class CameraIntrinsics:
    """Pinhole intrinsics, all in pixels."""

    fx: float
    fy: float
    cx: float
    cy: float

    def __post_init__(self):
        if not (self.fx > 0 and self.fy > 0):
            raise ValueError("focal lengths must be positive")
        if not all(math.isfinite(v) for v in (self.fx, self.fy, self.cx, self.cy)):
            raise ValueError("intrinsics must be finite")


@dataclass(frozen=True)
class ViewConfig:
    """One camera of the rig: yaw about the vertical axis plus intrinsics."""

    view_id: int
    yaw_deg: float
    intrinsics: CameraIntrinsics
    image_width: int
    image_height: int

    def __post_init__(self):
        if not 0 <= self.yaw_deg < 360:
            raise ValueError("yaw_deg must lie in [0, 360)")
        if self.image_width <= 0 or self.image_height <= 0:
            raise ValueError("image dimensions must be positive")


@dataclass(frozen=True)
class PixelPoint:
    u: float
    v: float


@dataclass(frozen=True)
class Location3D:
    """Ground-plane position in the panoramic frame (Y is identically 0)."""

    x: float
    z: float


@dataclass(frozen=True)
class Keypoint:
    """One named 2D joint with its detector confidence."""

    name: str
    u: float
    v: float
    confidence: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence!r} outside [0, 1]")


class PanoramaRig:
    """An ordered set of views plus the body-height prior used for depth."""

    def __init__(self, views, body_height_m=DEFAULT_BODY_HEIGHT_M):
        views = list(views)
        if not views:
            raise ValueError("rig needs at least one view")
        ids = [v.view_id for v in views]
        yaws = [v.yaw_deg for v in views]
        if len(set(ids)) != len(ids):
            raise ValueError("view_ids must be distinct")
        if len(set(yaws)) != len(yaws):
            raise ValueError("view yaw angles must be distinct")
        if not body_height_m > 0:
            raise ValueError("body_height_m must be positive")
        self.views = views
        self.body_height_m = float(body_height_m)
        self._by_id = {v.view_id: v for v in views}

    def view(self, view_id) -> ViewConfig:
        try:
            return self._by_id[view_id]
        except KeyError:
            raise KeyError(f"no view {view_id!r} in rig") from None

    def __repr__(self):
        yaws = ", ".join(f"{v.view_id}:{v.yaw_deg:g}deg" for v in self.views)
        return f"PanoramaRig([{yaws}], body_height_m={self.body_height_m:g})"


def four_view_rig(
    fx=320.0,
    fy=320.0,
    cx=320.0,
    cy=240.0,
    width=640,
    height=480,
    body_height_m=DEFAULT_BODY_HEIGHT_M,
) -> PanoramaRig:
    """Standard rig: four identical views at yaws 0/90/180/270.

    The defaults give each view a 90 degree horizontal field of view, so the
    four sectors tile the full horizon without overlap.
    """
    intr = CameraIntrinsics(fx, fy, cx, cy)
    views = [ViewConfig(i, 90.0 * i, intr, width, height) for i in range(4)]
    return PanoramaRig(views, body_height_m=body_height_m)


def as_xz(location) -> tuple[float, float]:
    """Coerce a Location3D or an (x, z) pair to a plain float tuple."""
    if isinstance(location, Location3D):
        return location.x, location.z
    if hasattr(location, "x") and hasattr(location, "z"):
        return float(location.x), float(location.z)
    x, z = location
    return float(x), float(z)


def rotation_y(yaw_deg: float) -> np.ndarray:
    """Rotation taking panoramic coordinates into the frame of a view at this yaw.

    p_cam = rotation_y(yaw) @ p_pano. Only the horizontal plane is mixed;
    Y passes through unchanged.
    """
    theta = math.radians(yaw_deg)
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, c]])


def project(rig: PanoramaRig, view_id, point) -> PixelPoint:
    """Project a 3D panoramic point (with explicit Y) into a view's image.

    Raises BehindCamera when the point is not strictly in front of the view.
    """
    view = rig.view(view_id)
    x, y, z = (float(c) for c in point)
    theta = math.radians(view.yaw_deg)
    c, s = math.cos(theta), math.sin(theta)
    x_cam = c * x - s * z
    z_cam = s * x + c * z
    if z_cam <= 0:
        raise BehindCamera(f"point ({x:g}, {y:g}, {z:g}) has depth {z_cam:g} in view {view_id}")
    k = view.intrinsics
    return PixelPoint(k.fx * x_cam / z_cam + k.cx, k.fy * y / z_cam + k.cy)


def _visible(keypoints, names, tau):
    return [k for k in keypoints if k.name in names and k.confidence >= tau]


def estimate_pixel_height(keypoints, tau=DEFAULT_VISIBILITY_TAU) -> float:
    """Apparent body height in pixels from a 2D pose.

    Prefers the nose-to-ankle span. When the legs are not visible (people
    close to the camera typically show only the upper body), falls back to
    the shoulder-to-hip span scaled up to a full stature.
    """
    noses = _visible(keypoints, ("nose",), tau)
    ankles = _visible(keypoints, ("left_ankle", "right_ankle"), tau)
    if noses and ankles:
        h = float(np.mean([k.v for k in ankles])) - noses[0].v
    else:
        shoulders = _visible(keypoints, ("left_shoulder", "right_shoulder"), tau)
        hips = _visible(keypoints, ("left_hip", "right_hip"), tau)
        if len(shoulders) == 2 and len(hips) == 2:
            torso = float(np.mean([k.v for k in hips])) - float(np.mean([k.v for k in shoulders]))
            h = TORSO_TO_STATURE_RATIO * torso
        else:
            raise InsufficientKeypoints(
                "need a visible nose plus an ankle, or both shoulders and both hips"
            )
    if h <= 0:
        raise NonPositiveHeight(f"computed pixel height {h:g} is not positive")
    return h


def reference_column(keypoints, tau=DEFAULT_VISIBILITY_TAU) -> float:
    """Horizontal image coordinate standing in for the person's position.

    Mean u of the visible hips, falling back to shoulders, then to every
    visible keypoint.
    """
    for names in (("left_hip", "right_hip"), ("left_shoulder", "right_shoulder")):
        pts = _visible(keypoints, names, tau)
        if pts:
            return float(np.mean([k.u for k in pts]))
    pts = [k for k in keypoints if k.confidence >= tau]
    if pts:
        return float(np.mean([k.u for k in pts]))
    raise InsufficientKeypoints("no keypoint above the visibility threshold")


def localize(rig: PanoramaRig, view_id, u_ref: float, h_body: float) -> Location3D:
    """Invert the projection under the body-height prior.

    The ratio of the height prior to the pixel height fixes the camera-frame
    depth, the reference column fixes the lateral offset, and the view yaw
    rotates the result back into the shared panoramic frame. Y is dropped:
    everyone stands on the ground plane.
    """
    if not h_body > 0:
        raise DegenerateHeight(f"pixel height {h_body!r} must be positive")
    view = rig.view(view_id)
    k = view.intrinsics
    z_cam = k.fy * rig.body_height_m / h_body
    x_cam = (u_ref - k.cx) * z_cam / k.fx
    theta = math.radians(view.yaw_deg)
    c, s = math.cos(theta), math.sin(theta)
    return Location3D(c * x_cam + s * z_cam, -s * x_cam + c * z_cam)


def merge_cross_view_duplicates(detections, rig, merge_radius=DEFAULT_MERGE_RADIUS_M):
    """Collapse same-person detections leaking across adjacent view seams.

    Operates on one frame's localized detections. Among cross-view pairs
    closer than merge_radius on the ground plane, the detection nearer its
    own vertical image border loses. A merge_radius of 0 disables the pass.
    """
    dets = list(detections)
    if merge_radius <= 0:
        return dets
    alive = [True] * len(dets)
    for i in range(len(dets)):
        if not alive[i]:
            continue
        for j in range(i + 1, len(dets)):
            if not alive[j] or dets[i].view_id == dets[j].view_id:
                continue
            a, b = dets[i].location, dets[j].location
            if math.hypot(a.x - b.x, a.z - b.z) >= merge_radius:
                continue
            if _border_margin(rig, dets[i]) >= _border_margin(rig, dets[j]):
                alive[j] = False
            else:
                alive[i] = False
                break
    return [d for d, keep in zip(dets, alive) if keep]


def _border_margin(rig, det):
    width = rig.view(det.view_id).image_width
    return min(det.u_ref, width - det.u_ref)


def rig_from_dict(data) -> PanoramaRig:
    """Build a rig from its JSON configuration dictionary."""
    try:
        views = [
            ViewConfig(
                view_id=int(v["view_id"]),
                yaw_deg=float(v["yaw_deg"]),
                intrinsics=CameraIntrinsics(
                    float(v["fx"]), float(v["fy"]), float(v["cx"]), float(v["cy"])
                ),
                image_width=int(v["width"]),
                image_height=int(v["height"]),
            )
            for v in data["views"]
        ]
        return PanoramaRig(views, body_height_m=float(data["body_height_m"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad rig config: {exc}") from exc


def rig_to_dict(rig: PanoramaRig) -> dict:
    return {
        "body_height_m": rig.body_height_m,
        "views": [
            {
                "view_id": v.view_id,
                "yaw_deg": v.yaw_deg,
                "fx": v.intrinsics.fx,
                "fy": v.intrinsics.fy,
                "cx": v.intrinsics.cx,
                "cy": v.intrinsics.cy,
                "width": v.image_width,
                "height": v.image_height,
            }
            for v in rig.views
        ],
    }


def load_rig(path) -> PanoramaRig:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"rig file is not valid JSON: {exc}") from exc
    return rig_from_dict(data)


def save_rig(path, rig: PanoramaRig):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(rig_to_dict(rig), fh, indent=2)
        fh.write("\n")
