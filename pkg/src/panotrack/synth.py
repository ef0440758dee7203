"""Deterministic scene generator for closed-loop verification.

Simulates agents walking inside a circular arena, renders each one into
the view covering its bearing as a stick-figure pose plus an identity
embedding, and emits the matching ground-truth trajectory records. All
randomness comes from the configured seed, so output is reproducible byte
for byte.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BehindCamera, ConfigInvalid
from .geometry import Keypoint, PanoramaRig, project
from .metrics import GroundTruthRecord
from .tracker import Detection

# Joint heights as fractions of stature. The measured span (nose minus
# ankle) is what the pixel-height rule sees, so agent skeletons are scaled
# to make that span equal the rig's body-height prior exactly; only then
# does generate -> localize close the loop with zero bias.
NOSE_FRAC = 0.94
SHOULDER_FRAC = 0.82
HIP_FRAC = 0.52
ANKLE_FRAC = 0.02
MEASURED_SPAN_FRAC = NOSE_FRAC - ANKLE_FRAC

_SKELETON = (
    ("nose", NOSE_FRAC),
    ("left_shoulder", SHOULDER_FRAC),
    ("right_shoulder", SHOULDER_FRAC),
    ("left_hip", HIP_FRAC),
    ("right_hip", HIP_FRAC),
    ("left_ankle", ANKLE_FRAC),
    ("right_ankle", ANKLE_FRAC),
)

_MAX_TURN_RAD = 0.2  # per frame


@dataclass(frozen=True)
class OcclusionEpisode:
    """Agent index plus the [start, start + length) frame window it is hidden."""

    agent: int
    start: int
    length: int


@dataclass
class SceneConfig:
    n_agents: int = 3
    n_frames: int = 60
    arena_radius_m: float = 10.0
    speed_min: float = 0.02  # meters / frame
    speed_max: float = 0.10
    embedding_dim: int = 128
    embedding_noise_std: float = 0.0
    keypoint_noise_px: float = 0.0
    detection_dropout_prob: float = 0.0
    occlusions: list[OcclusionEpisode] = field(default_factory=list)
    overlap_deg: float = 0.0
    seed: int = 0

    def validate(self):
        if self.n_agents < 1 or self.n_frames < 1:
            raise ConfigInvalid("n_agents and n_frames must be at least 1")
        if self.arena_radius_m < 1.0:
            raise ConfigInvalid("arena_radius_m must be at least 1 m")
        if not 0 < self.speed_min <= self.speed_max:
            raise ConfigInvalid("need 0 < speed_min <= speed_max")
        if self.speed_max > self.arena_radius_m / 4:
            raise ConfigInvalid("speed_max must stay below a quarter of the arena radius")
        if self.embedding_dim < 1:
            raise ConfigInvalid("embedding_dim must be at least 1")
        if self.embedding_noise_std < 0 or self.keypoint_noise_px < 0:
            raise ConfigInvalid("noise levels must be nonnegative")
        if not 0.0 <= self.detection_dropout_prob <= 1.0:
            raise ConfigInvalid("detection_dropout_prob must lie in [0, 1]")
        if self.overlap_deg < 0:
            raise ConfigInvalid("overlap_deg must be nonnegative")
        for ep in self.occlusions:
            if not 0 <= ep.agent < self.n_agents:
                raise ConfigInvalid(f"occlusion agent {ep.agent} out of range")
            if ep.start < 0 or ep.length < 1:
                raise ConfigInvalid("occlusion episodes need start >= 0 and length >= 1")


def _unit(vec: np.ndarray) -> np.ndarray:
    return vec / np.linalg.norm(vec)


def base_embedding(identity_seed, dim: int) -> np.ndarray:
    """The fixed unit appearance vector of one identity."""
    rng = np.random.default_rng(identity_seed)
    return _unit(rng.normal(size=dim))


def synth_embedding(identity_seed, noise_std: float, rng, dim: int = 2048) -> np.ndarray:
    """Unit-norm appearance sample for an identity.

    noise_std sets the expected norm of the perturbation relative to the
    unit base vector, so the similarity drop does not depend on dim.
    """
    return _perturb(base_embedding(identity_seed, dim), noise_std, rng)


def _perturb(base: np.ndarray, noise_std: float, rng) -> np.ndarray:
    if noise_std <= 0:
        return base.copy()
    noise = rng.normal(size=base.size) * (noise_std / math.sqrt(base.size))
    return _unit(base + noise)


def _sample_waypoint(rng, r_min, r_max):
    radius = math.sqrt(rng.uniform(r_min**2, r_max**2))
    angle = rng.uniform(0.0, 2.0 * math.pi)
    return np.array([radius * math.cos(angle), radius * math.sin(angle)])


def _agent_path(config: SceneConfig, rng) -> np.ndarray:
    """Waypoint-chasing walk: piecewise-linear with a bounded turn rate.

    Positions stay inside the arena and each frame moves exactly one
    speed step, so the displacement bound holds by construction.
    """
    arena = config.arena_radius_m
    r_min = min(1.5, 0.3 * arena)
    r_max = 0.9 * arena
    pos = _sample_waypoint(rng, r_min, r_max)
    heading = rng.uniform(0.0, 2.0 * math.pi)
    waypoint = _sample_waypoint(rng, r_min, r_max)
    speed = rng.uniform(config.speed_min, config.speed_max)

    path = np.empty((config.n_frames, 2))
    for frame in range(config.n_frames):
        path[frame] = pos
        if np.linalg.norm(waypoint - pos) <= speed:
            waypoint = _sample_waypoint(rng, r_min, r_max)
            speed = rng.uniform(config.speed_min, config.speed_max)
        desired = math.atan2(waypoint[1] - pos[1], waypoint[0] - pos[0])
        turn = (desired - heading + math.pi) % (2.0 * math.pi) - math.pi
        heading += max(-_MAX_TURN_RAD, min(_MAX_TURN_RAD, turn))
        step = pos + speed * np.array([math.cos(heading), math.sin(heading)])
        radius = np.linalg.norm(step)
        if radius > arena:
            step = pos - speed * _unit(pos)  # turn for home, same step length
            waypoint = _sample_waypoint(rng, r_min, r_max)
        elif radius < r_min and np.linalg.norm(pos) > 0:
            step = pos + speed * _unit(pos)
            waypoint = _sample_waypoint(rng, r_min, r_max)
        pos = step
    return path


def _azimuth_deg(x: float, z: float) -> float:
    return math.degrees(math.atan2(x, z)) % 360.0


def _ang_dist_deg(a: float, b: float) -> float:
    return abs((a - b + 180.0) % 360.0 - 180.0)


def _half_gap_deg(rig: PanoramaRig) -> float:
    yaws = sorted(v.yaw_deg for v in rig.views)
    if len(yaws) == 1:
        return 180.0
    gaps = [yaws[i + 1] - yaws[i] for i in range(len(yaws) - 1)]
    gaps.append(360.0 - yaws[-1] + yaws[0])
    return min(gaps) / 2.0


def _covering_views(rig: PanoramaRig, x: float, z: float, overlap_deg: float) -> list[int]:
    """The view whose yaw sector holds the bearing, plus seam neighbors
    when overlap is enabled."""
    azimuth = _azimuth_deg(x, z)
    primary = min(rig.views, key=lambda v: (_ang_dist_deg(azimuth, v.yaw_deg), v.view_id))
    views = [primary.view_id]
    if overlap_deg > 0:
        limit = _half_gap_deg(rig) + overlap_deg
        for view in rig.views:
            if view.view_id == primary.view_id:
                continue
            if _ang_dist_deg(azimuth, view.yaw_deg) <= limit:
                views.append(view.view_id)
    return views


def _skeleton_keypoints(rig, view_id, x, z, stature, noise_px, rng):
    """Project the zero-width stick skeleton standing at (x, z) into a view."""
    keypoints = []
    for name, frac in _SKELETON:
        # Up is negative camera Y; joints sit frac*stature above the ground.
        pix = project(rig, view_id, (x, -frac * stature, z))
        u, v = pix.u, pix.v
        if noise_px > 0:
            u += rng.normal(0.0, noise_px)
            v += rng.normal(0.0, noise_px)
        keypoints.append(Keypoint(name, u, v, 1.0))
    return keypoints


def generate_scene(config: SceneConfig, rig: PanoramaRig, return_links=False):
    """Simulate a scene and return (ground_truth, detections).

    Ground truth covers every agent at every frame; detections thin out
    under dropout and occlusion episodes and carry keypoint and embedding
    noise as configured. With return_links a third list comes back giving,
    for each detection, the agent index that produced it (diagnostics).
    """
    config.validate()
    rng = np.random.default_rng(config.seed)
    paths = [_agent_path(config, rng) for _ in range(config.n_agents)]
    bases = [
        base_embedding([config.seed, 1000 + agent], config.embedding_dim)
        for agent in range(config.n_agents)
    ]
    hidden = set()
    for ep in config.occlusions:
        hidden.update((ep.agent, ep.start + k) for k in range(ep.length))

    stature = rig.body_height_m / MEASURED_SPAN_FRAC
    ground_truth = []
    detections = []
    links = []
    for frame in range(config.n_frames):
        for agent in range(config.n_agents):
            x, z = paths[agent][frame]
            ground_truth.append(GroundTruthRecord(frame, agent, float(x), float(z)))
            if (agent, frame) in hidden:
                continue
            if config.detection_dropout_prob > 0 and rng.random() < config.detection_dropout_prob:
                continue
            embedding = _perturb(bases[agent], config.embedding_noise_std, rng)
            for view_id in _covering_views(rig, x, z, config.overlap_deg):
                try:
                    keypoints = _skeleton_keypoints(
                        rig, view_id, x, z, stature, config.keypoint_noise_px, rng
                    )
                except BehindCamera:
                    continue
                detections.append(Detection(frame, view_id, keypoints, embedding))
                links.append(agent)
    if return_links:
        return ground_truth, detections, links
    return ground_truth, detections
