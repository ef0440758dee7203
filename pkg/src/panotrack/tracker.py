"""Per-frame track lifecycle: spawn, match, age, coast, retire.

Every live track is predicted forward each frame and competes for that
frame's detections through the combined appearance + trajectory cost.
A match below the cost threshold refreshes the track's lifespan; anything
else ages by one frame, and a track whose lifespan reaches zero is
retired. Unclaimed detections always start new tracks, and coasting
tracks keep reporting their predicted position until they expire.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .association import build_cost_matrix, solve_assignment
from .errors import (
    ConfigInvalid,
    DegenerateHeight,
    InsufficientKeypoints,
    NonMonotoneFrame,
    NonPositiveHeight,
)
from .filtering import KalmanParams, KalmanState, kf_new, kf_predict, kf_update
from .geometry import (
    DEFAULT_BODY_HEIGHT_M,
    DEFAULT_VISIBILITY_TAU,
    Keypoint,
    Location3D,
    PanoramaRig,
    estimate_pixel_height,
    localize,
    merge_cross_view_duplicates,
    reference_column,
)

DEFAULT_MAX_LIFESPAN = 10


@dataclass
class Detection:
    """One person observation in one frame of one view.

    u_ref, h_body and location start empty and are filled by
    localize_detection before the tracker sees the detection.
    """

    frame_id: int
    view_id: int
    keypoints: list[Keypoint]
    embedding: np.ndarray
    u_ref: float | None = None
    h_body: float | None = None
    location: Location3D | None = None


@dataclass
class Track:
    """One tracked identity and its filter, appearance and history."""

    track_id: int
    lifespan: int
    kalman: KalmanState
    embedding: np.ndarray
    history: list[tuple[int, Location3D]]
    predicted: Location3D
    last_view: int | None = None
    last_u: float | None = None
    last_seen_frame: int = -1


@dataclass
class TrackerConfig:
    epsilon: float = 1.0
    max_lifespan: int = DEFAULT_MAX_LIFESPAN
    kalman: KalmanParams = field(default_factory=KalmanParams)
    merge_radius: float = 0.0
    visibility_tau: float = DEFAULT_VISIBILITY_TAU
    body_height_m: float = DEFAULT_BODY_HEIGHT_M
    embedding_momentum: float = 0.0  # 0 replaces outright; >0 blends old into new
    use_appearance: bool = True

    def __post_init__(self):
        # epsilon 0 is a legal degenerate setting: no match can beat it, so
        # every detection spawns a fresh track.
        if self.epsilon < 0:
            raise ConfigInvalid("epsilon must be nonnegative")
        if self.max_lifespan < 1:
            raise ConfigInvalid("max_lifespan must be at least 1")
        if not 0.0 <= self.embedding_momentum < 1.0:
            raise ConfigInvalid("embedding_momentum must lie in [0, 1)")
        if not self.body_height_m > 0:
            raise ConfigInvalid("body_height_m must be positive")


@dataclass(frozen=True)
class TrackletRecord:
    """One identity-stamped ground-plane position for one frame.

    estimated marks positions extrapolated for a coasting track rather
    than observed; those carry no view or image column.
    """

    frame: int
    track_id: int
    x: float
    z: float
    estimated: bool
    view_id: int | None
    u: float | None


def localize_detection(rig: PanoramaRig, detection: Detection, tau=DEFAULT_VISIBILITY_TAU) -> Detection:
    """Fill u_ref, h_body and the ground-plane location from the keypoints."""
    h = estimate_pixel_height(detection.keypoints, tau)
    u = reference_column(detection.keypoints, tau)
    loc = localize(rig, detection.view_id, u, h)
    return replace(detection, u_ref=u, h_body=h, location=loc)


def localize_all(rig, detections, tau=DEFAULT_VISIBILITY_TAU, merge_radius=0.0, on_skip=None):
    """Localize a detection stream, dropping poses the height rules reject.

    on_skip, when given, is called with (detection, exception) for every
    drop. Cross-view duplicates are merged per frame when merge_radius > 0.
    Returns the surviving detections ordered by frame.
    """
    by_frame: dict[int, list[Detection]] = {}
    for det in detections:
        try:
            localized = localize_detection(rig, det, tau)
        except (InsufficientKeypoints, NonPositiveHeight, DegenerateHeight) as exc:
            if on_skip is not None:
                on_skip(det, exc)
            continue
        by_frame.setdefault(localized.frame_id, []).append(localized)
    out = []
    for frame_id in sorted(by_frame):
        frame = by_frame[frame_id]
        if merge_radius > 0:
            frame = merge_cross_view_duplicates(frame, rig, merge_radius)
        out.extend(frame)
    return out


class Tracker:
    """Sequential tracking state machine; one instance per detection stream.

    Steps must be fed strictly increasing frame indices. Frames with no
    detections still age every live track, which is how gaps retire
    identities that never come back.
    """

    def __init__(self, config: TrackerConfig | None = None):
        self.config = config or TrackerConfig()
        self.tracks: list[Track] = []
        self.frames = 0
        self.created = 0
        self.retired = 0
        self._next_id = 1
        self._last_frame: int | None = None

    def step(self, detections, frame_id: int) -> list[TrackletRecord]:
        """Process one frame and return a record for every surviving track."""
        if self._last_frame is not None and frame_id <= self._last_frame:
            raise NonMonotoneFrame(f"frame {frame_id} does not follow {self._last_frame}")
        self._last_frame = frame_id
        self.frames += 1
        detections = list(detections)
        for det in detections:
            if det.location is None:
                raise ValueError("tracker requires localized detections")
        cfg = self.config

        if not self.tracks:
            for det in detections:
                self._spawn(det, frame_id)
        else:
            for track in self.tracks:
                track.kalman, track.predicted = kf_predict(track.kalman)
            cost = build_cost_matrix(
                self.tracks, detections, cfg.body_height_m, use_appearance=cfg.use_appearance
            )
            assignment = solve_assignment(cost)
            for track in self.tracks:
                track.lifespan -= 1
            claimed = set()
            for i, j in assignment.matches:
                if cost[i, j] < cfg.epsilon:
                    self._absorb(self.tracks[i], detections[j], frame_id)
                    claimed.add(j)
            for j, det in enumerate(detections):
                if j not in claimed:
                    self._spawn(det, frame_id)
            survivors = [t for t in self.tracks if t.lifespan > 0]
            self.retired += len(self.tracks) - len(survivors)
            self.tracks = survivors

        out = []
        for track in self.tracks:
            if track.last_seen_frame == frame_id:
                loc = track.history[-1][1]
                out.append(
                    TrackletRecord(
                        frame_id, track.track_id, loc.x, loc.z, False, track.last_view, track.last_u
                    )
                )
            else:
                pred = track.predicted
                out.append(
                    TrackletRecord(frame_id, track.track_id, pred.x, pred.z, True, None, None)
                )
        return out

    def _spawn(self, det: Detection, frame_id: int):
        track = Track(
            track_id=self._next_id,
            lifespan=self.config.max_lifespan,
            kalman=kf_new(det.location, self.config.kalman),
            embedding=np.asarray(det.embedding, dtype=float).ravel(),
            history=[(frame_id, det.location)],
            predicted=det.location,
            last_view=det.view_id,
            last_u=det.u_ref,
            last_seen_frame=frame_id,
        )
        self._next_id += 1
        self.created += 1
        self.tracks.append(track)

    def _absorb(self, track: Track, det: Detection, frame_id: int):
        track.history.append((frame_id, det.location))
        track.lifespan = self.config.max_lifespan
        track.kalman = kf_update(track.kalman, det.location)
        observed = np.asarray(det.embedding, dtype=float).ravel()
        beta = self.config.embedding_momentum
        if beta > 0:
            blended = beta * track.embedding + (1.0 - beta) * observed
            norm = np.linalg.norm(blended)
            track.embedding = blended / norm if norm > 0 else observed
        else:
            track.embedding = observed
        track.last_view = det.view_id
        track.last_u = det.u_ref
        track.last_seen_frame = frame_id


def run_tracker(tracker: Tracker, detections) -> list[TrackletRecord]:
    """Drive a tracker over a localized detection stream grouped by frame.

    Every integer frame between the first and the last seen is stepped, so
    frames absent from the stream count as empty. Output is ordered by
    (frame, track_id).
    """
    by_frame: dict[int, list[Detection]] = {}
    for det in detections:
        by_frame.setdefault(det.frame_id, []).append(det)
    if not by_frame:
        return []
    out = []
    for frame_id in range(min(by_frame), max(by_frame) + 1):
        out.extend(tracker.step(by_frame.get(frame_id, ()), frame_id))
    return out


def run(config: TrackerConfig, detections) -> list[TrackletRecord]:
    """Track a whole localized detection stream with a fresh tracker."""
    return run_tracker(Tracker(config), detections)
