"""JSONL wire formats: detections, tracklets, ground truth, localizations.

One self-describing JSON object per line. Schema violations raise
SchemaError naming the offending file line; blank lines are ignored but
keep their place in the numbering.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigInvalid, SchemaError
from .geometry import COCO_KEYPOINT_SET, Keypoint
from .metrics import GroundTruthRecord
from .synth import OcclusionEpisode, SceneConfig
from .tracker import Detection, TrackletRecord


@dataclass(frozen=True)
class LocalizationRecord:
    """A per-detection ground-plane position, no identity attached."""

    frame: int
    view: int
    x: float
    z: float


def _fail(path, lineno, message):
    raise SchemaError(f"{path}:{lineno}: {message}")


def _iter_lines(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                _fail(path, lineno, f"invalid JSON ({exc.msg})")
            if not isinstance(obj, dict):
                _fail(path, lineno, "line is not a JSON object")
            yield lineno, obj


def _get(obj, key, path, lineno):
    if key not in obj:
        _fail(path, lineno, f"missing field {key!r}")
    return obj[key]


def _int_field(obj, key, path, lineno):
    val = _get(obj, key, path, lineno)
    if isinstance(val, bool) or not isinstance(val, int):
        _fail(path, lineno, f"field {key!r} must be an integer")
    return val


def _num_field(obj, key, path, lineno, allow_none=False):
    val = _get(obj, key, path, lineno)
    if val is None and allow_none:
        return None
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        _fail(path, lineno, f"field {key!r} must be a number")
    if not math.isfinite(val):
        _fail(path, lineno, f"field {key!r} must be finite")
    return float(val)


def _bool_field(obj, key, path, lineno):
    val = _get(obj, key, path, lineno)
    if not isinstance(val, bool):
        _fail(path, lineno, f"field {key!r} must be a boolean")
    return val


def read_detections_with_lines(path) -> list[tuple[int, Detection]]:
    """Parse a detection file, keeping each record's line number."""
    out = []
    embedding_dim = None
    for lineno, obj in _iter_lines(path):
        frame = _int_field(obj, "frame", path, lineno)
        if frame < 0:
            _fail(path, lineno, "field 'frame' must be nonnegative")
        view = _int_field(obj, "view", path, lineno)
        raw_kps = _get(obj, "keypoints", path, lineno)
        if not isinstance(raw_kps, list) or not raw_kps:
            _fail(path, lineno, "field 'keypoints' must be a non-empty array")
        keypoints = []
        for kp in raw_kps:
            if not isinstance(kp, dict):
                _fail(path, lineno, "each keypoint must be an object")
            name = _get(kp, "name", path, lineno)
            if name not in COCO_KEYPOINT_SET:
                _fail(path, lineno, f"unknown keypoint name {name!r}")
            u = _num_field(kp, "u", path, lineno)
            v = _num_field(kp, "v", path, lineno)
            conf = _num_field(kp, "conf", path, lineno)
            if not 0.0 <= conf <= 1.0:
                _fail(path, lineno, f"keypoint confidence {conf} outside [0, 1]")
            keypoints.append(Keypoint(name, u, v, conf))
        raw_emb = _get(obj, "embedding", path, lineno)
        if not isinstance(raw_emb, list) or not raw_emb:
            _fail(path, lineno, "field 'embedding' must be a non-empty array")
        if any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in raw_emb):
            _fail(path, lineno, "embedding entries must be numbers")
        embedding = np.asarray(raw_emb, dtype=float)
        if not np.isfinite(embedding).all():
            _fail(path, lineno, "embedding entries must be finite")
        if embedding_dim is None:
            embedding_dim = embedding.size
        elif embedding.size != embedding_dim:
            _fail(
                path,
                lineno,
                f"embedding length {embedding.size} differs from earlier {embedding_dim}",
            )
        out.append((lineno, Detection(frame, view, keypoints, embedding)))
    return out


def read_detections(path) -> list[Detection]:
    return [det for _, det in read_detections_with_lines(path)]


def write_detections(path, detections):
    with open(path, "w", encoding="utf-8") as fh:
        for d in detections:
            row = {
                "frame": d.frame_id,
                "view": d.view_id,
                "keypoints": [
                    {"name": k.name, "u": k.u, "v": k.v, "conf": k.confidence}
                    for k in d.keypoints
                ],
                "embedding": [float(x) for x in np.asarray(d.embedding).ravel()],
            }
            fh.write(json.dumps(row, separators=(",", ":")) + "\n")


def read_tracklets(path) -> list[TrackletRecord]:
    out = []
    seen = set()
    for lineno, obj in _iter_lines(path):
        frame = _int_field(obj, "frame", path, lineno)
        track_id = _int_field(obj, "id", path, lineno)
        if (frame, track_id) in seen:
            _fail(path, lineno, f"duplicate (frame, id) pair ({frame}, {track_id})")
        seen.add((frame, track_id))
        x = _num_field(obj, "x", path, lineno)
        z = _num_field(obj, "z", path, lineno)
        estimated = _bool_field(obj, "estimated", path, lineno)
        view = _get(obj, "view", path, lineno)
        if view is not None and (isinstance(view, bool) or not isinstance(view, int)):
            _fail(path, lineno, "field 'view' must be an integer or null")
        u = _num_field(obj, "u", path, lineno, allow_none=True)
        out.append(TrackletRecord(frame, track_id, x, z, estimated, view, u))
    return out


def write_tracklets(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            row = {
                "frame": r.frame,
                "id": r.track_id,
                "x": r.x,
                "z": r.z,
                "estimated": r.estimated,
                "view": r.view_id,
                "u": r.u,
            }
            fh.write(json.dumps(row, separators=(",", ":")) + "\n")


def read_ground_truth(path) -> list[GroundTruthRecord]:
    out = []
    seen = set()
    for lineno, obj in _iter_lines(path):
        frame = _int_field(obj, "frame", path, lineno)
        identity = _int_field(obj, "id", path, lineno)
        if (frame, identity) in seen:
            _fail(path, lineno, f"duplicate (frame, id) pair ({frame}, {identity})")
        seen.add((frame, identity))
        x = _num_field(obj, "x", path, lineno)
        z = _num_field(obj, "z", path, lineno)
        out.append(GroundTruthRecord(frame, identity, x, z))
    return out


def write_ground_truth(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            row = {"frame": r.frame, "id": r.identity, "x": r.x, "z": r.z}
            fh.write(json.dumps(row, separators=(",", ":")) + "\n")


def read_localizations(path) -> list[LocalizationRecord]:
    out = []
    for lineno, obj in _iter_lines(path):
        out.append(
            LocalizationRecord(
                _int_field(obj, "frame", path, lineno),
                _int_field(obj, "view", path, lineno),
                _num_field(obj, "x", path, lineno),
                _num_field(obj, "z", path, lineno),
            )
        )
    return out


def write_localizations(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            row = {"frame": r.frame, "view": r.view, "x": r.x, "z": r.z}
            fh.write(json.dumps(row, separators=(",", ":")) + "\n")


_SCENE_KEYS = {
    "n_agents",
    "n_frames",
    "arena_radius_m",
    "speed_min",
    "speed_max",
    "embedding_dim",
    "embedding_noise_std",
    "keypoint_noise_px",
    "detection_dropout_prob",
    "occlusions",
    "overlap_deg",
    "seed",
}


def read_scene_config(path) -> SceneConfig:
    """Load a scene config; absent keys keep their defaults."""
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigInvalid(f"scene config is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigInvalid("scene config must be a JSON object")
    unknown = set(data) - _SCENE_KEYS
    if unknown:
        raise ConfigInvalid(f"unknown scene config keys: {sorted(unknown)}")
    kwargs = dict(data)
    if "occlusions" in kwargs:
        episodes = []
        for ep in kwargs["occlusions"]:
            try:
                episodes.append(
                    OcclusionEpisode(int(ep["agent"]), int(ep["start"]), int(ep["length"]))
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigInvalid(f"bad occlusion episode {ep!r}: {exc}") from exc
        kwargs["occlusions"] = episodes
    try:
        config = SceneConfig(**kwargs)
    except TypeError as exc:
        raise ConfigInvalid(f"bad scene config: {exc}") from exc
    config.validate()
    return config
