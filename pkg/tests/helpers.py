"""Independent oracles and small builders shared across test modules."""

import itertools

import numpy as np

from panotrack import (
    CameraIntrinsics,
    Keypoint,
    PanoramaRig,
    ViewConfig,
    project,
)

_PERMS: dict[tuple[int, int], np.ndarray] = {}


def brute_force_min_cost(cost: np.ndarray) -> float:
    """Exhaustive minimum over all injections of the smaller side into the larger."""
    cost = np.asarray(cost, dtype=float)
    n, m = cost.shape
    if n > m:
        return brute_force_min_cost(cost.T)
    key = (n, m)
    if key not in _PERMS:
        _PERMS[key] = np.array(list(itertools.permutations(range(m), n)), dtype=int)
    perms = _PERMS[key]
    totals = cost[np.arange(n)[None, :], perms].sum(axis=1)
    return float(totals.min())


def brute_force_best_pairs(cost: np.ndarray):
    """The argmin matching itself, for small matrices."""
    cost = np.asarray(cost, dtype=float)
    n, m = cost.shape
    best_total, best_pairs = None, None
    if n <= m:
        for perm in itertools.permutations(range(m), n):
            total = sum(cost[i, perm[i]] for i in range(n))
            if best_total is None or total < best_total:
                best_total, best_pairs = total, [(i, perm[i]) for i in range(n)]
    else:
        for perm in itertools.permutations(range(n), m):
            total = sum(cost[perm[j], j] for j in range(m))
            if best_total is None or total < best_total:
                best_total, best_pairs = total, [(perm[j], j) for j in range(m)]
    return best_total, best_pairs


def make_rig(fx=500.0, fy=500.0, cx=320.0, cy=240.0, width=640, height=480, body_height_m=1.7,
             yaws=(0.0, 90.0, 180.0, 270.0)):
    intr = CameraIntrinsics(fx, fy, cx, cy)
    views = [ViewConfig(i, yaw, intr, width, height) for i, yaw in enumerate(yaws)]
    return PanoramaRig(views, body_height_m=body_height_m)


def observe_vertical_segment(rig, view_id, x, z, height_m):
    """Forward-projection oracle: the (u_ref, h_body) a person-shaped vertical
    segment of the given metric height standing at (x, z) produces in a view.

    Feet on the ground plane, top of the segment height_m above it (up is
    negative camera Y). Both endpoints share the same image column.
    """
    bottom = project(rig, view_id, (x, 0.0, z))
    top = project(rig, view_id, (x, -height_m, z))
    assert abs(top.u - bottom.u) < 1e-9
    return bottom.u, bottom.v - top.v


def full_stick_pose(u, v_nose, v_ankles=(None, None), v_shoulders=(None, None),
                    v_hips=(None, None), conf=1.0):
    """Convenience pose with vertically stacked joints at one column."""
    kps = [Keypoint("nose", u, v_nose, conf)]
    names = (("left_ankle", "right_ankle"), ("left_shoulder", "right_shoulder"),
             ("left_hip", "right_hip"))
    for (left, right), pair in zip(names, (v_ankles, v_shoulders, v_hips)):
        for name, value in ((left, pair[0]), (right, pair[1])):
            if value is not None:
                kps.append(Keypoint(name, u, value, conf))
    return kps
