"""Appearance and motion costs for frame-to-frame identity matching.

The cost of pairing a track with a detection adds two unit-scale terms:
one minus the cosine similarity of their appearance embeddings, and an
exponential kernel on the ground-plane gap between the track's predicted
position and the detected one. The optimal pairing over a whole frame is
a minimum-cost bipartite assignment.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DimensionMismatch, NonFiniteCost, ZeroNormEmbedding
from .geometry import as_xz

# Padding cost for rectangular assignment problems. Strictly above the
# largest combined cost (trajectory < 1 plus appearance <= 2), and because
# padding is constant it never changes which real pairs win.
PAD_COST = 10.0


def appearance_cost(a, b) -> float:
    """One minus the cosine similarity of two embeddings.

    Range [0, 2] in general, [0, 1] when all components are nonnegative
    (e.g. post-ReLU features).
    """
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.shape != b.shape:
        raise DimensionMismatch(f"embedding dimensions differ: {a.size} vs {b.size}")
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise ZeroNormEmbedding("cannot cosine-compare a zero-norm embedding")
    return float(np.clip(1.0 - float(a @ b) / (na * nb), 0.0, 2.0))


def trajectory_cost(predicted, detected, body_height_m: float) -> float:
    """Exponential-kernel distance between predicted and detected locations.

    The squared ground-plane gap is normalized by the body height before
    the kernel, keeping the value in [0, 1) on the same scale as the
    appearance term.
    """
    px, pz = as_xz(predicted)
    dx, dz = as_xz(detected)
    d2 = (px - dx) ** 2 + (pz - dz) ** 2
    return 1.0 - math.exp(-d2 / body_height_m**2)


def _stack_embeddings(items, side):
    vecs = [np.asarray(it.embedding, dtype=float).ravel() for it in items]
    dims = {v.size for v in vecs}
    if len(dims) != 1:
        raise DimensionMismatch(f"{side} embeddings have mixed dimensions {sorted(dims)}")
    mat = np.stack(vecs)
    norms = np.linalg.norm(mat, axis=1)
    if np.any(norms == 0.0):
        raise ZeroNormEmbedding(f"zero-norm embedding among {side}")
    return mat / norms[:, None]


def build_cost_matrix(tracks, detections, body_height_m: float, use_appearance=True) -> np.ndarray:
    """Pairwise matching costs, rows = tracks, columns = detections.

    Each track contributes its current-frame predicted location and stored
    embedding, each detection its measured location and embedding. Entries
    are the trajectory cost plus, unless ablated, the appearance cost.
    """
    n, m = len(tracks), len(detections)
    if n == 0 or m == 0:
        return np.zeros((n, m))
    pred = np.array([as_xz(t.predicted) for t in tracks])
    meas = np.array([as_xz(d.location) for d in detections])
    gap2 = ((pred[:, None, :] - meas[None, :, :]) ** 2).sum(axis=2)
    cost = 1.0 - np.exp(-gap2 / body_height_m**2)
    if use_appearance:
        et = _stack_embeddings(tracks, "tracks")
        ed = _stack_embeddings(detections, "detections")
        if et.shape[1] != ed.shape[1]:
            raise DimensionMismatch(
                f"track embeddings are {et.shape[1]}-d but detections are {ed.shape[1]}-d"
            )
        cost = cost + np.clip(1.0 - et @ ed.T, 0.0, 2.0)
    return cost


@dataclass
class Assignment:
    """A bipartite matching plus the rows and columns left unmatched."""

    matches: list[tuple[int, int]]
    unmatched_rows: list[int]
    unmatched_cols: list[int]


def solve_assignment(cost, pad_cost=PAD_COST) -> Assignment:
    """Minimum-total-cost matching of size min(rows, cols).

    Rectangular inputs are padded square with a constant; padding cannot
    change which real pairs are chosen, and padded pairs come back as
    unmatched rows or columns. Matches are reported sorted by row index.
    """
    cost = np.asarray(cost, dtype=float)
    if cost.ndim != 2:
        raise ValueError("cost matrix must be 2-D")
    n, m = cost.shape
    if n == 0 or m == 0:
        return Assignment([], list(range(n)), list(range(m)))
    if not np.isfinite(cost).all():
        raise NonFiniteCost("cost matrix contains NaN or infinite entries")
    k = max(n, m)
    padded = np.full((k, k), float(pad_cost))
    padded[:n, :m] = cost
    rows, cols = linear_sum_assignment(padded)
    matches = [(int(i), int(j)) for i, j in zip(rows, cols) if i < n and j < m]
    matched_rows = {i for i, _ in matches}
    matched_cols = {j for _, j in matches}
    return Assignment(
        matches,
        [i for i in range(n) if i not in matched_rows],
        [j for j in range(m) if j not in matched_cols],
    )
