"""Metric alignment: closed-form similarity estimation between point sets.

The reconstructed scene lives in an arbitrary photogrammetric frame; the
AR session reports camera centers in meters. Estimating the similarity
(scale, rotation, translation) that maps reconstructed camera centers onto
the AR-reported ones and applying it to the cloud and views puts the whole
scene on a metric footing. Volumes scale by s^3 under a similarity with
scale s, so getting s right is what makes the final volume real-world.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGeometryError, NumericalFailureError, ValidationError
from .geometry import CameraView, PointCloud, Pose, _as_array, _freeze

__all__ = [
    "SimilarityTransform",
    "apply_similarity",
    "apply_similarity_to_views",
    "estimate_similarity",
]

# Centered source covariance needs rank >= 2 for a unique rotation; singular
# values below this fraction of the largest count as zero.
_RANK_TOL = 1e-9


@dataclass(frozen=True)
class SimilarityTransform:
    """p -> scale * rotation @ p + translation."""

    scale: float
    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        if not (np.isfinite(self.scale) and self.scale > 0):
            raise ValidationError(f"similarity: scale must be positive and finite, got {self.scale}")
        r = _as_array(self.rotation, (3, 3), "similarity.rotation")
        t = _as_array(self.translation, (3,), "similarity.translation")
        if np.abs(r.T @ r - np.eye(3)).max() > 1e-9 or np.linalg.det(r) < 0:
            raise ValidationError("similarity.rotation: not a rotation matrix")
        object.__setattr__(self, "rotation", _freeze(r))
        object.__setattr__(self, "translation", _freeze(t))

    def apply(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=np.float64)
        return self.scale * (pts @ self.rotation.T) + self.translation

    def inverse(self) -> "SimilarityTransform":
        inv_s = 1.0 / self.scale
        inv_r = self.rotation.T
        return SimilarityTransform(inv_s, inv_r, -inv_s * (inv_r @ self.translation))

    @staticmethod
    def identity() -> "SimilarityTransform":
        return SimilarityTransform(1.0, np.eye(3), np.zeros(3))


def estimate_similarity(
    source, target, trim_fraction: float = 0.0
) -> tuple[SimilarityTransform, float]:
    """Least-squares similarity aligning source points onto target points.

    Closed-form solution via the SVD of the cross-covariance; the sign of
    det(U)det(V) guards against reflections. Source and target are (n, 3)
    arrays of corresponding points, n >= 3, source not all collinear.

    Args:
        source: points in the frame to be rescaled.
        target: corresponding points in the destination (metric) frame.
        trim_fraction: if > 0, refit once after dropping that fraction of
            the correspondences with the largest residuals (outlier guard).

    Returns:
        (transform, residual_rms) with residual_rms the RMS of
        ``|transform.apply(source) - target|`` over the points used.
    """
    src = np.asarray(source, dtype=np.float64)
    tgt = np.asarray(target, dtype=np.float64)
    if src.ndim != 2 or src.shape[1] != 3 or src.shape != tgt.shape:
        raise ValidationError(
            f"estimate_similarity: need matching (n, 3) arrays, got {src.shape} and {tgt.shape}"
        )
    if not (np.all(np.isfinite(src)) and np.all(np.isfinite(tgt))):
        raise ValidationError("estimate_similarity: non-finite coordinates")
    if not 0.0 <= trim_fraction < 0.5:
        raise ValidationError(f"estimate_similarity: trim_fraction must be in [0, 0.5), got {trim_fraction}")

    xf, rms = _umeyama(src, tgt)
    if trim_fraction > 0.0:
        residuals = np.linalg.norm(xf.apply(src) - tgt, axis=1)
        n_drop = int(np.floor(trim_fraction * len(src)))
        if n_drop > 0 and len(src) - n_drop >= 3:
            keep = np.argsort(residuals, kind="stable")[: len(src) - n_drop]
            keep.sort()
            xf, rms = _umeyama(src[keep], tgt[keep])
    return xf, rms


def _umeyama(src: np.ndarray, tgt: np.ndarray) -> tuple[SimilarityTransform, float]:
    n = src.shape[0]
    if n < 3:
        raise DegenerateGeometryError(f"estimate_similarity: need >= 3 correspondences, got {n}")

    mu_src = src.mean(axis=0)
    mu_tgt = tgt.mean(axis=0)
    x = src - mu_src
    y = tgt - mu_tgt

    cov = (y.T @ x) / n
    var_src = (x * x).sum() / n
    sv = np.linalg.svd(x, compute_uv=False)
    if var_src <= 0 or sv[1] <= _RANK_TOL * sv[0]:
        raise DegenerateGeometryError("estimate_similarity: source points are collinear or coincident")

    u, d, vt = np.linalg.svd(cov)
    s_diag = np.ones(3)
    if np.linalg.det(u) * np.linalg.det(vt) < 0:
        s_diag[2] = -1.0
    rot = u @ np.diag(s_diag) @ vt
    scale = float((d * s_diag).sum() / var_src)
    if not np.isfinite(scale) or scale <= 0:
        raise NumericalFailureError(f"estimate_similarity: recovered scale {scale} is not usable")
    trans = mu_tgt - scale * (rot @ mu_src)

    xf = SimilarityTransform(scale, rot, trans)
    rms = float(np.sqrt(np.mean(np.sum((xf.apply(src) - tgt) ** 2, axis=1))))
    return xf, rms


def apply_similarity(xf: SimilarityTransform, cloud: PointCloud) -> PointCloud:
    """Map a cloud into the metric frame; relabels it and sets the metric flag."""
    return PointCloud(points=xf.apply(cloud.points), frame_label="metric", metric=True)


def apply_similarity_to_views(xf: SimilarityTransform, views) -> list[CameraView]:
    """Rewrite poses so views observe the transformed world consistently.

    With world points mapped by y = s R x + t, the new pose (R_v R^T,
    s t_v - R_v R^T t) reprojects y to the same pixel the old pose gave x;
    camera centers transform exactly like world points (c' = s R c + t).
    """
    out = []
    for view in views:
        r_new = view.pose.rotation @ xf.rotation.T
        t_new = xf.scale * view.pose.translation - r_new @ xf.translation
        out.append(
            CameraView(
                intrinsics=view.intrinsics,
                pose=Pose(rotation=r_new, translation=t_new),
                mask=view.mask,
                image_path=view.image_path,
            )
        )
    return out
