"""Point-cloud isolation by multi-view mask consensus.

A point is kept when it projects onto mask foreground in at least
``quota * (number of mask-bearing views)`` views. Views without masks never
vote. The default quota of 1.0 is a strict intersection; lowering it
tolerates imperfect masks at the cost of admitting some background.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyCloudError, NoMaskedViewsError, ValidationError
from .geometry import AABB, CameraView, PointCloud, in_mask, project

__all__ = ["MaskingConfig", "mask_point_cloud", "masked_bounding_box", "view_predicate"]

# Guards float quotas like 0.3 * 10 = 2.9999999999999996 from dropping a vote.
_QUOTA_EPS = 1e-9


@dataclass(frozen=True)
class MaskingConfig:
    quota: float = 1.0
    min_depth: float = 1e-6

    def __post_init__(self):
        if not (0.0 < self.quota <= 1.0):
            raise ValidationError(f"masking: quota must be in (0, 1], got {self.quota}")
        if not (self.min_depth >= 0.0 and np.isfinite(self.min_depth)):
            raise ValidationError(f"masking: min_depth must be finite and >= 0, got {self.min_depth}")


def view_predicate(view: CameraView, points, min_depth: float = 1e-6) -> np.ndarray:
    """Per-point visibility vote of one mask-bearing view.

    True where the point is in front of the camera (depth > min_depth) and
    its projection rounds onto mask foreground.
    """
    uv, depth = project(view, points)
    votes = in_mask(view, uv)
    return votes & (depth > min_depth)


def mask_point_cloud(
    cloud: PointCloud, views, cfg: MaskingConfig = MaskingConfig()
) -> PointCloud:
    """Keep points passing the mask predicate in a quota of mask-bearing views.

    Point order is preserved; the result may be empty. Raises
    NoMaskedViewsError when no view has a mask.
    """
    masked_views = [v for v in views if v.mask is not None]
    if not masked_views:
        raise NoMaskedViewsError("masking: no view carries a mask")
    pts = cloud.points
    if len(cloud) == 0:
        return PointCloud(pts, frame_label=cloud.frame_label, metric=cloud.metric)

    counts = np.zeros(len(cloud), dtype=np.int64)
    for view in masked_views:
        counts += view_predicate(view, pts, cfg.min_depth)
    needed = cfg.quota * len(masked_views) - _QUOTA_EPS
    keep = counts >= needed
    return PointCloud(pts[keep], frame_label=cloud.frame_label, metric=cloud.metric)


def masked_bounding_box(cloud: PointCloud, pad_fraction: float = 0.05) -> AABB:
    """Axis-aligned bounds of a cloud, padded per side by a fraction of each extent."""
    if not (pad_fraction >= 0.0 and np.isfinite(pad_fraction)):
        raise ValidationError(f"bounding box: pad_fraction must be finite and >= 0, got {pad_fraction}")
    if len(cloud) == 0:
        raise EmptyCloudError("bounding box: point cloud is empty")
    lo = cloud.points.min(axis=0)
    hi = cloud.points.max(axis=0)
    pad = pad_fraction * (hi - lo)
    return AABB(lo - pad, hi + pad)
