"""Camera geometry primitives: intrinsics, poses, views, clouds, projection.

Conventions used throughout the package:

* Poses are world-to-camera: ``x_cam = R @ x_world + t``.
* Projection is ``(u, v, w)^T = K [R|t] P_h`` with ``p = (u/w, v/w)``; a point
  is in front of the camera iff ``w > 0``.
* Pixel (row, col) of a mask covers the half-open square
  ``[col - 0.5, col + 0.5) x [row - 0.5, row + 0.5)`` in continuous (u, v),
  i.e. continuous coordinates round half-up to the pixel index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import MissingMaskError, ValidationError

__all__ = [
    "AABB",
    "CameraView",
    "Intrinsics",
    "PointCloud",
    "Pose",
    "camera_center",
    "in_mask",
    "project",
]

# Rotations with more orthonormality drift than this are re-orthonormalized
# on construction (polar decomposition); beyond repair -> ValidationError.
_ROTATION_DRIFT_TOL = 1e-9


def _as_array(value, shape, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=np.float64)
    if arr.shape != shape:
        raise ValidationError(f"{name}: expected shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name}: contains non-finite values")
    return arr


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=np.float64, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class Intrinsics:
    """Pinhole intrinsics with the pixel raster size they refer to."""

    fx: float
    fy: float
    cx: float
    cy: float
    width: int
    height: int

    def __post_init__(self):
        if not (self.fx > 0 and self.fy > 0):
            raise ValidationError(f"intrinsics: focal lengths must be positive, got fx={self.fx}, fy={self.fy}")
        if self.width <= 0 or self.height <= 0:
            raise ValidationError(f"intrinsics: raster size must be positive, got {self.width}x{self.height}")
        if not (0 <= self.cx < self.width and 0 <= self.cy < self.height):
            raise ValidationError(
                f"intrinsics: principal point ({self.cx}, {self.cy}) outside raster {self.width}x{self.height}"
            )

    @property
    def matrix(self) -> np.ndarray:
        """3x3 calibration matrix K."""
        return np.array(
            [[self.fx, 0.0, self.cx], [0.0, self.fy, self.cy], [0.0, 0.0, 1.0]]
        )


@dataclass(frozen=True)
class Pose:
    """World-to-camera rigid transform: x_cam = rotation @ x_world + translation."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        r = _as_array(self.rotation, (3, 3), "pose.rotation")
        t = _as_array(self.translation, (3,), "pose.translation")
        drift = np.abs(r.T @ r - np.eye(3)).max()
        if drift > _ROTATION_DRIFT_TOL:
            # Polar decomposition: nearest orthonormal matrix in Frobenius norm.
            u, _, vt = np.linalg.svd(r)
            r = u @ vt
            if np.abs(r.T @ r - np.eye(3)).max() > _ROTATION_DRIFT_TOL:
                raise ValidationError("pose.rotation: not a rotation matrix (orthonormalization failed)")
        if np.linalg.det(r) < 0:
            raise ValidationError("pose.rotation: determinant is negative (reflection, not a rotation)")
        object.__setattr__(self, "rotation", _freeze(r))
        object.__setattr__(self, "translation", _freeze(t))

    def camera_center(self) -> np.ndarray:
        """World-frame camera center: c = -R^T t (satisfies R c + t = 0)."""
        return -self.rotation.T @ self.translation

    @staticmethod
    def from_camera_to_world(rotation, translation) -> "Pose":
        """Build from a camera-to-world transform (x_world = R x_cam + t)."""
        r = _as_array(rotation, (3, 3), "pose.rotation")
        t = _as_array(translation, (3,), "pose.translation")
        return Pose(rotation=r.T, translation=-r.T @ t)


def camera_center(pose: Pose) -> np.ndarray:
    """Functional alias for Pose.camera_center."""
    return pose.camera_center()


@dataclass(frozen=True)
class CameraView:
    """One capture: intrinsics + pose, optionally a binary mask raster."""

    intrinsics: Intrinsics
    pose: Pose
    mask: Optional[np.ndarray] = None
    image_path: str = ""

    def __post_init__(self):
        if self.mask is not None:
            mask = np.asarray(self.mask)
            expected = (self.intrinsics.height, self.intrinsics.width)
            if mask.shape != expected:
                raise ValidationError(
                    f"view mask: raster {mask.shape[1] if mask.ndim == 2 else '?'}x"
                    f"{mask.shape[0] if mask.ndim == 2 else '?'} does not match intrinsics "
                    f"{self.intrinsics.width}x{self.intrinsics.height}"
                )
            mask = mask.astype(bool, copy=True)
            mask.flags.writeable = False
            object.__setattr__(self, "mask", mask)


@dataclass(frozen=True)
class PointCloud:
    """Points in a named coordinate frame; `metric` marks real-world scale."""

    points: np.ndarray
    frame_label: str = "sfm"
    metric: bool = False

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise ValidationError(f"point cloud: expected shape (n, 3), got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValidationError("point cloud: contains non-finite coordinates")
        pts = pts.copy()
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class AABB:
    """Axis-aligned box [lo, hi] in world coordinates."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = _as_array(self.lo, (3,), "aabb.lo")
        hi = _as_array(self.hi, (3,), "aabb.hi")
        if np.any(hi < lo):
            raise ValidationError(f"aabb: hi {hi.tolist()} below lo {lo.tolist()}")
        object.__setattr__(self, "lo", _freeze(lo))
        object.__setattr__(self, "hi", _freeze(hi))

    @property
    def extent(self) -> np.ndarray:
        return self.hi - self.lo


def project(view: CameraView, points) -> tuple[np.ndarray, np.ndarray]:
    """Project world points through a view.

    Args:
        view: camera to project through.
        points: array (..., 3) of world coordinates.

    Returns:
        (uv, depth): uv has shape (..., 2), depth shape (...,). depth is the
        w component of K [R|t] P; the pixel coordinates are only meaningful
        where depth > 0 (behind-camera points get uv = nan).
    """
    pts = np.asarray(points, dtype=np.float64)
    squeeze = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[-1] != 3:
        raise ValidationError(f"project: expected (..., 3) points, got {pts.shape}")

    pose, intr = view.pose, view.intrinsics
    cam = pts @ pose.rotation.T + pose.translation
    depth = cam[..., 2]
    with np.errstate(divide="ignore", invalid="ignore"):
        u = intr.fx * cam[..., 0] / depth + intr.cx
        v = intr.fy * cam[..., 1] / depth + intr.cy
    uv = np.stack([u, v], axis=-1)
    uv[depth <= 0] = np.nan
    if squeeze:
        return uv[0], depth[0]
    return uv, depth


def in_mask(view: CameraView, uv) -> np.ndarray:
    """True where continuous pixel coordinates land on a foreground mask pixel.

    (u, v) rounds half-up to the nearest pixel index on both axes; anything
    rounding outside the raster is background. Raises MissingMaskError when
    the view has no mask.
    """
    if view.mask is None:
        raise MissingMaskError(f"view {view.image_path or '<unnamed>'} has no mask")
    coords = np.asarray(uv, dtype=np.float64)
    squeeze = coords.ndim == 1
    coords = np.atleast_2d(coords)

    with np.errstate(invalid="ignore"):
        cols = np.floor(coords[..., 0] + 0.5)
        rows = np.floor(coords[..., 1] + 0.5)
    valid = (
        np.isfinite(cols)
        & np.isfinite(rows)
        & (cols >= 0)
        & (cols < view.intrinsics.width)
        & (rows >= 0)
        & (rows < view.intrinsics.height)
    )
    out = np.zeros(coords.shape[:-1], dtype=bool)
    if np.any(valid):
        out[valid] = view.mask[rows[valid].astype(np.int64), cols[valid].astype(np.int64)]
    if squeeze:
        return out[0]
    return out
