"""Analytic test solids: inside tests, ray intersection, surface sampling.

These drive the synthetic capture generator: silhouettes come from hull
points (or the closed-form conic for spheres), clouds from area-weighted
surface sampling, and the closed-form volume is the ground truth the
pipeline is judged against. `dilation` grows a solid slightly (sphere
radius, box extents, cylinder radius and height) for conservative ray
queries.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

__all__ = ["Box", "Cylinder", "Solid", "Sphere", "make_solid"]


def _center(value) -> np.ndarray:
    arr = np.asarray(value, dtype=np.float64)
    if arr.shape != (3,) or not np.all(np.isfinite(arr)):
        raise ValidationError(f"solid center: expected 3 finite coordinates, got {value!r}")
    return arr


@dataclass(frozen=True)
class Sphere:
    radius: float
    center: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        if not (self.radius > 0 and np.isfinite(self.radius)):
            raise ValidationError(f"sphere: radius must be positive, got {self.radius}")
        object.__setattr__(self, "center", _center(self.center))

    def volume_m3(self) -> float:
        return 4.0 / 3.0 * np.pi * self.radius**3

    def bbox_extents(self) -> np.ndarray:
        return np.full(3, 2.0 * self.radius)

    def contains(self, points) -> np.ndarray:
        d = np.asarray(points, dtype=np.float64) - self.center
        return (d * d).sum(axis=-1) <= self.radius**2

    def ray_hit(self, origin, dirs, dilation: float = 0.0) -> np.ndarray:
        """True per ray iff origin + t*dir meets the solid for some t > 0."""
        r = self.radius + dilation
        d = np.asarray(dirs, dtype=np.float64)
        m = np.asarray(origin, dtype=np.float64) - self.center
        a = (d * d).sum(axis=-1)
        b = 2.0 * (d @ m)
        c = m @ m - r * r
        disc = b * b - 4.0 * a * c
        hit = disc >= 0.0
        sq = np.sqrt(np.where(hit, disc, 0.0))
        t_far = (-b + sq) / (2.0 * a)
        return hit & (t_far > 0.0)

    def surface_points(self, n: int, rng: np.random.Generator) -> np.ndarray:
        v = rng.standard_normal((n, 3))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        return self.center + self.radius * v


@dataclass(frozen=True)
class Box:
    extents: np.ndarray  # full edge lengths
    center: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        ext = np.asarray(self.extents, dtype=np.float64)
        if ext.shape != (3,) or not np.all(np.isfinite(ext)) or np.any(ext <= 0):
            raise ValidationError(f"box: extents must be 3 positive lengths, got {self.extents!r}")
        object.__setattr__(self, "extents", ext)
        object.__setattr__(self, "center", _center(self.center))

    def volume_m3(self) -> float:
        return float(np.prod(self.extents))

    def bbox_extents(self) -> np.ndarray:
        return self.extents.copy()

    def contains(self, points) -> np.ndarray:
        d = np.abs(np.asarray(points, dtype=np.float64) - self.center)
        return np.all(d <= self.extents / 2.0, axis=-1)

    def hull_points(self) -> np.ndarray:
        """The 8 corners; their projection hulls to the exact silhouette."""
        half = self.extents / 2.0
        signs = np.array([[x, y, z] for z in (-1, 1) for y in (-1, 1) for x in (-1, 1)], dtype=np.float64)
        return self.center + signs * half

    def ray_hit(self, origin, dirs, dilation: float = 0.0) -> np.ndarray:
        half = self.extents / 2.0 + dilation
        o = np.asarray(origin, dtype=np.float64) - self.center
        d = np.asarray(dirs, dtype=np.float64)
        with np.errstate(divide="ignore", invalid="ignore"):
            t1 = (-half - o) / d
            t2 = (half - o) / d
        # fmin/fmax drop the NaN produced by 0/0 when a ray grazes a slab face.
        near = np.fmin(t1, t2).max(axis=-1)
        far = np.fmax(t1, t2).min(axis=-1)
        return far >= np.maximum(near, 0.0)

    def surface_points(self, n: int, rng: np.random.Generator) -> np.ndarray:
        half = self.extents / 2.0
        ex, ey, ez = self.extents
        face_areas = np.array([ey * ez, ey * ez, ex * ez, ex * ez, ex * ey, ex * ey])
        faces = rng.choice(6, size=n, p=face_areas / face_areas.sum())
        uv = rng.uniform(-1.0, 1.0, size=(n, 2))
        pts = np.empty((n, 3))
        for f in range(6):
            sel = faces == f
            axis, side = divmod(f, 2)
            others = [a for a in range(3) if a != axis]
            pts[sel, axis] = half[axis] if side == 0 else -half[axis]
            pts[sel, others[0]] = uv[sel, 0] * half[others[0]]
            pts[sel, others[1]] = uv[sel, 1] * half[others[1]]
        return self.center + pts


@dataclass(frozen=True)
class Cylinder:
    """Solid cylinder with its axis along z."""

    radius: float
    height: float
    center: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        if not (self.radius > 0 and np.isfinite(self.radius)):
            raise ValidationError(f"cylinder: radius must be positive, got {self.radius}")
        if not (self.height > 0 and np.isfinite(self.height)):
            raise ValidationError(f"cylinder: height must be positive, got {self.height}")
        object.__setattr__(self, "center", _center(self.center))

    def volume_m3(self) -> float:
        return float(np.pi * self.radius**2 * self.height)

    def bbox_extents(self) -> np.ndarray:
        return np.array([2.0 * self.radius, 2.0 * self.radius, self.height])

    def contains(self, points) -> np.ndarray:
        d = np.asarray(points, dtype=np.float64) - self.center
        radial = d[..., 0] ** 2 + d[..., 1] ** 2 <= self.radius**2
        return radial & (np.abs(d[..., 2]) <= self.height / 2.0)

    def hull_points(self, segments: int = 96) -> np.ndarray:
        """Rim vertices of a circumscribed prism (contains the cylinder).

        The prism's cross-section is a regular polygon tangent to the circular
        one, so its projected hull covers the true silhouette from any outside
        viewpoint.  Radial overshoot is r*(sec(pi/k)-1), ~0.05% of r at k=96.
        """
        if segments < 3:
            raise ValueError("segments must be >= 3")
        ang = 2.0 * np.pi * np.arange(segments) / segments
        r = self.radius / np.cos(np.pi / segments)
        ring = np.stack([r * np.cos(ang), r * np.sin(ang)], axis=1)
        top = np.column_stack([ring, np.full(segments, self.height / 2.0)])
        bot = np.column_stack([ring, np.full(segments, -self.height / 2.0)])
        return self.center + np.vstack([top, bot])

    def ray_hit(self, origin, dirs, dilation: float = 0.0) -> np.ndarray:
        r = self.radius + dilation
        hh = self.height / 2.0 + dilation
        o = np.asarray(origin, dtype=np.float64) - self.center
        d = np.asarray(dirs, dtype=np.float64)

        # t interval inside the infinite cylinder x^2 + y^2 <= r^2.
        a = d[..., 0] ** 2 + d[..., 1] ** 2
        b = 2.0 * (o[0] * d[..., 0] + o[1] * d[..., 1])
        c = o[0] ** 2 + o[1] ** 2 - r * r
        disc = b * b - 4.0 * a * c
        ok_quad = disc >= 0.0
        sq = np.sqrt(np.where(ok_quad, disc, 0.0))
        with np.errstate(divide="ignore", invalid="ignore"):
            q_lo = (-b - sq) / (2.0 * a)
            q_hi = (-b + sq) / (2.0 * a)
        vertical = a == 0.0
        inside_circle = c <= 0.0
        q_lo = np.where(vertical, np.where(inside_circle, -np.inf, np.inf), q_lo)
        q_hi = np.where(vertical, np.where(inside_circle, np.inf, -np.inf), q_hi)
        ok_quad = ok_quad | (vertical & inside_circle)

        # t interval inside the z slab |z| <= hh.
        dz = d[..., 2]
        with np.errstate(divide="ignore", invalid="ignore"):
            s1 = (-hh - o[2]) / dz
            s2 = (hh - o[2]) / dz
        z_lo = np.fmin(s1, s2)
        z_hi = np.fmax(s1, s2)
        flat = dz == 0.0
        inside_slab = np.abs(o[2]) <= hh
        z_lo = np.where(flat, np.where(inside_slab, -np.inf, np.inf), z_lo)
        z_hi = np.where(flat, np.where(inside_slab, np.inf, -np.inf), z_hi)

        lo = np.maximum(q_lo, z_lo)
        hi = np.minimum(q_hi, z_hi)
        return ok_quad & (hi >= np.maximum(lo, 0.0))

    def surface_points(self, n: int, rng: np.random.Generator) -> np.ndarray:
        lateral = 2.0 * np.pi * self.radius * self.height
        cap = np.pi * self.radius**2
        total = lateral + 2.0 * cap
        part = rng.choice(3, size=n, p=[lateral / total, cap / total, cap / total])
        theta = rng.uniform(0.0, 2.0 * np.pi, size=n)
        pts = np.empty((n, 3))

        side = part == 0
        pts[side, 0] = self.radius * np.cos(theta[side])
        pts[side, 1] = self.radius * np.sin(theta[side])
        pts[side, 2] = rng.uniform(-self.height / 2.0, self.height / 2.0, size=int(side.sum()))
        for which, z in ((1, self.height / 2.0), (2, -self.height / 2.0)):
            sel = part == which
            rad = self.radius * np.sqrt(rng.uniform(0.0, 1.0, size=int(sel.sum())))
            pts[sel, 0] = rad * np.cos(theta[sel])
            pts[sel, 1] = rad * np.sin(theta[sel])
            pts[sel, 2] = z
        return self.center + pts


Solid = Sphere | Box | Cylinder


def make_solid(kind: str, size, center=(0.0, 0.0, 0.0)) -> Solid:
    """Build a solid from CLI-style parameters.

    sphere: size = [radius]; box: size = [ex, ey, ez];
    cylinder: size = [radius, height].
    """
    size = [float(s) for s in np.atleast_1d(size)]
    if kind == "sphere":
        if len(size) != 1:
            raise ValidationError("sphere: size takes exactly one value (radius)")
        return Sphere(radius=size[0], center=np.asarray(center, dtype=np.float64))
    if kind == "box":
        if len(size) != 3:
            raise ValidationError("box: size takes three values (edge lengths)")
        return Box(extents=np.array(size), center=np.asarray(center, dtype=np.float64))
    if kind == "cylinder":
        if len(size) != 2:
            raise ValidationError("cylinder: size takes two values (radius, height)")
        return Cylinder(radius=size[0], height=size[1], center=np.asarray(center, dtype=np.float64))
    raise ValidationError(f"unknown solid kind {kind!r} (expected sphere, box, or cylinder)")
