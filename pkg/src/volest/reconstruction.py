"""Silhouette carving on a voxel grid and isosurface extraction.

The visual hull is approximated by a regular occupancy grid: a voxel is
occupied iff its center projects onto mask foreground in the configured
quota of mask-bearing views. Marching cubes over the binary field (surface
vertices at grid-edge midpoints) turns the hull into a watertight,
outward-oriented triangle mesh.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._mc_table import EDGE_AXIS, EDGE_BASE, TRI_TABLE
from .errors import (
    EmptyGridError,
    GridTooLargeError,
    MissingExtentError,
    NoMaskedViewsError,
    ValidationError,
)
from .geometry import AABB, PointCloud
from .masking import MaskingConfig, masked_bounding_box, view_predicate
from .mesh import TriangleMesh

__all__ = ["OccupancyGrid", "carve_occupancy", "marching_cubes", "reconstruct"]

_MIN_RESOLUTION = 16
_MAX_RESOLUTION = 1024
_MAX_VOXELS = 2**30
# Slab size keeps per-chunk temporaries around a few hundred MB at float64.
_SLAB_VOXELS = 4_000_000


@dataclass(frozen=True)
class OccupancyGrid:
    """Axis-aligned voxel grid; voxel (i, j, k) center = origin + (ijk + 0.5) * spacing."""

    origin: np.ndarray
    spacing: float
    occupancy: np.ndarray

    def __post_init__(self):
        origin = np.asarray(self.origin, dtype=np.float64)
        occ = np.asarray(self.occupancy)
        if origin.shape != (3,) or not np.all(np.isfinite(origin)):
            raise ValidationError(f"grid origin: expected 3 finite coordinates, got {self.origin!r}")
        if not (self.spacing > 0 and np.isfinite(self.spacing)):
            raise ValidationError(f"grid spacing: must be positive, got {self.spacing}")
        if occ.ndim != 3:
            raise ValidationError(f"grid occupancy: expected a 3-d boolean array, got shape {occ.shape}")
        occ = occ.astype(bool, copy=True)
        origin = origin.copy()
        occ.flags.writeable = False
        origin.flags.writeable = False
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "occupancy", occ)

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.occupancy.shape

    @property
    def occupied_count(self) -> int:
        return int(self.occupancy.sum())

    def occupied_centers(self) -> np.ndarray:
        """World coordinates of occupied voxel centers, lexicographic order."""
        idx = np.argwhere(self.occupancy)
        return self.origin + (idx + 0.5) * self.spacing


def carve_occupancy(
    views,
    box: AABB,
    resolution: int = 512,
    cfg: MaskingConfig = MaskingConfig(),
    threads: int = 1,
) -> OccupancyGrid:
    """Carve a voxel hull of the masked object inside a bounding box.

    The grid covers the box plus a one-voxel shell on every side;
    `resolution` is the resulting maximum grid dimension. Each voxel center
    is tested with the same per-view predicate used for point-cloud masking
    and kept when the quota of mask-bearing views agrees. The outer shell is
    cleared unconditionally so the extracted surface is always closed.
    """
    if not (_MIN_RESOLUTION <= resolution <= _MAX_RESOLUTION):
        raise ValidationError(
            f"carve: resolution must be in [{_MIN_RESOLUTION}, {_MAX_RESOLUTION}], got {resolution}"
        )
    if threads < 1:
        raise ValidationError(f"carve: threads must be >= 1, got {threads}")
    masked_views = [v for v in views if v.mask is not None]
    if not masked_views:
        raise NoMaskedViewsError("carve: no view carries a mask")
    extent = box.extent
    max_extent = float(extent.max())
    if not max_extent > 0:
        raise ValidationError("carve: bounding box has zero extent")

    spacing = max_extent / (resolution - 2)
    dims = np.maximum(np.ceil(extent / spacing - 1e-9).astype(np.int64) + 2, 3)
    if int(np.prod(dims)) > _MAX_VOXELS:
        raise GridTooLargeError(f"carve: {int(np.prod(dims))} voxels exceed the {_MAX_VOXELS} limit")
    # Center the content inside the (ceil-rounded) grid, shell excluded.
    slack = (dims - 2) * spacing - extent
    origin = box.lo - spacing - slack / 2.0

    nx, ny, nz = (int(d) for d in dims)
    xs = origin[0] + (np.arange(nx) + 0.5) * spacing
    ys = origin[1] + (np.arange(ny) + 0.5) * spacing
    needed = cfg.quota * len(masked_views) - 1e-9

    def carve_slab(z_lo: int, z_hi: int) -> np.ndarray:
        zs = origin[2] + (np.arange(z_lo, z_hi) + 0.5) * spacing
        gx, gy, gz = np.meshgrid(xs, ys, zs, indexing="ij")
        centers = np.stack([gx.ravel(), gy.ravel(), gz.ravel()], axis=1)
        counts = np.zeros(len(centers), dtype=np.int64)
        for view in masked_views:
            counts += view_predicate(view, centers, cfg.min_depth)
        return (counts >= needed).reshape(nx, ny, z_hi - z_lo)

    z_step = max(1, _SLAB_VOXELS // (nx * ny))
    spans = [(z, min(z + z_step, nz)) for z in range(0, nz, z_step)]
    if threads == 1 or len(spans) == 1:
        slabs = [carve_slab(lo, hi) for lo, hi in spans]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            slabs = list(pool.map(lambda s: carve_slab(*s), spans))
    occ = np.concatenate(slabs, axis=2)

    # Shell voxels lie outside the content box by construction; clearing them
    # guarantees the isosurface closes even if a mask bulges past the box.
    occ[0, :, :] = occ[-1, :, :] = False
    occ[:, 0, :] = occ[:, -1, :] = False
    occ[:, :, 0] = occ[:, :, -1] = False
    return OccupancyGrid(origin=origin, spacing=spacing, occupancy=occ)


def marching_cubes(grid: OccupancyGrid) -> TriangleMesh:
    """Extract the isosurface (level 0.5) of a binary occupancy grid.

    Vertices sit at midpoints of grid edges joining an occupied and an empty
    voxel center; shared cell faces triangulate consistently, so the mesh is
    watertight and outward-oriented by construction. A grid occupied up to
    its boundary is padded with an empty layer first to keep the surface
    closed. Raises EmptyGridError when nothing is occupied.
    """
    occ = grid.occupancy
    if not occ.any():
        raise EmptyGridError("marching cubes: occupancy grid is empty")
    origin = grid.origin.copy()
    boundary = (
        occ[0].any() or occ[-1].any()
        or occ[:, 0].any() or occ[:, -1].any()
        or occ[:, :, 0].any() or occ[:, :, -1].any()
    )
    if boundary:
        occ = np.pad(occ, 1)
        origin -= grid.spacing

    u8 = occ.astype(np.uint8)
    nx, ny, nz = u8.shape
    config = np.zeros((nx - 1, ny - 1, nz - 1), dtype=np.uint8)
    for corner in range(8):
        dx, dy, dz = corner & 1, (corner >> 1) & 1, (corner >> 2) & 1
        block = u8[dx : nx - 1 + dx, dy : ny - 1 + dy, dz : nz - 1 + dz]
        config |= block << corner

    cells = np.argwhere((config != 0) & (config != 255))
    cfgs = config[cells[:, 0], cells[:, 1], cells[:, 2]]

    slots = TRI_TABLE[cfgs]  # (m, 3 * max_tris) edge ids, -1 padded
    cell_rows, flat_cols = np.nonzero(slots >= 0)
    edge_ids = slots[cell_rows, flat_cols].astype(np.int64)

    base = cells[cell_rows] + EDGE_BASE[edge_ids]
    axis = EDGE_AXIS[edge_ids]
    keys = (base[:, 0] * ny + base[:, 1]) * np.int64(nz) * 3 + base[:, 2] * 3 + axis
    unique_keys, inverse = np.unique(keys, return_inverse=True)
    triangles = inverse.reshape(-1, 3)

    k_axis = unique_keys % 3
    rest = unique_keys // 3
    k_z = rest % nz
    rest //= nz
    k_y = rest % ny
    k_x = rest // ny
    coords = np.stack([k_x, k_y, k_z], axis=1).astype(np.float64) + 0.5
    coords[np.arange(len(coords)), k_axis] += 0.5
    vertices = origin + coords * grid.spacing
    return TriangleMesh(vertices=vertices, triangles=triangles)


def reconstruct(
    views,
    cloud: PointCloud | None = None,
    box: AABB | None = None,
    resolution: int = 512,
    cfg: MaskingConfig = MaskingConfig(),
    pad_fraction: float = 0.05,
    threads: int = 1,
) -> TriangleMesh:
    """Carve the visual hull and extract its surface in one step.

    The carve region comes from `box` when given, otherwise from the
    cloud's padded bounding box; with neither, MissingExtentError.
    """
    if box is None:
        if cloud is None:
            raise MissingExtentError("reconstruct: need a point cloud or an explicit bounding box")
        box = masked_bounding_box(cloud, pad_fraction)
    grid = carve_occupancy(views, box, resolution=resolution, cfg=cfg, threads=threads)
    return marching_cubes(grid)
