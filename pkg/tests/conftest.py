"""Shared fixtures: analytic pipeline runs, canned meshes, table data."""

from dataclasses import dataclass
import time

import numpy as np
import pytest

from volest.geometry import PointCloud
from volest.ingestion import synthesize_scene
from volest.masking import MaskingConfig, mask_point_cloud, masked_bounding_box
from volest.mesh import TriangleMesh
from volest.metrics import mesh_volume, voxel_volume
from volest.reconstruction import OccupancyGrid, carve_occupancy, marching_cubes
from volest.refinement import RefinementConfig, refine
from volest.solids import Box, Cylinder, Sphere

# 13 per-item error percentages and chamfer distances ("Our" column of the
# MTF benchmark) plus the 15 DTU per-scan chamfer values; the aggregate
# expectations are frozen from independent arithmetic.
MTF_ERRORS = [2.74, 1.78, 7.72, 5.95, 0.37, 1.42, 0.52, 1.91, 0.52, 2.47, 2.85, 3.63, 8.18]
MTF_CHAMFER = [
    0.0028, 0.0022, 0.0068, 0.0046, 0.0021, 0.0039, 0.0036,
    0.0012, 0.0029, 0.0118, 0.0021, 0.0055, 0.0082,
]
MTF_ITEMS = [
    ("strawberry", 37.47, 38.53),
    ("cinnamon_bun", 275.38, 280.36),
    ("pork_rib", 268.93, 249.65),
    ("corn", 277.56, 295.13),
    ("french_toast", 394.04, 392.58),
    ("sandwich", 215.21, 218.31),
    ("burger", 370.69, 368.77),
    ("cake", 176.43, 173.13),
    ("blueberry_muffin", 233.95, 232.74),
    ("banana", 159.20, 163.23),
    ("salmon", 82.75, 85.18),
    ("burrito", 297.09, 308.28),
    ("hotdog", 541.58, 589.82),
]
DTU_CHAMFER = [
    0.59, 0.74, 0.40, 0.33, 1.08, 0.86, 0.55, 1.10,
    1.11, 0.70, 0.59, 0.71, 0.41, 0.58, 0.41,
]


def make_cube_mesh(edge: float = 0.1, center=(0.0, 0.0, 0.0)) -> TriangleMesh:
    """Axis-aligned cube, 12 outward-oriented triangles."""
    c = np.asarray(center, dtype=np.float64)
    h = edge / 2.0
    corners = np.array(
        [
            [-h, -h, -h], [h, -h, -h], [h, h, -h], [-h, h, -h],
            [-h, -h, h], [h, -h, h], [h, h, h], [-h, h, h],
        ]
    ) + c
    quads = [
        (0, 3, 2, 1),  # bottom
        (4, 5, 6, 7),  # top
        (0, 1, 5, 4),  # front
        (1, 2, 6, 5),  # right
        (2, 3, 7, 6),  # back
        (3, 0, 4, 7),  # left
    ]
    tris = []
    for a, b, cc, d in quads:
        tris.append((a, b, cc))
        tris.append((a, cc, d))
    return TriangleMesh(vertices=corners, triangles=np.array(tris, dtype=np.int64))


def make_grid(occ: np.ndarray, spacing: float = 1.0, origin=(0.0, 0.0, 0.0)) -> OccupancyGrid:
    """Occupancy grid around a raw boolean array, padded to an empty shell."""
    occ = np.asarray(occ, dtype=bool)
    padded = np.zeros(tuple(s + 2 for s in occ.shape), dtype=bool)
    padded[1:-1, 1:-1, 1:-1] = occ
    return OccupancyGrid(origin=np.asarray(origin, dtype=np.float64), spacing=spacing, occupancy=padded)


@dataclass
class PipelineRun:
    name: str
    gt_ml: float
    grid: OccupancyGrid
    mesh_raw: TriangleMesh
    mesh: TriangleMesh
    voxel_ml: float
    raw_ml: float
    refined_ml: float
    masked: PointCloud
    seconds: float


def run_solid_pipeline(solid, n_views=64, image_size=(1600, 1600), resolution=128) -> PipelineRun:
    t0 = time.perf_counter()
    scene = synthesize_scene(solid, n_views=n_views, image_size=image_size, seed=0)
    cfg = MaskingConfig()
    masked = mask_point_cloud(scene.point_cloud, scene.views, cfg)
    box = masked_bounding_box(masked)
    grid = carve_occupancy(scene.views, box, resolution=resolution, cfg=cfg)
    mesh_raw = marching_cubes(grid)
    mesh = refine(mesh_raw, RefinementConfig())
    run = PipelineRun(
        name=scene.scene_name,
        gt_ml=scene.gt_volume_ml,
        grid=grid,
        mesh_raw=mesh_raw,
        mesh=mesh,
        voxel_ml=voxel_volume(grid).volume_ml,
        raw_ml=mesh_volume(mesh_raw).volume_ml,
        refined_ml=mesh_volume(mesh).volume_ml,
        masked=masked,
        seconds=0.0,
    )
    run.seconds = time.perf_counter() - t0
    return run


@pytest.fixture(scope="session")
def solid_pipelines() -> dict[str, PipelineRun]:
    """The three benchmark solids, reconstructed once per session."""
    solids = {
        "sphere": Sphere(radius=0.05, center=np.zeros(3)),
        "box": Box(extents=np.array([0.04, 0.05, 0.06]), center=np.zeros(3)),
        "cylinder": Cylinder(radius=0.03, height=0.08, center=np.zeros(3)),
    }
    return {name: run_solid_pipeline(solid) for name, solid in solids.items()}


@pytest.fixture()
def cube_mesh() -> TriangleMesh:
    return make_cube_mesh()


@pytest.fixture(scope="session")
def small_sphere_scene():
    """A quick 12-view sphere capture for I/O and CLI tests."""
    return synthesize_scene(
        Sphere(radius=0.05, center=np.zeros(3)),
        n_views=12,
        image_size=(160, 160),
        seed=0,
        n_cloud_points=2000,
    )
