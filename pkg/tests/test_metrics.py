"""Volume, error, and surface-distance metrics.

The published benchmark rows in conftest pin the aggregate arithmetic; the
chamfer tests demand *exact* equality against a brute-force distance matrix,
which the tree-accelerated path is designed to honor.
"""

import numpy as np
import pytest

from conftest import MTF_ERRORS, MTF_ITEMS, make_cube_mesh

from volest import (
    DegenerateGeometryError,
    EmptyInputError,
    EmptyMeshError,
    NonPositiveGroundTruthError,
    OccupancyGrid,
    PointCloud,
    TriangleMesh,
    ValidationError,
    accuracy,
    aggregate_report,
    chamfer_distance,
    error_percentage,
    mape,
    mesh_volume,
    render_report,
    sample_surface,
    voxel_volume,
)


def brute_chamfer(pa, pb):
    d = np.linalg.norm(pa[:, None, :] - pb[None, :, :], axis=2)
    return 0.5 * (d.min(axis=1).mean() + d.min(axis=0).mean())


class TestMeshVolume:
    def test_unit_decimeter_cube_is_a_liter(self):
        mesh = make_cube_mesh(edge=0.1)
        result = mesh_volume(mesh)
        assert result.volume_ml == pytest.approx(1000.0, rel=1e-12)
        assert result.watertight is True
        assert result.method == "divergence"

    def test_translation_invariant(self):
        far = make_cube_mesh(edge=0.1, center=(17.0, -3.0, 42.0))
        assert mesh_volume(far).volume_ml == pytest.approx(1000.0, rel=1e-9)

    def test_flip_negates(self):
        mesh = make_cube_mesh(edge=0.07)
        v = mesh_volume(mesh).volume_ml
        assert v > 0
        assert mesh_volume(mesh.flipped()).volume_ml == pytest.approx(-v, rel=1e-12)

    def test_scaling_is_cubic(self):
        small = mesh_volume(make_cube_mesh(edge=0.05)).volume_ml
        large = mesh_volume(make_cube_mesh(edge=0.10)).volume_ml
        assert large == pytest.approx(8 * small, rel=1e-12)

    def test_open_mesh_flagged(self):
        cube = make_cube_mesh()
        opened = TriangleMesh(cube.vertices, cube.triangles[:-1])
        result = mesh_volume(opened)
        assert result.watertight is False

    def test_empty_mesh_raises(self):
        mesh = TriangleMesh(np.zeros((3, 3)), np.empty((0, 3), dtype=int))
        with pytest.raises(EmptyMeshError):
            mesh_volume(mesh)


class TestVoxelVolume:
    def test_count_times_cell(self):
        occ = np.zeros((4, 4, 4), dtype=bool)
        occ[1:3, 1:3, 1:3] = True  # 8 voxels
        grid = OccupancyGrid(origin=np.zeros(3), spacing=0.01, occupancy=occ)
        result = voxel_volume(grid)
        assert result.volume_ml == pytest.approx(8 * 0.01**3 * 1e6, rel=1e-12)
        assert result.method == "voxel_count"

    def test_empty_grid_is_zero(self):
        grid = OccupancyGrid(origin=np.zeros(3), spacing=0.01, occupancy=np.zeros((2, 2, 2), bool))
        assert voxel_volume(grid).volume_ml == 0.0


class TestErrorArithmetic:
    def test_error_percentage(self):
        assert error_percentage(110.0, 100.0) == pytest.approx(10.0)
        assert error_percentage(90.0, 100.0) == pytest.approx(10.0)
        assert accuracy(97.0, 100.0) == pytest.approx(97.0)

    @pytest.mark.parametrize("gt", [0.0, -5.0, np.nan, np.inf])
    def test_bad_ground_truth(self, gt):
        with pytest.raises(NonPositiveGroundTruthError):
            error_percentage(50.0, gt)

    def test_mape_benchmark_rows(self):
        mean, std = mape(MTF_ERRORS)
        assert mean == pytest.approx(3.08, abs=0.005)
        assert std == pytest.approx(2.63, abs=0.005)

    def test_mape_uses_sample_std(self):
        errs = [1.0, 2.0, 3.0, 4.0]
        _, std = mape(errs)
        assert std == pytest.approx(np.std(errs, ddof=1), rel=1e-12)
        assert std != pytest.approx(np.std(errs), rel=1e-12)

    def test_mape_single_item(self):
        assert mape([5.0]) == (5.0, 0.0)

    def test_mape_rejects_junk(self):
        with pytest.raises(EmptyInputError):
            mape([])
        with pytest.raises(ValidationError):
            mape([1.0, np.nan])


class TestSampleSurface:
    def test_deterministic(self, cube_mesh):
        a = sample_surface(cube_mesh, 500, seed=42)
        b = sample_surface(cube_mesh, 500, seed=42)
        assert np.array_equal(a, b)
        c = sample_surface(cube_mesh, 500, seed=43)
        assert not np.array_equal(a, c)

    def test_points_lie_on_the_cube(self, cube_mesh):
        pts = sample_surface(cube_mesh, 2000, seed=0)
        half = 0.05
        on_face = np.isclose(np.abs(pts), half, atol=1e-12).any(axis=1)
        inside = (np.abs(pts) <= half + 1e-12).all(axis=1)
        assert on_face.all() and inside.all()

    def test_area_weighting(self):
        # One triangle 9x larger than the other: expect ~90% of the draws.
        verts = np.array(
            [
                [0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0],
                [10.0, 0.0, 0.0], [13.0, 0.0, 0.0], [10.0, 3.0, 0.0],
            ]
        )
        mesh = TriangleMesh(verts, np.array([[0, 1, 2], [3, 4, 5]]))
        pts = sample_surface(mesh, 20000, seed=1)
        big = (pts[:, 0] >= 9.0).mean()
        assert 0.88 < big < 0.92

    def test_validation(self, cube_mesh):
        with pytest.raises(ValidationError):
            sample_surface(cube_mesh, 0)
        degenerate = TriangleMesh(np.zeros((3, 3)), np.array([[0, 1, 2]]))
        with pytest.raises(DegenerateGeometryError):
            sample_surface(degenerate, 10)


class TestChamfer:
    @pytest.mark.parametrize("seed", range(8))
    def test_exactly_matches_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        pa = rng.normal(size=(rng.integers(5, 400), 3))
        pb = rng.normal(size=(rng.integers(5, 400), 3))
        assert chamfer_distance(pa, pb) == brute_chamfer(pa, pb)

    def test_symmetric(self):
        rng = np.random.default_rng(5)
        pa, pb = rng.normal(size=(100, 3)), rng.normal(size=(80, 3))
        assert chamfer_distance(pa, pb) == chamfer_distance(pb, pa)

    def test_identity_is_zero(self):
        rng = np.random.default_rng(9)
        pts = rng.normal(size=(50, 3))
        assert chamfer_distance(pts, pts) == 0.0

    def test_known_offset(self):
        pa = np.zeros((4, 3))
        pb = np.zeros((4, 3)) + [1.0, 0.0, 0.0]
        assert chamfer_distance(pa, pb) == pytest.approx(1.0)

    def test_accepts_clouds_and_meshes(self, cube_mesh):
        cloud = PointCloud(sample_surface(cube_mesh, 300, seed=3))
        d = chamfer_distance(cube_mesh, cloud, samples=500)
        assert 0 <= d < 0.02  # both sets lie on the same surface

    def test_mesh_sampling_is_seeded(self, cube_mesh):
        other = make_cube_mesh(edge=0.11)
        d1 = chamfer_distance(cube_mesh, other, samples=400, seed=7)
        d2 = chamfer_distance(cube_mesh, other, samples=400, seed=7)
        assert d1 == d2

    def test_validation(self, cube_mesh):
        with pytest.raises(EmptyInputError):
            chamfer_distance(np.empty((0, 3)), np.zeros((3, 3)))
        with pytest.raises(ValidationError):
            chamfer_distance(np.zeros((3, 2)), np.zeros((3, 3)))
        with pytest.raises(ValidationError):
            chamfer_distance(cube_mesh, np.zeros((3, 3)), samples=5)


class TestAggregateReport:
    def test_benchmark_table(self):
        report = aggregate_report([(n, p, g) for n, p, g in MTF_ITEMS])
        assert report.mape_pct == pytest.approx(3.08, abs=0.01)
        assert report.error_std_pct == pytest.approx(2.63, abs=0.01)
        assert report.cd_sum is None and report.cd_mean is None
        by_name = {it.name: it for it in report.per_item}
        assert by_name["strawberry"].error_pct == pytest.approx(2.75, abs=0.01)
        assert by_name["banana"].accuracy_pct == pytest.approx(97.53, abs=0.01)

    def test_chamfer_column(self):
        rows = [("a", 100.0, 100.0, 0.002), ("b", 50.0, 50.0, 0.004)]
        report = aggregate_report(rows)
        assert report.cd_sum == pytest.approx(0.006)
        assert report.cd_mean == pytest.approx(0.003)

    def test_mixed_chamfer_rows(self):
        rows = [("a", 100.0, 100.0, 0.002), ("b", 50.0, 50.0)]
        report = aggregate_report(rows)
        assert report.cd_sum == pytest.approx(0.002)
        assert report.cd_mean == pytest.approx(0.002)

    def test_round_trips_to_dict(self):
        report = aggregate_report([("x", 10.0, 11.0, 0.5)])
        d = report.to_dict()
        assert set(d) == {"per_item", "mape_pct", "error_std_pct", "cd_sum", "cd_mean"}
        assert d["per_item"][0]["name"] == "x"
        assert d["per_item"][0]["error_pct"] == pytest.approx(100 / 11)

    def test_render_mentions_the_aggregates(self):
        report = aggregate_report([(n, p, g) for n, p, g in MTF_ITEMS])
        text = render_report(report)
        assert "MAPE 3.08%" in text
        assert "S.D. 2.63" in text
        assert "strawberry" in text

    def test_empty_rejected(self):
        with pytest.raises(EmptyInputError):
            aggregate_report([])
