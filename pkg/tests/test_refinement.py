"""Taubin smoothing and vertex-clustering simplification.

The smoothing oracle below recomputes the neighbor averages with Python
dicts, so the sparse-matrix path is checked bit-for-bit.
"""

import numpy as np
import pytest

from conftest import make_grid

from volest import (
    MeshCollapseError,
    RefinementConfig,
    TriangleMesh,
    ValidationError,
    edge_counts,
    euler_characteristic,
    is_watertight,
    marching_cubes,
    mesh_volume,
    refine,
    simplify,
    smooth,
)


def oracle_smooth(mesh, iters, lam, mu):
    """Dict-based Taubin steps; neighbors come straight from triangle edges."""
    neighbors = {i: set() for i in range(mesh.n_vertices)}
    for a, b, c in mesh.triangles:
        neighbors[int(a)].update((int(b), int(c)))
        neighbors[int(b)].update((int(a), int(c)))
        neighbors[int(c)].update((int(a), int(b)))
    verts = mesh.vertices.copy()
    for _ in range(iters):
        for step in (lam, mu):
            new = verts.copy()
            for i, adj in neighbors.items():
                if not adj:
                    continue
                avg = np.mean([verts[j] for j in sorted(adj)], axis=0)
                new[i] = verts[i] + step * (avg - verts[i])
            verts = new
    return verts


@pytest.fixture(scope="module")
def voxel_ball():
    # A sphere rasterized at radius 6 voxels: enough relief to smooth.
    r = 6
    idx = np.arange(-r, r + 1)
    gx, gy, gz = np.meshgrid(idx, idx, idx, indexing="ij")
    occ = gx**2 + gy**2 + gz**2 <= r * r
    return marching_cubes(make_grid(occ, spacing=0.01))


class TestSmooth:
    def test_matches_dict_oracle(self, voxel_ball):
        cfg = RefinementConfig(smooth_iters=3, smooth_lambda=0.5, taubin_mu=-0.53)
        got = smooth(voxel_ball, cfg)
        want = oracle_smooth(voxel_ball, 3, 0.5, -0.53)
        assert np.allclose(got.vertices, want, atol=1e-12)
        assert np.array_equal(got.triangles, voxel_ball.triangles)

    def test_cube_one_iteration_by_hand(self, cube_mesh):
        got = smooth(cube_mesh, RefinementConfig(smooth_iters=1))
        want = oracle_smooth(cube_mesh, 1, 0.5, -0.53)
        assert np.allclose(got.vertices, want, atol=1e-12)

    def test_zero_iterations_is_identity(self, voxel_ball):
        assert smooth(voxel_ball, RefinementConfig(smooth_iters=0)) is voxel_ball

    def test_volume_nearly_preserved(self, voxel_ball):
        before = mesh_volume(voxel_ball).volume_ml
        after = mesh_volume(smooth(voxel_ball)).volume_ml
        assert abs(after - before) / before < 0.05

    def test_counteracts_laplacian_shrinkage(self, voxel_ball):
        before = mesh_volume(voxel_ball).volume_ml
        taubin = mesh_volume(smooth(voxel_ball)).volume_ml
        # Same weight of positive steps, but no negative step: pure shrink.
        shrink_only = smooth(
            voxel_ball, RefinementConfig(smooth_iters=5, smooth_lambda=0.5, taubin_mu=-1e-12)
        )
        shrunk = mesh_volume(shrink_only).volume_ml
        assert abs(taubin - before) < abs(shrunk - before)

    def test_stays_watertight(self, voxel_ball):
        out = smooth(voxel_ball)
        assert is_watertight(out)
        assert euler_characteristic(out) == 2


class TestSimplify:
    def test_reduces_and_keeps_volume(self, voxel_ball):
        cell = 0.025  # 2.5 voxel pitches
        out = simplify(voxel_ball, cell)
        assert out.n_vertices < voxel_ball.n_vertices / 3
        before = mesh_volume(voxel_ball).volume_ml
        after = mesh_volume(out).volume_ml
        assert abs(after - before) / before < 0.15
        assert is_watertight(out)

    def test_tiny_cell_is_a_no_op(self, voxel_ball):
        assert simplify(voxel_ball, 1e-6) is voxel_ball

    def test_collapse_raises(self, voxel_ball):
        with pytest.raises(MeshCollapseError):
            simplify(voxel_ball, 10.0)  # one cluster swallows everything

    def test_cluster_centroids(self):
        # Two clusters of two vertices each + two singles: centroids land
        # midway, and both triangles survive distinct.
        verts = np.array(
            [
                [0.0, 0.0, 0.0],
                [0.1, 0.0, 0.0],  # clusters with 0 at cell 1.0
                [3.0, 0.0, 0.0],
                [3.1, 0.0, 0.0],  # clusters with 2
                [0.0, 3.0, 0.0],
                [3.0, 3.0, 3.0],
            ]
        )
        tris = np.array([[0, 2, 4], [1, 3, 5]])
        out = simplify(TriangleMesh(verts, tris), cell=1.0)
        assert out.n_vertices == 4
        assert out.n_triangles == 2
        assert np.allclose(out.vertices[0], [0.05, 0.0, 0.0])
        assert np.allclose(out.vertices[1], [3.05, 0.0, 0.0])

    def test_opposite_windings_cancel(self):
        # A degenerate pocket: two triangles on the same three clusters with
        # opposite orientation must vanish together, here leaving nothing.
        verts = np.array(
            [
                [0.0, 0.0, 0.0],
                [2.0, 0.0, 0.0],
                [0.0, 2.0, 0.0],
                [0.1, 0.0, 0.0],
                [2.1, 0.0, 0.0],
                [0.1, 2.0, 0.0],
            ]
        )
        tris = np.array([[0, 1, 2], [4, 3, 5]])
        with pytest.raises(MeshCollapseError):
            simplify(TriangleMesh(verts, tris), cell=1.0)

    @pytest.mark.parametrize("cell", [0.0, -1.0, np.nan, np.inf])
    def test_bad_cell_rejected(self, voxel_ball, cell):
        with pytest.raises(ValidationError):
            simplify(voxel_ball, cell)


class TestRefine:
    def test_composition(self, voxel_ball):
        cfg = RefinementConfig(smooth_iters=2, simplify_cell=0.02)
        assert np.array_equal(
            refine(voxel_ball, cfg).vertices,
            simplify(smooth(voxel_ball, cfg), 0.02).vertices,
        )

    def test_default_skips_simplification(self, voxel_ball):
        cfg = RefinementConfig()
        assert cfg.simplify_cell == 0.0
        out = refine(voxel_ball, cfg)
        assert out.n_vertices == voxel_ball.n_vertices

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"smooth_iters": -1},
            {"smooth_lambda": 0.0},
            {"smooth_lambda": 1.5},
            {"taubin_mu": 0.0},
            {"taubin_mu": 0.3},
            {"simplify_cell": -0.1},
        ],
    )
    def test_config_validation(self, kwargs):
        with pytest.raises(ValidationError):
            RefinementConfig(**kwargs)


class TestTriangleMeshContainer:
    def test_flipped_negates_volume(self, cube_mesh):
        v = mesh_volume(cube_mesh).volume_ml
        assert mesh_volume(cube_mesh.flipped()).volume_ml == pytest.approx(-v, rel=1e-12)

    def test_counts_and_freeze(self, cube_mesh):
        assert cube_mesh.n_vertices == 8
        assert cube_mesh.n_triangles == 12
        with pytest.raises(ValueError):
            cube_mesh.vertices[0, 0] = 5.0

    def test_validation(self):
        with pytest.raises(ValidationError):
            TriangleMesh(np.zeros((3, 2)), np.zeros((1, 3), dtype=int))
        with pytest.raises(ValidationError):
            TriangleMesh(np.zeros((3, 3)), np.array([[0, 1, 3]]))
        with pytest.raises(ValidationError):
            TriangleMesh(np.array([[0.0, 0.0, np.nan]]), np.empty((0, 3), dtype=int))

    def test_edge_counts_on_cube(self, cube_mesh):
        edges, counts = edge_counts(cube_mesh)
        assert len(edges) == 18  # 12 cube edges + 6 face diagonals
        assert np.all(counts == 2)
        assert is_watertight(cube_mesh)
        assert euler_characteristic(cube_mesh) == 2

    def test_open_fan_is_not_watertight(self):
        verts = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]])
        mesh = TriangleMesh(verts, np.array([[0, 1, 2], [1, 3, 2]]))
        assert not is_watertight(mesh)
        _, counts = edge_counts(mesh)
        assert counts.sum() == 6
        assert euler_characteristic(mesh) == 1  # a disk

    def test_empty_mesh(self):
        mesh = TriangleMesh(np.empty((0, 3)), np.empty((0, 3), dtype=int))
        assert not is_watertight(mesh)
        edges, counts = edge_counts(mesh)
        assert len(edges) == 0 and len(counts) == 0
