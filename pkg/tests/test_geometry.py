import numpy as np
import pytest

from volest.errors import MissingMaskError, ValidationError
from volest.geometry import (
    AABB,
    CameraView,
    Intrinsics,
    PointCloud,
    Pose,
    camera_center,
    in_mask,
    project,
)


def _simple_view(mask=None, width=8, height=6):
    intr = Intrinsics(fx=100.0, fy=100.0, cx=width / 2.0, cy=height / 2.0, width=width, height=height)
    pose = Pose(rotation=np.eye(3), translation=np.zeros(3))
    return CameraView(intrinsics=intr, pose=pose, mask=mask)


class TestIntrinsics:
    def test_matrix_layout(self):
        intr = Intrinsics(fx=500.0, fy=400.0, cx=320.0, cy=240.0, width=640, height=480)
        k = intr.matrix
        assert k[0, 0] == 500.0 and k[1, 1] == 400.0
        assert k[0, 2] == 320.0 and k[1, 2] == 240.0
        assert k[2, 2] == 1.0 and k[0, 1] == 0.0

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(fx=-1.0, fy=1.0, cx=0.0, cy=0.0, width=4, height=4),
            dict(fx=1.0, fy=0.0, cx=0.0, cy=0.0, width=4, height=4),
            dict(fx=1.0, fy=1.0, cx=9.0, cy=0.0, width=4, height=4),
            dict(fx=1.0, fy=1.0, cx=0.0, cy=0.0, width=0, height=4),
        ],
    )
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ValidationError):
            Intrinsics(**kwargs)


class TestPose:
    def test_camera_center_inverts_translation(self):
        rng = np.random.default_rng(3)
        q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        r = q * np.linalg.det(q)  # force det +1
        t = rng.standard_normal(3)
        pose = Pose(rotation=r, translation=t)
        c = pose.camera_center()
        assert np.allclose(pose.rotation @ c + pose.translation, 0.0, atol=1e-12)
        assert np.allclose(camera_center(pose), c)

    def test_slightly_drifted_rotation_is_reorthonormalized(self):
        r = np.eye(3) + 1e-6 * np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
        pose = Pose(rotation=r, translation=np.zeros(3))
        eye_err = np.abs(pose.rotation.T @ pose.rotation - np.eye(3)).max()
        assert eye_err <= 1e-9
        # stays close to the original
        assert np.abs(pose.rotation - np.eye(3)).max() < 1e-5

    def test_exact_rotation_is_untouched(self):
        r = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
        pose = Pose(rotation=r, translation=np.zeros(3))
        assert np.array_equal(pose.rotation, r)

    def test_reflection_rejected(self):
        r = np.diag([1.0, 1.0, -1.0])
        with pytest.raises(ValidationError):
            Pose(rotation=r, translation=np.zeros(3))

    def test_from_camera_to_world_round_trip(self):
        rng = np.random.default_rng(11)
        q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        r = q * np.linalg.det(q)
        c = rng.standard_normal(3)
        pose = Pose.from_camera_to_world(rotation=r, translation=c)
        # the c2w translation is the camera center by definition
        assert np.allclose(pose.camera_center(), c, atol=1e-12)
        assert np.allclose(pose.rotation, r.T, atol=1e-12)

    def test_rotation_is_immutable(self):
        pose = Pose(rotation=np.eye(3), translation=np.zeros(3))
        with pytest.raises(ValueError):
            pose.rotation[0, 0] = 2.0


class TestProjection:
    def test_known_point(self):
        view = _simple_view(width=640, height=480)
        uv, depth = project(view, np.array([[0.1, -0.2, 2.0]]))
        intr = view.intrinsics
        assert depth[0] == 2.0
        assert uv[0, 0] == pytest.approx(intr.fx * 0.1 / 2.0 + intr.cx)
        assert uv[0, 1] == pytest.approx(intr.fy * -0.2 / 2.0 + intr.cy)

    def test_matrix_form_agreement(self):
        # (u, v, w) = K [R|t] P for a batch of random points and poses
        rng = np.random.default_rng(5)
        intr = Intrinsics(fx=321.0, fy=287.0, cx=150.0, cy=120.0, width=320, height=240)
        q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        r = q * np.linalg.det(q)
        t = rng.standard_normal(3)
        view = CameraView(intrinsics=intr, pose=Pose(rotation=r, translation=t))
        pts = rng.standard_normal((50, 3)) * 2.0
        uv, depth = project(view, pts)

        p34 = intr.matrix @ np.hstack([r, t[:, None]])
        hom = p34 @ np.vstack([pts.T, np.ones(50)])
        front = hom[2] > 0
        assert np.array_equal(depth > 0, front)
        assert np.allclose(uv[front, 0], hom[0, front] / hom[2, front], atol=1e-9)
        assert np.allclose(uv[front, 1], hom[1, front] / hom[2, front], atol=1e-9)
        assert np.all(np.isnan(uv[~front]))

    def test_behind_camera_nan(self):
        view = _simple_view()
        uv, depth = project(view, np.array([[0.0, 0.0, -1.0], [0.0, 0.0, 0.0]]))
        assert np.all(depth <= 0)
        assert np.all(np.isnan(uv))

    def test_single_point_squeeze(self):
        view = _simple_view()
        uv, depth = project(view, np.array([0.0, 0.0, 1.0]))
        assert uv.shape == (2,) and np.ndim(depth) == 0

    def test_rejects_bad_shape(self):
        with pytest.raises(ValidationError):
            project(_simple_view(), np.zeros((4, 2)))


class TestInMask:
    def test_round_half_up_on_both_axes(self):
        mask = np.zeros((6, 8), dtype=bool)
        mask[3, 5] = True
        view = _simple_view(mask=mask)
        # (u, v) = (col, row); the covered cell is [4.5, 5.5) x [2.5, 3.5)
        assert in_mask(view, np.array([5.0, 3.0]))
        assert in_mask(view, np.array([4.5, 2.5]))
        assert not in_mask(view, np.array([5.5, 3.0]))  # rounds to col 6
        assert not in_mask(view, np.array([5.0, 3.5]))  # rounds to row 4
        assert in_mask(view, np.array([5.49999, 3.49999]))
        assert not in_mask(view, np.array([4.49999, 3.0]))

    def test_out_of_raster_is_background(self):
        mask = np.ones((6, 8), dtype=bool)
        view = _simple_view(mask=mask)
        uv = np.array([[-1.0, 0.0], [7.4, 5.4], [8.0, 3.0], [3.0, 5.6], [np.nan, np.nan]])
        got = in_mask(view, uv)
        assert got.tolist() == [False, True, False, False, False]

    def test_missing_mask_raises(self):
        view = _simple_view(mask=None)
        with pytest.raises(MissingMaskError):
            in_mask(view, np.array([[1.0, 1.0]]))

    def test_mask_size_must_match_intrinsics(self):
        with pytest.raises(ValidationError):
            _simple_view(mask=np.zeros((4, 4), dtype=bool))


class TestContainers:
    def test_point_cloud_validation(self):
        with pytest.raises(ValidationError):
            PointCloud(points=np.zeros((3, 2)))
        with pytest.raises(ValidationError):
            PointCloud(points=np.array([[0.0, 0.0, np.inf]]))
        cloud = PointCloud(points=np.zeros((4, 3)))
        assert len(cloud) == 4
        assert not cloud.metric and cloud.frame_label == "sfm"

    def test_aabb(self):
        box = AABB(lo=np.zeros(3), hi=np.array([1.0, 2.0, 3.0]))
        assert np.array_equal(box.extent, [1.0, 2.0, 3.0])
        with pytest.raises(ValidationError):
            AABB(lo=np.array([0.0, 0.0, 1.0]), hi=np.zeros(3))
