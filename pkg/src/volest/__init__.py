"""Volume estimation from posed, masked multi-view captures.

The pipeline: load (or synthesize) a scene with camera views, silhouette
masks, and metric anchor positions; align the reconstruction frame to
metric scale with a similarity transform; keep only cloud points whose
projections land on mask foreground; carve a voxel occupancy grid inside
the masked bounding box; extract a watertight surface with marching
cubes; smooth/simplify it; and integrate the signed volume. Evaluation
helpers cover percentage-error aggregation and chamfer distance, and the
frame utilities provide skip/perceptual-hash subsampling of capture
sequences.
"""

from .alignment import (
    SimilarityTransform,
    apply_similarity,
    apply_similarity_to_views,
    estimate_similarity,
)
from .errors import (
    DegenerateGeometryError,
    EmptyCloudError,
    EmptyGridError,
    EmptyInputError,
    EmptyMeshError,
    GridTooLargeError,
    ImageTooSmallError,
    MeshCollapseError,
    MissingExtentError,
    MissingFileError,
    MissingMaskError,
    NoMaskedViewsError,
    NonPositiveGroundTruthError,
    NumericalFailureError,
    ParseError,
    ValidationError,
    VolestError,
)
from .frames import dhash, frame_skip, hamming, select_frame_indices, select_frames
from .geometry import (
    AABB,
    CameraView,
    Intrinsics,
    PointCloud,
    Pose,
    camera_center,
    in_mask,
    project,
)
from .ingestion import (
    SceneManifest,
    load_image_gray,
    load_manifest,
    load_mask,
    load_mesh,
    load_point_cloud,
    save_mask,
    save_mesh,
    save_point_cloud,
    synthesize_scene,
    write_scene,
)
from .masking import MaskingConfig, mask_point_cloud, masked_bounding_box, view_predicate
from .mesh import TriangleMesh, edge_counts, euler_characteristic, is_watertight
from .metrics import (
    EvaluationReport,
    ItemResult,
    VolumeResult,
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
from .reconstruction import OccupancyGrid, carve_occupancy, marching_cubes, reconstruct
from .refinement import RefinementConfig, refine, simplify, smooth
from .solids import Box, Cylinder, Solid, Sphere, make_solid

__version__ = "0.1.0"

__all__ = [
    "AABB",
    "Box",
    "CameraView",
    "Cylinder",
    "DegenerateGeometryError",
    "EmptyCloudError",
    "EmptyGridError",
    "EmptyInputError",
    "EmptyMeshError",
    "EvaluationReport",
    "GridTooLargeError",
    "ImageTooSmallError",
    "Intrinsics",
    "ItemResult",
    "MaskingConfig",
    "MeshCollapseError",
    "MissingExtentError",
    "MissingFileError",
    "MissingMaskError",
    "NoMaskedViewsError",
    "NonPositiveGroundTruthError",
    "NumericalFailureError",
    "OccupancyGrid",
    "ParseError",
    "PointCloud",
    "Pose",
    "RefinementConfig",
    "SceneManifest",
    "SimilarityTransform",
    "Solid",
    "Sphere",
    "TriangleMesh",
    "ValidationError",
    "VolestError",
    "VolumeResult",
    "accuracy",
    "aggregate_report",
    "apply_similarity",
    "apply_similarity_to_views",
    "camera_center",
    "carve_occupancy",
    "chamfer_distance",
    "dhash",
    "edge_counts",
    "error_percentage",
    "estimate_similarity",
    "euler_characteristic",
    "frame_skip",
    "hamming",
    "in_mask",
    "is_watertight",
    "load_image_gray",
    "load_manifest",
    "load_mask",
    "load_mesh",
    "load_point_cloud",
    "make_solid",
    "mape",
    "mask_point_cloud",
    "masked_bounding_box",
    "marching_cubes",
    "mesh_volume",
    "project",
    "reconstruct",
    "refine",
    "render_report",
    "sample_surface",
    "save_mask",
    "save_mesh",
    "save_point_cloud",
    "select_frame_indices",
    "select_frames",
    "simplify",
    "smooth",
    "synthesize_scene",
    "view_predicate",
    "voxel_volume",
    "write_scene",
]
