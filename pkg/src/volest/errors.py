"""Exception types raised by the volest library.

Every error the library raises on bad input or an unrecoverable pipeline
state derives from VolestError, so callers (and the CLI) can distinguish
"your input is wrong" from "the computation could not proceed".
"""


class VolestError(Exception):
    """Base class for all volest errors."""


class ParseError(VolestError):
    """A file could not be parsed; message includes the location (line or byte offset)."""


class ValidationError(VolestError):
    """Structurally valid input with invalid content; message names the offending field."""


class MissingFileError(VolestError):
    """A referenced file does not exist."""


class DegenerateGeometryError(VolestError):
    """Geometry too degenerate to proceed (too few or collinear correspondences, ...)."""


class NumericalFailureError(VolestError):
    """A numerical routine produced a non-finite or out-of-range result."""


class MissingMaskError(VolestError):
    """A view without a mask was used where a mask is required."""


class NoMaskedViewsError(VolestError):
    """No view in the scene carries a segmentation mask."""


class EmptyCloudError(VolestError):
    """A point cloud with zero points where at least one is required."""


class GridTooLargeError(VolestError):
    """Requested voxel grid exceeds the supported size."""


class EmptyGridError(VolestError):
    """Occupancy grid has no occupied voxels; no surface exists."""


class MissingExtentError(VolestError):
    """Reconstruction needs a point cloud or an explicit bounding box; neither was given."""


class MeshCollapseError(VolestError):
    """Simplification collapsed the mesh below a usable size."""


class EmptyMeshError(VolestError):
    """A mesh with no triangles where a surface is required."""


class EmptyInputError(VolestError):
    """An empty sequence where at least one element is required."""


class NonPositiveGroundTruthError(VolestError):
    """Ground-truth volume must be strictly positive."""


class ImageTooSmallError(VolestError):
    """Image raster too small for the requested hash."""
