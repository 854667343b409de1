"""Triangle mesh container and topology checks.

A mesh is watertight (edge-manifold and closed) when every undirected edge
is shared by exactly two triangles. For a closed genus-0 surface the Euler
characteristic V - E + F is 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = ["TriangleMesh", "edge_counts", "euler_characteristic", "is_watertight"]


@dataclass(frozen=True)
class TriangleMesh:
    """Vertices (v, 3) float64 and triangles (t, 3) int vertex indices."""

    vertices: np.ndarray
    triangles: np.ndarray

    def __post_init__(self):
        verts = np.asarray(self.vertices, dtype=np.float64)
        tris = np.asarray(self.triangles, dtype=np.int64)
        if verts.ndim != 2 or verts.shape[1] != 3:
            raise ValidationError(f"mesh vertices: expected (v, 3), got {verts.shape}")
        if tris.ndim != 2 or tris.shape[1] != 3:
            raise ValidationError(f"mesh triangles: expected (t, 3), got {tris.shape}")
        if not np.all(np.isfinite(verts)):
            raise ValidationError("mesh vertices: non-finite coordinates")
        if tris.size and (tris.min() < 0 or tris.max() >= len(verts)):
            raise ValidationError(
                f"mesh triangles: vertex index out of range [0, {len(verts)})"
            )
        verts = verts.copy()
        tris = tris.copy()
        verts.flags.writeable = False
        tris.flags.writeable = False
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "triangles", tris)

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def n_triangles(self) -> int:
        return self.triangles.shape[0]

    def flipped(self) -> "TriangleMesh":
        """Same surface with reversed winding (normals point the other way)."""
        return TriangleMesh(self.vertices, self.triangles[:, ::-1])


def edge_counts(mesh: TriangleMesh) -> tuple[np.ndarray, np.ndarray]:
    """Undirected edges and the number of triangles sharing each.

    Returns (edges, counts): edges is (e, 2) with sorted vertex pairs,
    counts the incident-triangle count per edge.
    """
    tris = mesh.triangles
    if tris.size == 0:
        return np.empty((0, 2), dtype=np.int64), np.empty(0, dtype=np.int64)
    raw = np.concatenate([tris[:, [0, 1]], tris[:, [1, 2]], tris[:, [2, 0]]])
    raw = np.sort(raw, axis=1)
    edges, counts = np.unique(raw, axis=0, return_counts=True)
    return edges, counts


def is_watertight(mesh: TriangleMesh) -> bool:
    """True iff every edge is shared by exactly two triangles."""
    if mesh.n_triangles == 0:
        return False
    _, counts = edge_counts(mesh)
    return bool(np.all(counts == 2))


def euler_characteristic(mesh: TriangleMesh) -> int:
    """V - E + F counting only vertices referenced by triangles."""
    edges, _ = edge_counts(mesh)
    used = np.unique(mesh.triangles) if mesh.triangles.size else np.empty(0)
    return int(used.size - edges.shape[0] + mesh.n_triangles)
