"""Triangulation table for marching cubes on a binary occupancy field.

The table is generated programmatically at import time instead of being
transcribed by hand, which makes the face-consistency argument checkable:

* A cell is a 2x2x2 block of samples; corner c sits at offset
  (c & 1, c >> 1 & 1, c >> 2 & 1). An edge is "cut" when its two samples
  differ; the surface vertex is the edge midpoint.
* On each cell face, cut midpoints are joined into segments determined
  ONLY by the face's 4-corner pattern: 2 cuts give one segment; the
  ambiguous 4-cut (diagonal) pattern is resolved by cutting off the two
  empty corners, so occupied corners stay connected across the face.
  Neighboring cells see the same face pattern, hence choose the same
  segments - that is what makes the global mesh watertight.
* Segments chain into closed loops (every cut edge lies on two faces, so
  it joins exactly two segments). Loops are fan-triangulated and oriented
  so triangle normals point from occupied toward empty samples.

Exports: EDGE_BASE (12, 3) sample offset of each edge's base, EDGE_AXIS
(12,), TRI_TABLE (256, 3 * max_tris) edge ids padded with -1, N_TRIS (256,).
"""

from __future__ import annotations

import numpy as np

__all__ = ["EDGE_AXIS", "EDGE_BASE", "N_TRIS", "TRI_TABLE"]


def _corner_index(offset) -> int:
    return offset[0] + 2 * offset[1] + 4 * offset[2]


def _build_edges():
    """12 cube edges as (base_offset, axis), base + unit(axis) = far end."""
    edges = []
    for axis in range(3):
        o1, o2 = (a for a in range(3) if a != axis)
        for hi in (0, 1):
            for lo in (0, 1):
                base = [0, 0, 0]
                base[o1] = lo
                base[o2] = hi
                edges.append((tuple(base), axis))
    return edges


_EDGES = _build_edges()
_EDGE_LOOKUP = {}
for _eid, (_base, _axis) in enumerate(_EDGES):
    _far = list(_base)
    _far[_axis] += 1
    _EDGE_LOOKUP[(_base, tuple(_far))] = _eid


def _edge_between(a, b) -> int:
    key = (a, b) if a <= b else (b, a)
    return _EDGE_LOOKUP[key]


def _build_faces():
    """Each face: 4 corner offsets in cyclic order around the perimeter."""
    faces = []
    for axis in range(3):
        o1, o2 = (a for a in range(3) if a != axis)
        for side in (0, 1):
            corners = []
            for c1, c2 in ((0, 0), (1, 0), (1, 1), (0, 1)):
                off = [0, 0, 0]
                off[axis] = side
                off[o1] = c1
                off[o2] = c2
                corners.append(tuple(off))
            faces.append(corners)
    return faces


_FACES = _build_faces()


def _face_segments(occupied, corners):
    """Midpoint segments this face contributes, as pairs of edge ids."""
    vals = [occupied[_corner_index(c)] for c in corners]
    cyc_edges = [_edge_between(corners[i], corners[(i + 1) % 4]) for i in range(4)]
    cuts = [i for i in range(4) if vals[i] != vals[(i + 1) % 4]]
    if not cuts:
        return []
    if len(cuts) == 2:
        return [(cyc_edges[cuts[0]], cyc_edges[cuts[1]])]
    # All four edges cut: corners alternate. Cut off each empty corner so
    # the occupied pair stays connected (fixed, face-local resolution).
    segs = []
    for i in range(4):
        if not vals[i]:
            segs.append((cyc_edges[(i + 3) % 4], cyc_edges[i]))
    return segs


def _trace_loops(segments):
    """Chain segments (pairs of edge ids) into closed loops of edge ids."""
    partners = {}
    for a, b in segments:
        partners.setdefault(a, []).append(b)
        partners.setdefault(b, []).append(a)
    for edge, nbrs in partners.items():
        if len(nbrs) != 2:
            raise AssertionError(f"cut edge {edge} lies on {len(nbrs)} segments, expected 2")
    loops = []
    unused = set(partners)
    while unused:
        start = min(unused)
        loop = [start]
        unused.discard(start)
        prev, cur = None, start
        while True:
            a, b = partners[cur]
            nxt = b if a == prev else a
            if nxt == start:
                break
            loop.append(nxt)
            unused.discard(nxt)
            prev, cur = cur, nxt
        if len(loop) < 3:
            raise AssertionError(f"degenerate loop of length {len(loop)}")
        loops.append(loop)
    return loops


_MIDPOINT = np.zeros((12, 3))
for _eid, (_base, _axis) in enumerate(_EDGES):
    _MIDPOINT[_eid] = np.asarray(_base, dtype=np.float64)
    _MIDPOINT[_eid, _axis] += 0.5


def _orient_loop(loop, occupied):
    """Order the loop so fan triangles face from occupied toward empty."""
    pts = _MIDPOINT[loop]
    normal = np.zeros(3)
    for i in range(len(loop)):
        normal += np.cross(pts[i], pts[(i + 1) % len(loop)])
    outward = np.zeros(3)
    for eid in loop:
        base, axis = _EDGES[eid]
        far = list(base)
        far[axis] += 1
        a, b = np.asarray(base, float), np.asarray(far, float)
        if occupied[_corner_index(base)]:
            outward += b - a  # empty end minus occupied end
        else:
            outward += a - b
    score = float(normal @ outward)
    if abs(score) < 1e-9:
        raise AssertionError(f"cannot orient loop {loop}: normal is orthogonal to the outward hint")
    return loop if score > 0 else loop[::-1]


def _fan(loop):
    """Fan triangulation choosing an apex that avoids zero-area triangles."""
    n = len(loop)
    for shift in range(n):
        rot = loop[shift:] + loop[:shift]
        tris = [(rot[0], rot[i], rot[i + 1]) for i in range(1, n - 1)]
        areas = [
            np.linalg.norm(
                np.cross(_MIDPOINT[t[1]] - _MIDPOINT[t[0]], _MIDPOINT[t[2]] - _MIDPOINT[t[0]])
            )
            for t in tris
        ]
        if min(areas) > 1e-12:
            return tris
    raise AssertionError(f"no non-degenerate fan apex for loop {loop}")


def _build_tables():
    per_config = []
    for config in range(256):
        occupied = [(config >> i) & 1 for i in range(8)]
        segments = []
        for corners in _FACES:
            segments.extend(_face_segments(occupied, corners))
        tris = []
        if segments:
            for loop in _trace_loops(segments):
                tris.extend(_fan(_orient_loop(loop, occupied)))
        per_config.append(tris)

    width = max(len(t) for t in per_config)
    table = np.full((256, 3 * width), -1, dtype=np.int8)
    counts = np.zeros(256, dtype=np.int64)
    for config, tris in enumerate(per_config):
        counts[config] = len(tris)
        flat = [e for tri in tris for e in tri]
        table[config, : len(flat)] = flat
    return table, counts


TRI_TABLE, N_TRIS = _build_tables()
EDGE_BASE = np.array([base for base, _ in _EDGES], dtype=np.int64)
EDGE_AXIS = np.array([axis for _, axis in _EDGES], dtype=np.int64)
