"""Programmatic test geometries: icospheres, flat patches, tetrahedra."""

from __future__ import annotations

import numpy as np

from .mesh import TriangleMesh


def icosphere(subdivisions=3, radius=1.0):
    """Geodesic sphere from repeated midpoint subdivision of an icosahedron.

    Vertex count is 10 * 4**subdivisions + 2; faces are counterclockwise
    seen from outside. Vertex ordering is deterministic.
    """
    t = (1.0 + np.sqrt(5.0)) / 2.0
    verts = np.array(
        [
            [-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0],
            [0, -1, t], [0, 1, t], [0, -1, -t], [0, 1, -t],
            [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1],
        ],
        dtype=np.float64,
    )
    verts /= np.linalg.norm(verts, axis=1, keepdims=True)
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    verts = [tuple(p) for p in verts]
    for _ in range(subdivisions):
        cache = {}
        new_faces = []

        def midpoint(i, j):
            key = (i, j) if i < j else (j, i)
            if key not in cache:
                p = np.array(verts[i]) + np.array(verts[j])
                p /= np.linalg.norm(p)
                verts.append(tuple(p))
                cache[key] = len(verts) - 1
            return cache[key]

        for a, b, c in faces:
            ab = midpoint(a, b)
            bc = midpoint(b, c)
            ca = midpoint(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces
    v = np.array(verts) * radius
    return TriangleMesh(v, np.array(faces, dtype=np.int64))


def grid_patch(nx=10, ny=10, spacing=1.0):
    """Open flat rectangular patch of right triangles in the z = 0 plane.

    (nx+1)*(ny+1) vertices; each grid cell is split along its diagonal.
    Faces are counterclockwise seen from +z. Has a boundary by construction.
    """
    xs = np.arange(nx + 1) * spacing
    ys = np.arange(ny + 1) * spacing
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    verts = np.column_stack([gx.ravel(), gy.ravel(), np.zeros(gx.size)])

    def vid(i, j):
        return i * (ny + 1) + j

    faces = []
    for i in range(nx):
        for j in range(ny):
            a, b = vid(i, j), vid(i + 1, j)
            c, d = vid(i + 1, j + 1), vid(i, j + 1)
            faces += [(a, b, c), (a, c, d)]
    return TriangleMesh(verts, np.array(faces, dtype=np.int64))


def hex_patch(edge=1.0):
    """Six equilateral triangles around a central vertex (open patch)."""
    angles = np.arange(6) * np.pi / 3.0
    ring = edge * np.column_stack(
        [np.cos(angles), np.sin(angles), np.zeros(6)]
    )
    verts = np.vstack([[0.0, 0.0, 0.0], ring])
    faces = [(0, k + 1, (k + 1) % 6 + 1) for k in range(6)]
    return TriangleMesh(verts, np.array(faces, dtype=np.int64))


def tetrahedron(edge=1.0):
    """Regular tetrahedron, closed, faces counterclockwise from outside."""
    v = np.array(
        [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]],
        dtype=np.float64,
    )
    v *= edge / (2.0 * np.sqrt(2.0))
    faces = np.array(
        [(0, 1, 2), (0, 3, 1), (0, 2, 3), (1, 3, 2)], dtype=np.int64
    )
    return TriangleMesh(v, faces)


def enclosed_volume(mesh):
    """Signed volume via the divergence theorem; positive for outward faces."""
    v0, v1, v2 = mesh.face_corners()
    return float(np.einsum("ij,ij->i", v0, np.cross(v1, v2)).sum() / 6.0)
