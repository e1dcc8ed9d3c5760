"""Triangle mesh geometry: loading, validation, areas and cotangent weights.

The mesh is the spatial domain for the surface phase-field solver. All
intrinsic quantities needed downstream (per-vertex areas, per-edge cotangent
weights) are computed here with vectorized numpy over the face array.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

# Faces with area below DEGENERATE_AREA_FACTOR * bbox_diagonal**2 are
# rejected at construction: their cotangents are meaningless.
DEGENERATE_AREA_FACTOR = 1e-12
# sin(angle) below this (relative to edge-length product) makes the
# cotangent blow up; cotan_weights refuses such faces.
DEGENERATE_SIN_TOL = 1e-8
# validate() flags faces whose minimum corner angle is below this (radians).
NEEDLE_ANGLE_TOL = 1e-6


class MeshError(Exception):
    """Base class for mesh construction and IO failures."""


class MeshParseError(MeshError):
    """Raised when an OBJ/OFF file cannot be parsed; message names the line."""


class MeshTopologyError(MeshError):
    """Raised when a mesh violates the closed-surface requirement."""


class DegenerateFaceError(MeshError):
    """Raised for zero-area or angle-degenerate faces; message names the face."""


class TriangleMesh:
    """Immutable triangulated surface.

    Parameters
    ----------
    vertices : array_like, shape (n, 3)
        Vertex positions.
    faces : array_like, shape (m, 3)
        Vertex index triples, counterclockwise when seen from outside.
    require_closed : bool
        If True, raise :class:`MeshTopologyError` when a boundary edge is
        found. Open patches (flat grids, single triangles) are useful for
        analysis and diagnostics, so the constructor can be asked to admit
        them; :func:`load_mesh` enforces closedness by default.

    Attributes
    ----------
    vertices : ndarray, shape (n, 3), read-only
    faces : ndarray, shape (m, 3), read-only
    edges : ndarray, shape (e, 2)
        Unique undirected edges, each row sorted, rows lexicographic.
    """

    def __init__(self, vertices, faces, require_closed=False):
        v = np.ascontiguousarray(vertices, dtype=np.float64)
        f = np.ascontiguousarray(faces, dtype=np.int64)
        if v.ndim != 2 or v.shape[1] != 3:
            raise MeshError(f"vertices must be (n, 3), got {v.shape}")
        if f.ndim != 2 or f.shape[1] != 3:
            raise MeshError(f"faces must be (m, 3), got {f.shape}")
        if f.size and (f.min() < 0 or f.max() >= len(v)):
            raise MeshError(
                f"face index out of range: max {f.max()}, {len(v)} vertices"
            )
        same = (f[:, 0] == f[:, 1]) | (f[:, 1] == f[:, 2]) | (f[:, 2] == f[:, 0])
        if same.any():
            raise DegenerateFaceError(
                f"face {int(np.flatnonzero(same)[0])} repeats a vertex index"
            )
        v.setflags(write=False)
        f.setflags(write=False)
        self.vertices = v
        self.faces = f

        self._check_face_areas()

        # Undirected unique edges with multiplicities (1 = boundary, >2 = non-manifold).
        half = f[:, [0, 1, 1, 2, 2, 0]].reshape(-1, 2)
        und = np.sort(half, axis=1)
        self.edges, self._edge_counts = np.unique(und, axis=0, return_counts=True)
        if require_closed:
            bad = np.flatnonzero(self._edge_counts != 2)
            if bad.size:
                i, j = self.edges[bad[0]]
                kind = "boundary" if self._edge_counts[bad[0]] == 1 else "non-manifold"
                raise MeshTopologyError(
                    f"mesh is not closed: {kind} edge ({int(i)}, {int(j)})"
                    f" and {bad.size - 1} more"
                )

        n = len(v)
        ones = np.ones(len(self.edges))
        adj = sparse.coo_matrix(
            (ones, (self.edges[:, 0], self.edges[:, 1])), shape=(n, n)
        )
        self.adjacency = (adj + adj.T).tocsr()

    def _check_face_areas(self):
        areas = self.face_areas()
        if len(self.vertices) == 0:
            return
        diag = np.linalg.norm(
            self.vertices.max(axis=0) - self.vertices.min(axis=0)
        )
        tol = DEGENERATE_AREA_FACTOR * diag**2
        bad = np.flatnonzero(areas <= tol)
        if bad.size:
            raise DegenerateFaceError(
                f"face {int(bad[0])} has area {areas[bad[0]]:.3e} below "
                f"tolerance {tol:.3e} ({bad.size} such faces)"
            )

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_faces(self):
        return len(self.faces)

    @property
    def n_edges(self):
        return len(self.edges)

    def euler_characteristic(self):
        return self.n_vertices - self.n_edges + self.n_faces

    def is_closed(self):
        return bool((self._edge_counts == 2).all())

    def boundary_edges(self):
        """Edges adjacent to exactly one face, shape (k, 2)."""
        return self.edges[self._edge_counts == 1]

    def nonmanifold_edges(self):
        """Edges adjacent to three or more faces, shape (k, 2)."""
        return self.edges[self._edge_counts > 2]

    def face_corners(self):
        """Corner positions per face: three (m, 3) arrays."""
        v, f = self.vertices, self.faces
        return v[f[:, 0]], v[f[:, 1]], v[f[:, 2]]

    def face_areas(self):
        v0, v1, v2 = self.face_corners()
        cr = np.cross(v1 - v0, v2 - v0)
        return 0.5 * np.linalg.norm(cr, axis=1)

    def total_area(self):
        return float(self.face_areas().sum())

    def mean_edge_length(self):
        d = self.vertices[self.edges[:, 0]] - self.vertices[self.edges[:, 1]]
        return float(np.linalg.norm(d, axis=1).mean())

    def vertex_neighbors(self, i):
        """Indices of the one-ring neighbors of vertex ``i``."""
        a = self.adjacency
        return a.indices[a.indptr[i]:a.indptr[i + 1]]

    def transformed(self, rotation=None, translation=None):
        """Rigidly transformed copy (used for isometry-invariance checks)."""
        v = self.vertices
        if rotation is not None:
            v = v @ np.asarray(rotation, dtype=np.float64).T
        if translation is not None:
            v = v + np.asarray(translation, dtype=np.float64)
        return TriangleMesh(v, self.faces)

    def validate(self):
        """Diagnostic scan; never raises.

        Returns
        -------
        MeshDiagnostics
            Boundary edges, non-manifold edges, needle faces (minimum corner
            angle below :data:`NEEDLE_ANGLE_TOL`), and the fraction of faces
            with an obtuse angle (where cotangent weights go negative).
        """
        angles = corner_angles(self)
        needle = np.flatnonzero(angles.min(axis=1) < NEEDLE_ANGLE_TOL)
        obtuse = float((angles.max(axis=1) > 0.5 * np.pi).mean()) if len(angles) else 0.0
        return MeshDiagnostics(
            n_vertices=self.n_vertices,
            n_faces=self.n_faces,
            n_edges=self.n_edges,
            boundary_edges=self.boundary_edges(),
            nonmanifold_edges=self.nonmanifold_edges(),
            degenerate_faces=needle,
            obtuse_face_fraction=obtuse,
        )


@dataclass
class MeshDiagnostics:
    """Result of :meth:`TriangleMesh.validate`."""

    n_vertices: int
    n_faces: int
    n_edges: int
    boundary_edges: np.ndarray
    nonmanifold_edges: np.ndarray
    degenerate_faces: np.ndarray
    obtuse_face_fraction: float

    def is_clean(self):
        return (
            len(self.boundary_edges) == 0
            and len(self.nonmanifold_edges) == 0
            and len(self.degenerate_faces) == 0
        )

    def __str__(self):
        lines = [
            f"vertices            = {self.n_vertices}",
            f"faces               = {self.n_faces}",
            f"edges               = {self.n_edges}",
            f"boundary_edges      = {len(self.boundary_edges)}",
            f"nonmanifold_edges   = {len(self.nonmanifold_edges)}",
            f"degenerate_faces    = {len(self.degenerate_faces)}",
            f"obtuse_face_fraction = {self.obtuse_face_fraction:.4f}",
        ]
        for i, j in self.boundary_edges[:10]:
            lines.append(f"  boundary edge ({i}, {j})")
        if len(self.boundary_edges) > 10:
            lines.append(f"  ... {len(self.boundary_edges) - 10} more")
        for fi in self.degenerate_faces[:10]:
            lines.append(f"  degenerate face {fi}")
        return "\n".join(lines)


@dataclass(frozen=True)
class EdgeWeights:
    """Cotangent weights aligned with ``mesh.edges`` (stored once per edge)."""

    edges: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if len(self.edges) != len(self.values):
            raise MeshError("edges/values length mismatch")


def corner_angles(mesh):
    """Interior angles per face, shape (m, 3), ordered like the face corners."""
    v0, v1, v2 = mesh.face_corners()
    a = np.linalg.norm(v1 - v2, axis=1)  # opposite corner 0
    b = np.linalg.norm(v2 - v0, axis=1)
    c = np.linalg.norm(v0 - v1, axis=1)
    angles = np.empty((len(a), 3))
    with np.errstate(invalid="ignore"):
        angles[:, 0] = np.arccos(np.clip((b**2 + c**2 - a**2) / (2 * b * c), -1, 1))
        angles[:, 1] = np.arccos(np.clip((c**2 + a**2 - b**2) / (2 * c * a), -1, 1))
        angles[:, 2] = np.arccos(np.clip((a**2 + b**2 - c**2) / (2 * a * b), -1, 1))
    return angles


def _corner_cotangents(mesh):
    """cot of each corner angle, shape (m, 3); raises on sin(angle) ~ 0."""
    v0, v1, v2 = mesh.face_corners()
    # edges emanating from each corner
    e = [(v1 - v0, v2 - v0), (v2 - v1, v0 - v1), (v0 - v2, v1 - v2)]
    cots = np.empty((mesh.n_faces, 3))
    for k, (p, q) in enumerate(e):
        dot = np.einsum("ij,ij->i", p, q)
        crs = np.linalg.norm(np.cross(p, q), axis=1)
        scale = np.linalg.norm(p, axis=1) * np.linalg.norm(q, axis=1)
        bad = np.flatnonzero(crs < DEGENERATE_SIN_TOL * scale)
        if bad.size:
            raise DegenerateFaceError(
                f"face {int(bad[0])} has a corner angle within tolerance of 0 or pi"
            )
        cots[:, k] = dot / crs
    return cots


def cotan_weights(mesh):
    """Per-edge weights cot(alpha) + cot(beta) of the two opposite angles.

    For a boundary edge only the single adjacent face contributes.
    Negative weights (obtuse opposite angles) are kept as-is.

    Returns
    -------
    EdgeWeights
    """
    cots = _corner_cotangents(mesh)
    f = mesh.faces
    # corner k is opposite the edge formed by the other two vertices
    opp = [(1, 2), (2, 0), (0, 1)]
    rows = np.concatenate([np.sort(f[:, pair], axis=1) for pair in opp])
    vals = np.concatenate([cots[:, k] for k in range(3)])

    # accumulate per unique undirected edge, aligned with mesh.edges
    n = mesh.n_vertices
    keys = mesh.edges[:, 0] * n + mesh.edges[:, 1]  # sorted, unique
    idx = np.searchsorted(keys, rows[:, 0] * n + rows[:, 1])
    w = np.zeros(mesh.n_edges)
    np.add.at(w, idx, vals)
    return EdgeWeights(edges=mesh.edges, values=w)


def vertex_areas(mesh, convention="barycentric"):
    """Per-vertex lumped areas forming the diagonal mass matrix.

    Parameters
    ----------
    mesh : TriangleMesh
    convention : {"barycentric", "mixed"}
        "barycentric" assigns one third of each face to each corner: exact
        area partition and positivity on any mesh (the default everywhere).
        "mixed" is the Voronoi-style variant (circumcentric cells, with the
        standard obtuse-triangle fallback of half/quarter splits); it also
        partitions the total area exactly and is offered for comparison.

    Returns
    -------
    ndarray, shape (n,)
        Strictly positive areas summing to the total mesh area.
    """
    f = mesh.faces
    areas = mesh.face_areas()
    n = mesh.n_vertices
    if convention == "barycentric":
        contrib = np.repeat(areas[:, None] / 3.0, 3, axis=1)
    elif convention == "mixed":
        contrib = _mixed_voronoi_contrib(mesh, areas)
    else:
        raise ValueError(f"unknown area convention {convention!r}")
    a = np.bincount(f.reshape(-1), weights=contrib.reshape(-1), minlength=n)
    if (a <= 0).any():
        i = int(np.flatnonzero(a <= 0)[0])
        raise DegenerateFaceError(f"vertex {i} received non-positive area {a[i]:.3e}")
    return a


def _mixed_voronoi_contrib(mesh, areas):
    """Per-face, per-corner mixed Voronoi areas (Meyer-style obtuse handling)."""
    angles = corner_angles(mesh)
    cots = _corner_cotangents(mesh)
    v0, v1, v2 = mesh.face_corners()
    l2 = np.stack(
        [
            np.einsum("ij,ij->i", v1 - v2, v1 - v2),  # opposite corner 0
            np.einsum("ij,ij->i", v2 - v0, v2 - v0),
            np.einsum("ij,ij->i", v0 - v1, v0 - v1),
        ],
        axis=1,
    )
    contrib = np.empty_like(l2)
    # circumcentric cell: corner i gets (|e_j|^2 cot(j) + |e_k|^2 cot(k)) / 8
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        contrib[:, i] = (l2[:, j] * cots[:, j] + l2[:, k] * cots[:, k]) / 8.0
    obtuse_corner = angles.argmax(axis=1)
    is_obtuse = angles.max(axis=1) > 0.5 * np.pi
    rows = np.flatnonzero(is_obtuse)
    for r in rows:
        c = obtuse_corner[r]
        contrib[r] = areas[r] / 4.0
        contrib[r, c] = areas[r] / 2.0
    return contrib


# ---------------------------------------------------------------------------
# file IO
# ---------------------------------------------------------------------------


def load_mesh(path, fmt=None, require_closed=True):
    """Read an ASCII OBJ or OFF file.

    Parameters
    ----------
    path : str or Path
    fmt : {"obj", "off"}, optional
        Inferred from the file extension when omitted.
    require_closed : bool
        Reject meshes with boundary or non-manifold edges (the solver
        assumes a closed surface). Pass False for diagnostic loading.
    """
    path = str(path)
    if fmt is None:
        low = path.lower()
        if low.endswith(".obj"):
            fmt = "obj"
        elif low.endswith(".off"):
            fmt = "off"
        else:
            raise MeshParseError(f"cannot infer format from {path!r}")
    fmt = fmt.lower()
    with open(path) as fh:
        lines = fh.read().splitlines()
    if fmt == "obj":
        v, f = _parse_obj(lines, path)
    elif fmt == "off":
        v, f = _parse_off(lines, path)
    else:
        raise MeshParseError(f"unsupported format {fmt!r}")
    return TriangleMesh(v, f, require_closed=require_closed)


def _parse_obj(lines, path):
    verts, faces, face_lines = [], [], []
    for ln, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        tag = parts[0]
        if tag == "v":
            if len(parts) < 4:
                raise MeshParseError(f"{path}:{ln}: vertex line needs 3 coordinates")
            try:
                verts.append([float(x) for x in parts[1:4]])
            except ValueError:
                raise MeshParseError(f"{path}:{ln}: bad vertex coordinate") from None
        elif tag == "f":
            if len(parts) != 4:
                raise MeshParseError(
                    f"{path}:{ln}: only triangular faces supported "
                    f"({len(parts) - 1} indices found)"
                )
            idx = []
            for tok in parts[1:]:
                head = tok.split("/", 1)[0]
                try:
                    k = int(head)
                except ValueError:
                    raise MeshParseError(f"{path}:{ln}: bad face index {tok!r}") from None
                if k <= 0:
                    raise MeshParseError(
                        f"{path}:{ln}: face index {k} out of range (OBJ is 1-based)"
                    )
                idx.append(k - 1)
            faces.append(idx)
            face_lines.append(ln)
        # other tags (vn, vt, o, g, s, usemtl, ...) are ignored
    if not verts:
        raise MeshParseError(f"{path}: no vertices found")
    v = np.array(verts)
    f = np.array(faces, dtype=np.int64).reshape(-1, 3)
    if f.size and f.max() >= len(v):
        bad = int(np.flatnonzero((f >= len(v)).any(axis=1))[0])
        raise MeshParseError(
            f"{path}:{face_lines[bad]}: face index {f[bad].max() + 1} out of "
            f"range (only {len(v)} vertices)"
        )
    return v, f


def _parse_off(lines, path):
    # strip comments / blanks, keep original line numbers
    body = [
        (ln, s.split("#", 1)[0].strip())
        for ln, s in enumerate(lines, start=1)
    ]
    body = [(ln, s) for ln, s in body if s]
    if not body:
        raise MeshParseError(f"{path}: empty OFF file")
    ln0, header = body[0]
    pos = 1
    if header.upper().startswith("OFF"):
        rest = header[3:].strip()
        if rest:
            counts_line = (ln0, rest)
        else:
            if len(body) < 2:
                raise MeshParseError(f"{path}: missing OFF counts line")
            counts_line = body[1]
            pos = 2
    else:
        counts_line = body[0]  # headerless variant
    ln, s = counts_line
    parts = s.split()
    if len(parts) < 2:
        raise MeshParseError(f"{path}:{ln}: counts line needs at least 2 integers")
    try:
        nv, nf = int(parts[0]), int(parts[1])
    except ValueError:
        raise MeshParseError(f"{path}:{ln}: bad counts line {s!r}") from None
    if len(body) < pos + nv + nf:
        raise MeshParseError(
            f"{path}: expected {nv} vertices and {nf} faces, file too short"
        )
    verts = np.empty((nv, 3))
    for i in range(nv):
        ln, s = body[pos + i]
        parts = s.split()
        if len(parts) < 3:
            raise MeshParseError(f"{path}:{ln}: vertex line needs 3 coordinates")
        try:
            verts[i] = [float(x) for x in parts[:3]]
        except ValueError:
            raise MeshParseError(f"{path}:{ln}: bad vertex coordinate") from None
    faces = np.empty((nf, 3), dtype=np.int64)
    for i in range(nf):
        ln, s = body[pos + nv + i]
        parts = s.split()
        try:
            cnt = int(parts[0])
        except (ValueError, IndexError):
            raise MeshParseError(f"{path}:{ln}: bad face line {s!r}") from None
        if cnt != 3:
            raise MeshParseError(f"{path}:{ln}: only triangular faces supported")
        if len(parts) < 4:
            raise MeshParseError(f"{path}:{ln}: face line too short")
        try:
            idx = [int(x) for x in parts[1:4]]
        except ValueError:
            raise MeshParseError(f"{path}:{ln}: bad face index") from None
        if min(idx) < 0 or max(idx) >= nv:
            raise MeshParseError(
                f"{path}:{ln}: face index out of range (0..{nv - 1})"
            )
        faces[i] = idx
    return verts, faces


def save_obj(mesh, path):
    """Write an ASCII OBJ file (1-based indices)."""
    with open(path, "w") as fh:
        fh.write("# written by acsurf\n")
        for x, y, z in mesh.vertices:
            fh.write(f"v {x:.17g} {y:.17g} {z:.17g}\n")
        for i, j, k in mesh.faces + 1:
            fh.write(f"f {i} {j} {k}\n")


def save_off(mesh, path):
    """Write an ASCII OFF file."""
    with open(path, "w") as fh:
        fh.write("OFF\n")
        fh.write(f"{mesh.n_vertices} {mesh.n_faces} {mesh.n_edges}\n")
        for x, y, z in mesh.vertices:
            fh.write(f"{x:.17g} {y:.17g} {z:.17g}\n")
        for i, j, k in mesh.faces:
            fh.write(f"3 {i} {j} {k}\n")
