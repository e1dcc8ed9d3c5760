"""Initial data generation and terminal-pattern analysis.

The classifier maps a terminal field to one of {spots, inverted_spots,
stripes, uniform, indeterminate} from area-weighted phase fractions,
connected-component counts, and an elongation score. The naming follows
the sign of the reaction offset that produces each morphology: negative
offsets leave islands of the negative phase ("spots"), positive offsets
leave islands of the positive phase ("inverted spots").
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csgraph

from .mesh import vertex_areas
from .solver import PhaseField

# Vertices with |u| below the dead band belong to the interface, not to a
# phase; interfaces have width ~eps and must not inflate component counts.
DEFAULT_DEAD_BAND = 0.1
# Minority area fraction below which the field counts as uniform.
UNIFORM_MINORITY_FRACTION = 0.02
# Minority fraction above which the morphology is banded rather than spotty.
STRIPE_MINORITY_FRACTION = 0.35
# boundary^2/area above this reads as banding. An ideal disk scores
# 4*pi ~ 12.6 and lattice-pinned spots stay below ~35 even with ragged
# boundaries; bands and labyrinths measure upwards of ~80.
STRIPE_ELONGATION = 60.0


@dataclass(frozen=True)
class SupportRegion:
    """Vertex set carrying compactly supported initial data.

    dilation_hops is the default halo (in edge hops) added around the set
    when scoring locality, absorbing the interface ring at the support
    boundary.
    """

    vertices: np.ndarray
    center_vertex: int
    radius_hops: int
    dilation_hops: int = 3

    def __post_init__(self):
        if len(self.vertices) == 0:
            raise ValueError("support region is empty")


@dataclass
class PatternReport:
    """Classification and statistics of one terminal field."""

    label: str
    fraction_positive: float
    fraction_negative: float
    interface_fraction: float
    minority_phase: str
    minority_fraction: float
    n_components_positive: int
    n_components_negative: int
    component_areas_positive: np.ndarray
    component_areas_negative: np.ndarray
    component_boundary_positive: np.ndarray
    component_boundary_negative: np.ndarray
    elongation_minority: float
    dead_band: float

    def minority_component_count(self):
        if self.minority_phase == "positive":
            return self.n_components_positive
        return self.n_components_negative

    def to_dict(self):
        return {
            "label": self.label,
            "fraction_positive": self.fraction_positive,
            "fraction_negative": self.fraction_negative,
            "interface_fraction": self.interface_fraction,
            "minority_phase": self.minority_phase,
            "minority_fraction": self.minority_fraction,
            "n_components_positive": self.n_components_positive,
            "n_components_negative": self.n_components_negative,
            "elongation_minority": self.elongation_minority,
            "dead_band": self.dead_band,
        }

    def to_text(self):
        lines = [f"{k} = {v}" for k, v in self.to_dict().items()]
        lines.append(
            "component_areas_positive = "
            + " ".join(f"{a:.6g}" for a in self.component_areas_positive)
        )
        lines.append(
            "component_areas_negative = "
            + " ".join(f"{a:.6g}" for a in self.component_areas_negative)
        )
        return "\n".join(lines)


@dataclass(frozen=True)
class LocalityScore:
    """Area-weighted variance of the field inside/outside a dilated region."""

    inside_variance: float
    outside_variance: float
    outside_empty: bool = False


def random_init(mesh, seed, amplitude):
    """Independent uniform samples in [-amplitude, amplitude] per vertex."""
    if not amplitude > 0:
        raise ValueError("amplitude must be positive")
    rng = np.random.default_rng(seed)
    values = rng.uniform(-amplitude, amplitude, mesh.n_vertices)
    return PhaseField(values)


def hop_ball(mesh, center_vertex, radius_hops):
    """Vertices within radius_hops edge hops of center_vertex (ascending)."""
    n = mesh.n_vertices
    if not 0 <= center_vertex < n:
        raise ValueError(f"center vertex {center_vertex} out of range")
    dist = csgraph.dijkstra(
        mesh.adjacency,
        unweighted=True,
        indices=center_vertex,
        limit=radius_hops,
    )
    return np.flatnonzero(np.isfinite(dist))


def localized_init(mesh, seed, center_vertex, radius_hops, amplitude, background=0.0):
    """Random data inside a breadth-first hop ball, exact constant outside.

    The random values are drawn exactly as in :func:`random_init`, then
    overwritten with the background outside the ball, so a ball covering
    the whole mesh reproduces random_init bit for bit.
    """
    if radius_hops < 1:
        raise ValueError("radius_hops must be >= 1")
    field = random_init(mesh, seed, amplitude)
    ball = hop_ball(mesh, center_vertex, radius_hops)
    outside = np.ones(mesh.n_vertices, dtype=bool)
    outside[ball] = False
    field.values[outside] = background
    region = SupportRegion(
        vertices=ball, center_vertex=int(center_vertex), radius_hops=int(radius_hops)
    )
    return field, region


def _phase_components(mesh, phase_mask):
    """Component id per vertex (-1 off-phase) and the component count."""
    comp = np.full(mesh.n_vertices, -1, dtype=np.int64)
    idx = np.flatnonzero(phase_mask)
    if len(idx) == 0:
        return comp, 0
    sub = mesh.adjacency[idx][:, idx]
    n, labels = csgraph.connected_components(sub, directed=False)
    comp[idx] = labels
    return comp, n


def _zero_contour_segments(mesh, u):
    """Length of the piecewise-linear zero level set crossing each face.

    Returns (face indices with a crossing, segment lengths).
    """
    f = mesh.faces
    uv = u[f]
    sign = uv > 0  # zero counts as negative side; measure-zero tie-break
    mixed = ~((sign.all(axis=1)) | ((~sign).all(axis=1)))
    faces = np.flatnonzero(mixed)
    if len(faces) == 0:
        return faces, np.zeros(0)
    lengths = np.empty(len(faces))
    v = mesh.vertices
    for out, fi in enumerate(faces):
        ids = f[fi]
        vals = u[ids]
        pts = []
        for a in range(3):
            c = (a + 1) % 3
            ua, uc = vals[a], vals[c]
            if (ua > 0) != (uc > 0):
                t = ua / (ua - uc)
                pts.append(v[ids[a]] + t * (v[ids[c]] - v[ids[a]]))
        lengths[out] = np.linalg.norm(pts[1] - pts[0]) if len(pts) == 2 else 0.0
    return faces, lengths


def classify(mesh, u, dead_band=DEFAULT_DEAD_BAND, areas=None):
    """Classify a terminal field into the pattern taxonomy.

    Thresholds at zero with a dead band: vertices with |u| < dead_band are
    interface and excluded from the phases. Components are connected in the
    mesh adjacency; boundary lengths come from the zero level set of the
    linear interpolant. Decision rules: uniform below 2% minority area;
    spotty between 2% and 35% with at least 3 minority components and low
    elongation; banded above 35% minority or at high elongation; anything
    else is indeterminate.
    """
    u = u.values if isinstance(u, PhaseField) else np.asarray(u, dtype=np.float64)
    if u.shape != (mesh.n_vertices,):
        raise ValueError("field length does not match mesh")
    if not np.isfinite(u).all():
        raise ValueError("field contains NaN/Inf")
    if areas is None:
        areas = vertex_areas(mesh)
    total = areas.sum()

    pos = u >= dead_band
    neg = u <= -dead_band
    band = ~(pos | neg)
    area_pos = float(areas[pos].sum())
    area_neg = float(areas[neg].sum())
    classified = area_pos + area_neg
    interface_fraction = float(areas[band].sum() / total)

    comp_pos, n_pos = _phase_components(mesh, pos)
    comp_neg, n_neg = _phase_components(mesh, neg)
    comp_areas_pos = np.bincount(
        comp_pos[pos], weights=areas[pos], minlength=n_pos
    )
    comp_areas_neg = np.bincount(
        comp_neg[neg], weights=areas[neg], minlength=n_neg
    )

    # boundary length per component from the zero contour
    bnd_pos = np.zeros(n_pos)
    bnd_neg = np.zeros(n_neg)
    faces, lengths = _zero_contour_segments(mesh, u)
    for fi, seg in zip(faces, lengths):
        ids = mesh.faces[fi]
        cp = comp_pos[ids]
        cn = comp_neg[ids]
        kp = cp[cp >= 0]
        kn = cn[cn >= 0]
        if len(kp):
            bnd_pos[kp[0]] += seg
        if len(kn):
            bnd_neg[kn[0]] += seg

    if classified == 0:
        return PatternReport(
            label="indeterminate",
            fraction_positive=0.0,
            fraction_negative=0.0,
            interface_fraction=interface_fraction,
            minority_phase="none",
            minority_fraction=0.0,
            n_components_positive=n_pos,
            n_components_negative=n_neg,
            component_areas_positive=comp_areas_pos,
            component_areas_negative=comp_areas_neg,
            component_boundary_positive=bnd_pos,
            component_boundary_negative=bnd_neg,
            elongation_minority=0.0,
            dead_band=dead_band,
        )

    frac_pos = area_pos / classified
    frac_neg = area_neg / classified
    if frac_pos <= frac_neg:
        minority_phase = "positive"
        minority_fraction = frac_pos
        m_areas, m_bnd, m_count = comp_areas_pos, bnd_pos, n_pos
    else:
        minority_phase = "negative"
        minority_fraction = frac_neg
        m_areas, m_bnd, m_count = comp_areas_neg, bnd_neg, n_neg

    if m_areas.sum() > 0:
        elong = m_bnd**2 / np.maximum(m_areas, 1e-300)
        elongation = float((elong * m_areas).sum() / m_areas.sum())
    else:
        elongation = 0.0

    if minority_fraction < UNIFORM_MINORITY_FRACTION:
        label = "uniform"
    elif minority_fraction < STRIPE_MINORITY_FRACTION:
        if elongation >= STRIPE_ELONGATION:
            label = "stripes"
        elif m_count >= 3:
            label = "spots" if minority_phase == "negative" else "inverted_spots"
        else:
            label = "indeterminate"
    else:
        label = "stripes"

    return PatternReport(
        label=label,
        fraction_positive=frac_pos,
        fraction_negative=frac_neg,
        interface_fraction=interface_fraction,
        minority_phase=minority_phase,
        minority_fraction=minority_fraction,
        n_components_positive=n_pos,
        n_components_negative=n_neg,
        component_areas_positive=comp_areas_pos,
        component_areas_negative=comp_areas_neg,
        component_boundary_positive=bnd_pos,
        component_boundary_negative=bnd_neg,
        elongation_minority=elongation,
        dead_band=dead_band,
    )


def dilate_region(mesh, region, hops):
    """Vertex indices within ``hops`` of the region (the region included)."""
    if hops <= 0:
        return np.array(sorted(region.vertices), dtype=np.int64)
    dist = csgraph.dijkstra(
        mesh.adjacency,
        unweighted=True,
        indices=np.asarray(region.vertices),
        min_only=True,
        limit=hops,
    )
    return np.flatnonzero(np.isfinite(dist))


def locality_score(mesh, u, region, dilation_hops=None, areas=None):
    """Area-weighted field variance inside and outside the dilated region.

    A local pattern has large inside variance with near-zero outside
    variance; the dilation (region.dilation_hops unless overridden here)
    absorbs the interface ring around the support.
    """
    u = u.values if isinstance(u, PhaseField) else np.asarray(u, dtype=np.float64)
    if areas is None:
        areas = vertex_areas(mesh)
    if dilation_hops is None:
        dilation_hops = region.dilation_hops
    inside = np.zeros(mesh.n_vertices, dtype=bool)
    inside[dilate_region(mesh, region, dilation_hops)] = True

    def weighted_var(mask):
        a = areas[mask]
        if a.sum() == 0:
            return 0.0
        x = u[mask]
        mu = float((a * x).sum() / a.sum())
        return float((a * (x - mu) ** 2).sum() / a.sum())

    outside_empty = not (~inside).any()
    return LocalityScore(
        inside_variance=weighted_var(inside),
        outside_variance=0.0 if outside_empty else weighted_var(~inside),
        outside_empty=outside_empty,
    )


def compare_pattern_stats(report_a, report_b, tol_fraction=0.05, tol_count=0.2):
    """True when two reports agree in phase fractions and component counts.

    Fractions must differ by less than tol_fraction (absolute); per-phase
    component counts by less than tol_count relative to the larger count.
    Used to compare runs on isometric meshes, where pointwise equality of
    the fields is not claimed.
    """
    if abs(report_a.fraction_positive - report_b.fraction_positive) >= tol_fraction:
        return False
    if abs(report_a.fraction_negative - report_b.fraction_negative) >= tol_fraction:
        return False
    for ca, cb in [
        (report_a.n_components_positive, report_b.n_components_positive),
        (report_a.n_components_negative, report_b.n_components_negative),
    ]:
        if abs(ca - cb) > tol_count * max(ca, cb, 1):
            return False
    return True
