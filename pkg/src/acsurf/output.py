"""File writers for run artifacts: colored PLY, field text, trace CSV."""

from __future__ import annotations

import numpy as np


def diverging_colors(u):
    """Map a field to RGB bytes: -1 -> blue, 0 -> white, +1 -> red."""
    t = (np.clip(np.asarray(u, dtype=np.float64), -1.0, 1.0) + 1.0) / 2.0
    rgb = np.empty((len(t), 3))
    low = t < 0.5  # blue -> white
    s = 2.0 * t[low]
    rgb[low] = np.column_stack([s, s, np.ones_like(s)])
    s = 2.0 * (t[~low] - 0.5)  # white -> red
    rgb[~low] = np.column_stack([np.ones_like(s), 1.0 - s, 1.0 - s])
    return np.rint(255.0 * rgb).astype(np.uint8)


def write_ply(path, mesh, u, comments=()):
    """ASCII PLY with per-vertex color from the diverging map plus the raw
    scalar as a float property."""
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (mesh.n_vertices,):
        raise ValueError("field length does not match mesh")
    rgb = diverging_colors(u)
    with open(path, "w") as fh:
        fh.write("ply\nformat ascii 1.0\n")
        for c in comments:
            fh.write(f"comment {c}\n")
        fh.write(f"element vertex {mesh.n_vertices}\n")
        fh.write("property float x\nproperty float y\nproperty float z\n")
        fh.write("property uchar red\nproperty uchar green\nproperty uchar blue\n")
        fh.write("property float quality\n")
        fh.write(f"element face {mesh.n_faces}\n")
        fh.write("property list uchar int vertex_indices\n")
        fh.write("end_header\n")
        for (x, y, z), (r, g, bl), q in zip(mesh.vertices, rgb, u):
            fh.write(f"{x:.9g} {y:.9g} {z:.9g} {r} {g} {bl} {q:.9g}\n")
        for i, j, k in mesh.faces:
            fh.write(f"3 {i} {j} {k}\n")


def write_field_txt(path, u, comments=()):
    """One value per line, preceded by '#' comment header lines."""
    with open(path, "w") as fh:
        for c in comments:
            fh.write(f"# {c}\n")
        for v in np.asarray(u, dtype=np.float64):
            fh.write(f"{v:.17g}\n")


def read_field_txt(path):
    return np.loadtxt(path, comments="#")


def write_trace_csv(path, trace, comments=()):
    """CSV columns: step, energy, max_abs_u, mean_u."""
    steps, energy, max_abs, mean = trace.as_arrays()
    with open(path, "w") as fh:
        for c in comments:
            fh.write(f"# {c}\n")
        fh.write("step,energy,max_abs_u,mean_u\n")
        for s, e, m, mu in zip(steps, energy, max_abs, mean):
            fh.write(f"{s},{e:.17g},{m:.17g},{mu:.17g}\n")


def write_report_txt(path, report, comments=()):
    with open(path, "w") as fh:
        for c in comments:
            fh.write(f"# {c}\n")
        fh.write(report.to_text() + "\n")


def write_profile_csv(path, profile, residuals, comments=()):
    """CSV columns: x, u, du, first_integral_residual."""
    with open(path, "w") as fh:
        for c in comments:
            fh.write(f"# {c}\n")
        fh.write("x,u,du,first_integral_residual\n")
        for x, u, du, r in zip(profile.x, profile.u, profile.du, residuals):
            fh.write(f"{x:.17g},{u:.17g},{du:.17g},{r:.17g}\n")
