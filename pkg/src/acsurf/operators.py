"""Discrete Laplace-Beltrami operator and the implicit diffusion substep.

The stiffness matrix W has W_ii = sum of cotangent weights around vertex i
and W_ij = -w_ij on edges, so W is symmetric positive semidefinite with
zero row sums (it is the P1 finite-element stiffness matrix under the hood).
With the diagonal lumped mass A, the geometric Laplacian is -A^{-1} W:
zero on constants, nonpositive quadratic form.

The diffusion substep integrates u_t = lap(u) - b/eps^2 with backward
Euler: (A + dt W) u' = A u - dt (b/eps^2) A 1. The system matrix is
symmetric positive definite for any dt > 0, solved with Jacobi-
preconditioned conjugate gradients.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .mesh import cotan_weights, vertex_areas


class LinearSolveError(Exception):
    """CG failed: non-convergence (final residual in message) or NaN."""


@dataclass(frozen=True)
class LinearSolveSettings:
    """Relative residual tolerance and iteration cap for the CG solver."""

    tolerance: float = 1e-9
    max_iterations: int | None = None  # None -> 10 * n

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


class SurfaceOperator:
    """Stiffness matrix W plus lumped mass vector A for one mesh.

    Immutable; shareable between runs. Use :func:`assemble_stiffness`.
    """

    def __init__(self, W, mass):
        mass = np.asarray(mass, dtype=np.float64)
        if W.shape != (len(mass), len(mass)):
            raise ValueError(
                f"stiffness {W.shape} inconsistent with mass vector ({len(mass)},)"
            )
        self.W = W.tocsr()
        self.mass = mass
        self.n = len(mass)

    def total_area(self):
        return float(self.mass.sum())


def assemble_stiffness(mesh, weights=None, area_convention="barycentric"):
    """Build the SurfaceOperator for a mesh.

    Parameters
    ----------
    mesh : TriangleMesh
    weights : EdgeWeights, optional
        Precomputed cotangent weights; computed from the mesh when omitted.
    area_convention : {"barycentric", "mixed"}
        Lumped-mass convention, see :func:`acsurf.mesh.vertex_areas`.
    """
    if weights is None:
        weights = cotan_weights(mesh)
    if len(weights.edges) != mesh.n_edges:
        raise ValueError(
            f"weights cover {len(weights.edges)} edges, mesh has {mesh.n_edges}"
        )
    i, j = weights.edges[:, 0], weights.edges[:, 1]
    # Half the summed cotangents: the P1 stiffness convention, under which
    # 1/2 u.W u is the Dirichlet energy and -A^{-1} W reproduces the
    # Laplace-Beltrami spectrum (z on the unit sphere maps to -2z).
    w = 0.5 * weights.values
    n = mesh.n_vertices
    rows = np.concatenate([i, j, i, j])
    cols = np.concatenate([j, i, i, j])
    vals = np.concatenate([-w, -w, w, w])
    W = sparse.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    mass = vertex_areas(mesh, convention=area_convention)
    return SurfaceOperator(W, mass)


def laplacian_apply(op, u):
    """Geometric Laplacian -A^{-1}(W u): zero on constants and
    u . (A * laplacian_apply(u)) <= 0 for every field u."""
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (op.n,):
        raise ValueError(f"field has shape {u.shape}, operator expects ({op.n},)")
    return -(op.W @ u) / op.mass


def build_diffusion_system(op, dt):
    """System matrix A + dt W and its diagonal, reused across time steps."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    M = (sparse.diags(op.mass) + dt * op.W).tocsr()
    return M, M.diagonal()


def cg_solve(matrix, rhs, settings=None, x0=None, diag=None):
    """Jacobi-preconditioned conjugate gradients for an SPD sparse system.

    Parameters
    ----------
    matrix : sparse matrix
    rhs : ndarray
    settings : LinearSolveSettings
    x0 : ndarray, optional
        Warm start (defaults to zero).
    diag : ndarray, optional
        Matrix diagonal, to avoid re-extraction in time loops.

    Returns
    -------
    ndarray
        Solution with relative residual ||M x - rhs|| / ||rhs|| below the
        tolerance.

    Raises
    ------
    LinearSolveError
        On NaN in the iteration or when the iteration cap is reached; the
        message carries the final relative residual.
    """
    if settings is None:
        settings = LinearSolveSettings()
    rhs = np.asarray(rhs, dtype=np.float64)
    n = len(rhs)
    rhs_norm = np.linalg.norm(rhs)
    if rhs_norm == 0.0:
        return np.zeros(n)
    if diag is None:
        diag = matrix.diagonal()
    inv_diag = 1.0 / diag
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=np.float64)
    r = rhs - matrix @ x
    z = inv_diag * r
    p = z.copy()
    rz = r @ z
    max_iter = settings.max_iterations or 10 * n
    res = np.linalg.norm(r) / rhs_norm
    if res <= settings.tolerance:
        return x
    for _ in range(max_iter):
        Mp = matrix @ p
        alpha = rz / (p @ Mp)
        if not np.isfinite(alpha):
            raise LinearSolveError("CG produced a non-finite step (NaN/Inf)")
        x += alpha * p
        r -= alpha * Mp
        res = np.linalg.norm(r) / rhs_norm
        if res <= settings.tolerance:
            return x
        z = inv_diag * r
        rz_new = r @ z
        p = z + (rz_new / rz) * p
        rz = rz_new
    raise LinearSolveError(
        f"CG did not converge in {max_iter} iterations "
        f"(relative residual {res:.3e}, tolerance {settings.tolerance:.1e})"
    )


def diffusion_step(op, u, dt, b=0.0, eps=1.0, settings=None, system=None):
    """Backward-Euler step of u_t = lap(u) - b/eps^2 over time dt.

    Solves (A + dt W) u' = A u - dt (b/eps^2) A 1. The constant source is
    integrated exactly inside the implicit step (it only shifts the right-
    hand side). Unconditionally stable in dt.

    Parameters
    ----------
    op : SurfaceOperator
    u : ndarray
    dt, b, eps : float
    settings : LinearSolveSettings, optional
    system : (matrix, diag), optional
        Output of :func:`build_diffusion_system` for this (op, dt), so time
        loops assemble it once.
    """
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (op.n,):
        raise ValueError(f"field has shape {u.shape}, operator expects ({op.n},)")
    if not dt > 0:
        raise ValueError("dt must be positive")
    if not eps > 0:
        raise ValueError("eps must be positive")
    if system is None:
        system = build_diffusion_system(op, dt)
    M, diag = system
    rhs = op.mass * (u - dt * (b / eps**2))
    return cg_solve(M, rhs, settings=settings, x0=u, diag=diag)
