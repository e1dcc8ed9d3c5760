"""Stationary one-dimensional profiles of the tilted Allen-Cahn equation.

Stationary states with unit interface width satisfy

    u''(x) + (u(x) - u^3(x)) - b = 0.

Multiplying by u' and integrating gives the conserved quantity

    E(x) = 1/2 u'(x)^2 + F(u(x)) = C,   F(u) = -((1 - u^2)^2 / 4 + b u),

i.e. F is minus the tilted double-well potential; with this convention the
b = 0 heteroclinic front u(x) = tanh(x / sqrt(2)) has C = 0 exactly. The
trajectory can then be written implicitly as the quadrature

    x(u) - a = integral du / sqrt(2 (C - F(u))).

Note the frequently-quoted claim that tanh(x) solves the b = 0 equation is
off by the sqrt(2) width: see :func:`tanh_front_residual`, which evaluates
the defect of tanh(x / w) in closed form for any width w.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

BLOWUP_THRESHOLD = 1e3


class QuadratureDomainError(ValueError):
    """Radicand of the implicit solution is negative inside the requested range."""


@dataclass
class Profile1D:
    """Sampled trajectory (x, u, u') of the stationary equation."""

    x: np.ndarray
    u: np.ndarray
    du: np.ndarray
    b: float = 0.0
    blowup_x: float | None = None

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=np.float64)
        self.u = np.asarray(self.u, dtype=np.float64)
        self.du = np.asarray(self.du, dtype=np.float64)
        if not (len(self.x) == len(self.u) == len(self.du)):
            raise ValueError("x, u, du must have equal length")
        if len(self.x) > 1 and not (np.diff(self.x) > 0).all():
            raise ValueError("x must be strictly increasing")


@dataclass(frozen=True)
class FirstIntegral:
    """Conserved-energy estimate C and its observed drift along a profile."""

    C: float
    drift: float
    residuals: np.ndarray


def reaction_polynomial(u, b):
    """f(u) = u^3 - u + b, the right-hand side of u'' = f(u)."""
    u = np.asarray(u, dtype=np.float64)
    return u**3 - u + b


def conserved_potential(u, b):
    """F(u) = -((1 - u^2)^2 / 4 + b u); satisfies F'(u) = -f(u)."""
    u = np.asarray(u, dtype=np.float64)
    return -(0.25 * (1.0 - u * u) ** 2 + b * u)


def stable_roots(b):
    """Real roots r of u^3 - u + b = 0 with f'(r) > 0, ascending."""
    roots = np.roots([1.0, 0.0, -1.0, b])
    real = roots[np.abs(roots.imag) < 1e-9].real
    return np.sort(real[3.0 * real**2 - 1.0 > 0.0])


def integrate_stationary(u_a, du_a, b, x_span, tol=1e-10, n_samples=501):
    """Integrate u'' = u^3 - u + b from (u_a, u'_a) over x_span.

    Uses an adaptive embedded Runge-Kutta pair (Dormand-Prince) at the
    given tolerance. Escaping trajectories are cut at |u| = 1e3 and the
    crossing location is recorded in ``Profile1D.blowup_x``; samples cover
    the integrated part only.
    """
    if not (np.isfinite(u_a) and np.isfinite(du_a) and np.isfinite(b)):
        raise ValueError("initial data must be finite")
    x0, x1 = float(x_span[0]), float(x_span[1])
    if not x1 > x0:
        raise ValueError("x_span must be increasing")

    def rhs(x, y):
        return [y[1], y[0] ** 3 - y[0] + b]

    def escape(x, y):
        return abs(y[0]) - BLOWUP_THRESHOLD

    escape.terminal = True

    sol = integrate.solve_ivp(
        rhs,
        (x0, x1),
        [u_a, du_a],
        method="RK45",
        rtol=tol,
        atol=tol,
        dense_output=True,
        events=escape,
    )
    if not sol.success and sol.status != 1:
        raise RuntimeError(f"integration failed: {sol.message}")
    blowup_x = None
    x_end = sol.t[-1]
    if sol.status == 1 and len(sol.t_events[0]):
        blowup_x = float(sol.t_events[0][0])
        x_end = blowup_x
    xs = np.linspace(x0, x_end, n_samples)
    y = sol.sol(xs)
    return Profile1D(x=xs, u=y[0], du=y[1], b=b, blowup_x=blowup_x)


def first_integral(profile, b=None):
    """Estimate C = E(x_a) and report the drift max |E(x) - C|.

    The drift is absolute; on escaping trajectories the kinetic and
    potential terms reach ~u^4 and cancel, so compare the drift against
    their magnitude there, not against C.
    """
    if b is None:
        b = profile.b
    energy = 0.5 * profile.du**2 + conserved_potential(profile.u, b)
    C = float(energy[0])
    residuals = energy - C
    return FirstIntegral(C=C, drift=float(np.abs(residuals).max()), residuals=residuals)


def quadrature_solution(C, b, u_a, u_grid):
    """Implicit solution x(u) - a = int_{u_a}^{u} ds / sqrt(2 (C - F(s))).

    The grid must be strictly increasing and the radicand 2 (C - F(s))
    positive on the open integration range; simple zeros of the radicand at
    the extreme endpoints (turning points) are integrable and handled by
    the adaptive quadrature. Raises QuadratureDomainError when the radicand
    is negative strictly inside the range, naming the offending u.
    """
    u_grid = np.asarray(u_grid, dtype=np.float64)
    if u_grid.ndim != 1 or len(u_grid) == 0:
        raise ValueError("u_grid must be a non-empty 1-d array")
    if len(u_grid) > 1 and not (np.diff(u_grid) > 0).all():
        raise ValueError("u_grid must be strictly increasing")

    def radicand(u):
        return 2.0 * (C - conserved_potential(u, b))

    lo = min(float(u_a), float(u_grid[0]))
    hi = max(float(u_a), float(u_grid[-1]))
    probe = np.linspace(lo, hi, 4097)[1:-1]  # interior only
    vals = radicand(probe)
    # Negative radicand means the range is unreachable; a near-zero interior
    # dip means a double zero (heteroclinic limit), across which the
    # quadrature diverges. Simple zeros at the extreme endpoints survive:
    # the interior probe stays O(spacing) above zero there.
    tol = 1e-6 * max(float(vals.max(initial=0.0)), 0.0)
    if (vals <= tol).any():
        k = int(np.argmin(vals))
        raise QuadratureDomainError(
            f"radicand {vals[k]:.3e} vanishes or goes negative at "
            f"u = {probe[k]:.6g}; the trajectory does not reach this range"
        )

    def integrand(u):
        return 1.0 / np.sqrt(radicand(u))

    nodes = np.concatenate([[u_a], u_grid])
    order = np.argsort(nodes, kind="stable")
    sorted_nodes = nodes[order]
    seg = np.zeros(len(nodes))
    for k in range(1, len(sorted_nodes)):
        a, c = sorted_nodes[k - 1], sorted_nodes[k]
        if c > a:
            val, _ = integrate.quad(integrand, a, c, limit=200)
            if not np.isfinite(val):
                raise QuadratureDomainError(
                    f"quadrature diverged on [{a:.6g}, {c:.6g}]"
                )
            seg[k] = val
    cum = np.cumsum(seg)
    x_sorted = np.empty(len(nodes))
    x_sorted[order] = cum
    x = x_sorted - x_sorted[0]  # zero at u_a
    return x[1:]


def tanh_front_residual(x, width, b=0.0):
    """Defect of the candidate front u = tanh(x / width) in the stationary
    equation, evaluated in closed form.

    u'' + (u - u^3) - b with u = tanh(x/w) equals
    tanh(x/w) sech^2(x/w) (1 - 2/w^2) - b, so the residual vanishes
    identically for w = sqrt(2), b = 0, and is O(0.3) near x = 1 for w = 1.
    """
    x = np.asarray(x, dtype=np.float64)
    t = np.tanh(x / width)
    sech2 = 1.0 - t * t
    return t * sech2 * (1.0 - 2.0 / width**2) - b


def kink_profile(x, width=np.sqrt(2.0)):
    """Reference heteroclinic front tanh(x / width) and its derivative."""
    x = np.asarray(x, dtype=np.float64)
    u = np.tanh(x / width)
    return u, (1.0 - u * u) / width


def concavity_sign(profile):
    """Sign of the mean second difference of u over the computed window.

    +1 for concave up, -1 for concave down, 0 for flat/undecidable.
    """
    if len(profile.x) < 3:
        return 0
    d2 = np.diff(profile.u, 2)
    m = d2.mean()
    scale = max(np.abs(profile.u).max(), 1.0)
    if abs(m) < 1e-12 * scale:
        return 0
    return 1 if m > 0 else -1
