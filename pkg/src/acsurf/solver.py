"""Strang-splitting time integrator with energy monitoring.

One step advances the tilted Allen-Cahn equation

    u_t = lap(u) - (u^3 - u + b) / eps^2

by composing: exact reaction flow over dt/2, backward-Euler diffusion with
the constant source -b/eps^2 over dt, exact reaction flow over dt/2. The
b term rides with the diffusion substep so the reaction substep keeps its
closed form.

The discrete energy

    J(u) = 1/2 u.W u + sum_i A_i F(u_i) / eps^2,   F(u) = (u^2-1)^2/4 + b u

is the Lyapunov functional of the flow; along a run it is non-increasing
per step up to a small splitting/solver slack.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .operators import (
    LinearSolveSettings,
    assemble_stiffness,
    build_diffusion_system,
    diffusion_step,
)
from .reaction import ReactionStepParams, reaction_half_step

# Per-step relative slack allowed on the energy monotonicity check; Strang
# splitting does not inherit exact discrete monotonicity from the continuous
# gradient flow.
ENERGY_DESCENT_SLACK = 1e-6


class SolverAbort(RuntimeError):
    """A substep failed mid-run; carries the partial trace and last state."""

    def __init__(self, message, step, trace, last_state):
        super().__init__(message)
        self.step = step
        self.trace = trace
        self.last_state = last_state


@dataclass
class PhaseField:
    """Per-vertex scalar state plus the time level it belongs to."""

    values: np.ndarray
    time_level: int = 0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 1:
            raise ValueError("phase field must be one-dimensional")
        if not np.isfinite(self.values).all():
            raise ValueError("phase field contains NaN/Inf")

    def copy(self):
        return PhaseField(self.values.copy(), self.time_level)


@dataclass(frozen=True)
class SolverConfig:
    """Complete description of a run.

    b is the reaction offset, eps the interface width, dt the time step.
    A run stops at max_iterations or when the relative sup-norm change of
    one step falls below stop_tolerance, whichever comes first. The seed
    is carried for initial-data reproducibility by the callers; the time
    loop itself is deterministic.
    """

    b: float = 0.0
    eps: float = 1.0
    dt: float = 0.1
    max_iterations: int = 1000
    seed: int = 0
    stop_tolerance: float = 1e-7
    energy_log_stride: int = 1
    linear_solver: LinearSolveSettings = dataclass_field(
        default_factory=LinearSolveSettings
    )

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.stop_tolerance < 0:
            raise ValueError("stop_tolerance must be >= 0")
        if self.energy_log_stride < 1:
            raise ValueError("energy_log_stride must be >= 1")


@dataclass
class EnergyTrace:
    """Sampled (step, energy, max|u|, mean u) along a run."""

    steps: list = dataclass_field(default_factory=list)
    energy: list = dataclass_field(default_factory=list)
    max_abs: list = dataclass_field(default_factory=list)
    mean: list = dataclass_field(default_factory=list)

    def append(self, step, energy, max_abs, mean):
        if self.steps and step <= self.steps[-1]:
            raise ValueError("trace steps must be strictly increasing")
        self.steps.append(int(step))
        self.energy.append(float(energy))
        self.max_abs.append(float(max_abs))
        self.mean.append(float(mean))

    def __len__(self):
        return len(self.steps)

    def as_arrays(self):
        return (
            np.array(self.steps),
            np.array(self.energy),
            np.array(self.max_abs),
            np.array(self.mean),
        )


def double_well(u, b=0.0):
    """Tilted double-well potential F(u) = (u^2 - 1)^2 / 4 + b u."""
    u = np.asarray(u, dtype=np.float64)
    return 0.25 * (u * u - 1.0) ** 2 + b * u


def discrete_energy(op, u, b=0.0, eps=1.0):
    """Dirichlet part via the stiffness matrix plus lumped potential part."""
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (op.n,):
        raise ValueError(f"field has shape {u.shape}, operator expects ({op.n},)")
    dirichlet = 0.5 * float(u @ (op.W @ u))
    potential = float(op.mass @ double_well(u, b)) / eps**2
    return dirichlet + potential


def strang_step(op, state, config, system=None):
    """One full splitting step; returns a new PhaseField at time_level + 1."""
    params = ReactionStepParams(dt_half=0.5 * config.dt, eps=config.eps)
    u = reaction_half_step(state.values, params)
    u = diffusion_step(
        op,
        u,
        config.dt,
        b=config.b,
        eps=config.eps,
        settings=config.linear_solver,
        system=system,
    )
    u = reaction_half_step(u, params)
    return PhaseField(u, state.time_level + 1)


def run(mesh, u0, config, operator=None):
    """Iterate strang_step from u0 under config.

    Parameters
    ----------
    mesh : TriangleMesh
    u0 : PhaseField or ndarray
    config : SolverConfig
    operator : SurfaceOperator, optional
        Reuse a preassembled operator (e.g. across a parameter sweep).

    Returns
    -------
    (PhaseField, EnergyTrace)
        Final state and the sampled energy trace (step 0 and the final
        step are always included). Deterministic for fixed inputs.
    """
    op = assemble_stiffness(mesh) if operator is None else operator
    state = u0 if isinstance(u0, PhaseField) else PhaseField(np.array(u0))
    if state.values.shape != (op.n,):
        raise ValueError(
            f"initial field has {state.values.shape[0]} values, "
            f"mesh has {op.n} vertices"
        )
    state = state.copy()
    system = build_diffusion_system(op, config.dt)

    trace = EnergyTrace()

    def sample(s):
        trace.append(
            s.time_level,
            discrete_energy(op, s.values, b=config.b, eps=config.eps),
            np.abs(s.values).max(),
            s.values.mean(),
        )

    sample(state)
    for k in range(1, config.max_iterations + 1):
        try:
            new = strang_step(op, state, config, system=system)
        except Exception as exc:
            raise SolverAbort(
                f"step {k} failed: {exc}", step=k, trace=trace, last_state=state
            ) from exc
        change = float(np.abs(new.values - state.values).max())
        scale = max(float(np.abs(state.values).max()), 1e-300)
        state = new
        last = k == config.max_iterations
        converged = config.stop_tolerance > 0 and change / scale < config.stop_tolerance
        if last or converged or (k % config.energy_log_stride == 0):
            sample(state)
        if converged:
            break
    return state, trace
