import numpy as np
import pytest
from scipy.optimize import brentq

from acsurf import (
    PhaseField,
    ReactionStepParams,
    SolverConfig,
    discrete_energy,
    random_init,
    reaction_half_step,
    run,
    strang_step,
)
from acsurf.solver import ENERGY_DESCENT_SLACK, EnergyTrace


def scalar_strang(c, cfg):
    """The splitting applied to a spatially constant state, in scalars."""
    p = ReactionStepParams(dt_half=0.5 * cfg.dt, eps=cfg.eps)
    c = reaction_half_step(np.array([c]), p)[0]
    c = c - cfg.dt * cfg.b / cfg.eps**2  # diffusion is the source shift only
    return reaction_half_step(np.array([c]), p)[0]


# -------------------------------------------------------------- energy


def test_energy_of_pure_phase_is_zero(ico4_op):
    assert abs(discrete_energy(ico4_op, np.ones(ico4_op.n), b=0.0)) < 1e-12


def test_energy_of_minus_one_with_tilt(ico4_op):
    area = ico4_op.total_area()
    for b, eps in ((0.3, 1.0), (-0.7, 0.5)):
        e = discrete_energy(ico4_op, -np.ones(ico4_op.n), b=b, eps=eps)
        assert abs(e - (-b * area / eps**2)) < 1e-10 * max(1, abs(b) * area)


def test_energy_of_zero_state(ico4_op):
    area = ico4_op.total_area()
    e = discrete_energy(ico4_op, np.zeros(ico4_op.n), b=0.0, eps=2.0)
    assert abs(e - area / (4.0 * 2.0**2)) < 1e-12 * area


def test_energy_dimension_mismatch(ico4_op):
    with pytest.raises(ValueError):
        discrete_energy(ico4_op, np.zeros(3))


# --------------------------------------------------------- strang_step


def test_strang_fixed_point_zero(ico4_op):
    cfg = SolverConfig(b=0.0, dt=0.2)
    state = PhaseField(np.zeros(ico4_op.n))
    out = strang_step(ico4_op, state, cfg)
    assert np.abs(out.values).max() == 0.0
    assert out.time_level == 1


def test_strang_fixed_point_one(ico4_op):
    cfg = SolverConfig(b=0.0, dt=0.2)
    out = strang_step(ico4_op, PhaseField(np.ones(ico4_op.n)), cfg)
    assert np.abs(out.values - 1.0).max() < 1e-12


def test_strang_constant_reduces_to_scalar_composition(ico4_op):
    # constants stay constant through every substep, so the full step
    # must equal the scalar composition (oracle)
    for b in (0.0, 0.3):
        cfg = SolverConfig(b=b, dt=0.1, eps=1.0)
        out = strang_step(ico4_op, PhaseField(np.full(ico4_op.n, 0.5)), cfg)
        expected = scalar_strang(0.5, cfg)
        assert np.abs(out.values - expected).max() < 1e-9


# ----------------------------------------------------------------- run


def test_run_stops_at_equilibrium(ico4):
    cfg = SolverConfig(b=0.0, dt=0.1, max_iterations=50, stop_tolerance=1e-7)
    final, trace = run(ico4, np.ones(ico4.n_vertices), cfg)
    assert final.time_level == 1  # change is zero after the first step
    assert np.abs(final.values - 1.0).max() < 1e-12


def test_run_uniform_regime_large_tilt(ico4, ico4_op):
    # strong tilt: field collapses to the single stable root of u^3-u+b
    cfg = SolverConfig(b=0.5, eps=1.0, dt=0.1, max_iterations=500,
                       stop_tolerance=0.0)
    u0 = random_init(ico4, 42, 0.1)
    final, _ = run(ico4, u0, cfg, operator=ico4_op)
    assert final.values.std() < 1e-3
    root = brentq(lambda u: u**3 - u + 0.5, -2.0, 0.0)  # independent oracle
    # the splitting fixed point sits O(dt^2) from the root
    assert abs(final.values.mean() - root) < 2e-3


def test_run_phase_separation_b_zero(ico4, ico4_op):
    cfg = SolverConfig(b=0.0, eps=1.0, dt=0.1, max_iterations=500,
                       stop_tolerance=0.0)
    u0 = random_init(ico4, 42, 0.1)
    final, _ = run(ico4, u0, cfg, operator=ico4_op)
    frac = np.mean((np.abs(final.values) >= 0.9) & (np.abs(final.values) <= 1.0))
    assert frac >= 0.9


def test_run_energy_descent_and_trace(ico4, ico4_op):
    cfg = SolverConfig(b=0.2, eps=1.0, dt=0.1, max_iterations=300,
                       stop_tolerance=0.0, energy_log_stride=1)
    u0 = random_init(ico4, 11, 0.1)
    final, trace = run(ico4, u0, cfg, operator=ico4_op)
    E = np.array(trace.energy)
    slack = ENERGY_DESCENT_SLACK * np.maximum(1.0, np.abs(E[:-1]))
    assert (np.diff(E) <= slack).all()
    assert E[-1] < E[0]
    steps = np.array(trace.steps)
    assert (np.diff(steps) > 0).all()
    assert steps[0] == 0 and steps[-1] == final.time_level


def test_run_sup_norm_control_b_zero(ico4, ico4_op, rng):
    u0 = PhaseField(rng.uniform(-3, 3, ico4_op.n))
    bound = max(np.abs(u0.values).max(), 1.0)
    cfg = SolverConfig(b=0.0, dt=0.25, max_iterations=40, stop_tolerance=0.0)
    state = u0.copy()
    for _ in range(40):
        state = strang_step(ico4_op, state, cfg)
        assert np.abs(state.values).max() <= bound + 1e-7


def test_run_sup_norm_control_with_source(ico4, ico4_op):
    cfg = SolverConfig(b=0.4, eps=1.0, dt=0.2, max_iterations=30,
                       stop_tolerance=0.0)
    u0 = random_init(ico4, 3, 2.0)
    bound0 = max(np.abs(u0.values).max(), 1.0)
    final, trace = run(ico4, u0, cfg, operator=ico4_op)
    n = final.time_level
    assert np.abs(final.values).max() <= bound0 + n * cfg.dt * abs(cfg.b) / cfg.eps**2 + 1e-7


def test_run_deterministic(ico4, ico4_op):
    cfg = SolverConfig(b=-0.1, dt=0.1, max_iterations=25, stop_tolerance=0.0)
    u0 = random_init(ico4, 9, 0.5)
    fin_a, tr_a = run(ico4, u0.copy(), cfg, operator=ico4_op)
    fin_b, tr_b = run(ico4, u0.copy(), cfg, operator=ico4_op)
    np.testing.assert_array_equal(fin_a.values, fin_b.values)
    assert tr_a.energy == tr_b.energy


def test_run_stride_sampling(ico4, ico4_op):
    cfg = SolverConfig(b=0.0, dt=0.1, max_iterations=20, stop_tolerance=0.0,
                       energy_log_stride=7)
    u0 = random_init(ico4, 2, 0.1)
    _, trace = run(ico4, u0, cfg, operator=ico4_op)
    assert trace.steps == [0, 7, 14, 20]  # final step always sampled


def test_run_rejects_mismatched_field(ico4):
    with pytest.raises(ValueError):
        run(ico4, np.zeros(5), SolverConfig())


def test_trace_rejects_non_increasing_steps():
    tr = EnergyTrace()
    tr.append(0, 1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        tr.append(0, 0.5, 1.0, 0.0)


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(dt=0.0)
    with pytest.raises(ValueError):
        SolverConfig(eps=-1.0)
    with pytest.raises(ValueError):
        SolverConfig(max_iterations=0)
    with pytest.raises(ValueError):
        SolverConfig(stop_tolerance=-1e-9)


def test_phase_field_validation():
    with pytest.raises(ValueError):
        PhaseField(np.array([np.nan, 0.0]))
    with pytest.raises(ValueError):
        PhaseField(np.zeros((3, 3)))


def test_substep_failure_aborts_with_partial_trace(ico4, ico4_op):
    from acsurf import LinearSolveError, LinearSolveSettings, SolverAbort

    cfg = SolverConfig(
        b=0.0, dt=0.5, max_iterations=10, stop_tolerance=0.0,
        linear_solver=LinearSolveSettings(tolerance=1e-16, max_iterations=1),
    )
    u0 = random_init(ico4, 4, 0.5)
    with pytest.raises(SolverAbort) as info:
        run(ico4, u0, cfg, operator=ico4_op)
    abort = info.value
    assert abort.step == 1
    assert abort.trace.steps == [0]  # the partial trace rides along
    assert isinstance(abort.__cause__, LinearSolveError)
    np.testing.assert_array_equal(abort.last_state.values, u0.values)
