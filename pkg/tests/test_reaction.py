import numpy as np
import pytest
from scipy.integrate import solve_ivp

from acsurf import ReactionStepParams, reaction_bound_holds, reaction_half_step


def scalar_ode_oracle(u0, tau, eps=1.0):
    """High-accuracy integration of u' = (u - u^3)/eps^2 over time tau."""
    sol = solve_ivp(
        lambda t, y: (y - y**3) / eps**2,
        (0.0, tau),
        [u0],
        method="DOP853",
        rtol=1e-12,
        atol=1e-14,
    )
    return sol.y[0, -1]


def test_fixed_points_exact():
    p = ReactionStepParams(dt_half=0.8, eps=0.7)
    out = reaction_half_step(np.array([-1.0, 0.0, 1.0]), p)
    assert out[1] == 0.0
    assert abs(out[0] + 1.0) <= np.spacing(1.0)
    assert abs(out[2] - 1.0) <= np.spacing(1.0)


def test_oddness_exact(rng):
    p = ReactionStepParams(dt_half=0.3)
    u = rng.uniform(-4, 4, 1000)
    np.testing.assert_array_equal(reaction_half_step(-u, p), -reaction_half_step(u, p))


def test_monotone_contraction_toward_unit(rng):
    p = ReactionStepParams(dt_half=0.2, eps=0.9)
    inside = rng.uniform(1e-6, 1.0 - 1e-6, 2000)
    out = reaction_half_step(inside, p)
    assert (out > inside).all() and (out < 1.0).all()
    above = rng.uniform(1.0 + 1e-6, 10.0, 2000)
    out = reaction_half_step(above, p)
    assert (out < above).all() and (out > 1.0).all()


def test_semigroup_two_halves_equal_one_full(rng):
    eps = 1.3
    half = ReactionStepParams(dt_half=0.35, eps=eps)
    full = ReactionStepParams(dt_half=0.7, eps=eps)
    u = rng.uniform(-3, 3, 5000)
    twice = reaction_half_step(reaction_half_step(u, half), half)
    once = reaction_half_step(u, full)
    np.testing.assert_allclose(twice, once, rtol=1e-12, atol=1e-15)


def test_closed_form_matches_ode_oracle():
    # frozen spot check plus a sweep against the oracle
    out = reaction_half_step(np.array([0.5]), ReactionStepParams(dt_half=0.5))[0]
    assert abs(out - scalar_ode_oracle(0.5, 0.5)) < 1e-10
    for u0 in (-2.5, -0.9, 0.1, 1.7):
        for tau, eps in ((0.1, 1.0), (2.0, 0.8), (0.05, 0.3)):
            closed = reaction_half_step(
                np.array([u0]), ReactionStepParams(dt_half=tau, eps=eps)
            )[0]
            assert abs(closed - scalar_ode_oracle(u0, tau, eps)) < 1e-10


def test_sup_norm_bound_property(rng):
    # ||step(u)||_inf <= max(||u||_inf, 1) for inputs on both sides of 1
    for _ in range(200):
        u = rng.uniform(-5, 5, 64)
        p = ReactionStepParams(
            dt_half=rng.uniform(1e-3, 10.0), eps=rng.uniform(0.05, 2.0)
        )
        assert reaction_bound_holds(u, p)


def test_bound_cases_from_stability_lemma():
    p = ReactionStepParams(dt_half=0.4)
    small = np.full(8, 0.7)  # |u| <= 1 case: stays within 1
    assert np.abs(reaction_half_step(small, p)).max() <= 1.0
    big = np.full(8, 3.0)  # |u| > 1 case: does not grow
    assert np.abs(reaction_half_step(big, p)).max() <= 3.0
    assert reaction_bound_holds(np.zeros(4), p)


def test_sign_preserved(rng):
    p = ReactionStepParams(dt_half=1.5)
    u = rng.uniform(-3, 3, 1000)
    out = reaction_half_step(u, p)
    assert (np.sign(out) == np.sign(u)).all()


def test_nan_input_rejected():
    p = ReactionStepParams(dt_half=0.1)
    with pytest.raises(ValueError):
        reaction_half_step(np.array([0.1, np.nan]), p)
    with pytest.raises(ValueError):
        reaction_half_step(np.array([np.inf]), p)


def test_params_validation():
    with pytest.raises(ValueError):
        ReactionStepParams(dt_half=0.0)
    with pytest.raises(ValueError):
        ReactionStepParams(dt_half=0.1, eps=-1.0)
