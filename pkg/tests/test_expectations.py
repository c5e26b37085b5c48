"""Tests for rule switching and the model-consistent decision rule."""

import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.application.services.econ_model import re_system
from src.application.services.expectations import (
    advance_forecaster,
    aggregate_expectation,
    behavioral_forecasts,
    initial_forecaster,
    solve_re_rule,
    switching_fractions,
    update_utility
)
from src.domain.repositories import IndeterminacyError, InstabilityError

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


def test_utility_scores_squared_error():
    assert update_utility(0.0, 1.0, 0.0, 0.5) == -0.5


def test_utility_decays_without_error():
    assert update_utility(-1.0, 0.0, 0.0, 0.5) == -0.5


def test_utility_converges_to_geometric_sum():
    u = 0.0
    for _ in range(20):
        u = update_utility(u, 1.0, 0.0, 0.5)
    truncated = -sum(0.5 * 0.5 ** k for k in range(20))
    assert u == pytest.approx(truncated, abs=1e-15)
    assert u == pytest.approx(-1.0, abs=1e-5)


@given(u=finite, gamma=st.floats(min_value=0.0, max_value=1e3))
def test_equal_utilities_split_evenly(u, gamma):
    assert switching_fractions(u, u, gamma) == (0.5, 0.5)


@given(u_fund=finite, u_ext=finite)
def test_zero_intensity_splits_evenly(u_fund, u_ext):
    assert switching_fractions(u_fund, u_ext, 0.0) == (0.5, 0.5)


def test_logit_closed_form():
    gamma = 2.0
    alpha_fund, alpha_ext = switching_fractions(math.log(3.0) / gamma, 0.0, gamma)
    assert alpha_fund == pytest.approx(0.75, abs=1e-15)
    assert alpha_ext == pytest.approx(0.25, abs=1e-15)


@given(u_fund=finite, u_ext=finite, shift=finite, gamma=st.floats(min_value=0.0, max_value=10.0))
def test_fractions_are_shift_invariant_and_bounded(u_fund, u_ext, shift, gamma):
    alpha, rest = switching_fractions(u_fund, u_ext, gamma)
    shifted, _ = switching_fractions(u_fund + shift, u_ext + shift, gamma)
    assert 0.0 <= alpha <= 1.0
    assert abs(alpha + rest - 1.0) <= 1e-15
    assert shifted == pytest.approx(alpha, abs=1e-8)


@given(
    u_fund=st.integers(-2**20, 0),
    u_ext=st.integers(-2**20, 0),
    shift=st.integers(-2**20, 2**20),
    gamma=st.sampled_from([0.25, 0.5, 1.0, 2.0, 4.0]),
)
def test_exact_shift_leaves_fractions_unchanged(u_fund, u_ext, shift, gamma):
    alpha, rest = switching_fractions(float(u_fund), float(u_ext), gamma)
    shifted, shifted_rest = switching_fractions(float(u_fund + shift), float(u_ext + shift), gamma)
    assert abs(shifted - alpha) <= 1e-15
    assert abs(shifted_rest - rest) <= 1e-15
    assert abs(alpha + rest - 1.0) <= 1e-15


@given(gap=st.floats(min_value=-10.0, max_value=10.0), step=st.floats(min_value=1e-3, max_value=10.0))
def test_share_rises_with_utility_advantage(gap, step):
    lower, _ = switching_fractions(gap, 0.0, 1.0)
    higher, _ = switching_fractions(gap + step, 0.0, 1.0)
    assert higher > lower


def test_fractions_survive_extreme_utilities():
    alpha, _ = switching_fractions(-1e300, 0.0, 1e10)
    assert alpha == 0.0
    alpha, _ = switching_fractions(0.0, -1e300, 1e10)
    assert alpha == 1.0


def test_forecast_rules(params):
    assert behavioral_forecasts(0.3, -0.1, params) == (0.0, 0.3, 0.0, -0.1)
    targeted = replace(params, pi_target=0.5)
    assert behavioral_forecasts(0.0, 0.0, targeted)[2] == 0.5


@pytest.mark.parametrize(
    "alpha, f_fund, f_ext, expected",
    [(0.5, 0.0, 1.0, 0.5), (1.0, 0.7, -2.0, 0.7), (0.25, 0.0, 4.0, 3.0)],
)
def test_aggregate_expectation(alpha, f_fund, f_ext, expected):
    assert aggregate_expectation(alpha, f_fund, f_ext) == pytest.approx(expected)


def test_forecaster_scores_two_period_old_forecasts(params):
    state = initial_forecaster(0.0)
    state, _ = advance_forecaster(state, 0.0, 0.0, 0.4, params)
    state, _ = advance_forecaster(state, 0.0, 0.0, 0.4, params)
    state, _ = advance_forecaster(state, 0.4, 0.0, 0.4, params)
    # realized 0.4 is scored against the (0.0, 0.4) pair made two calls earlier
    assert state.u_fund == pytest.approx(-0.5 * 0.16)
    assert state.u_ext == pytest.approx(0.0)
    assert state.alpha_fund < 0.5
    assert state.forecast_history[-1] == (0.0, 0.4)


def test_no_lag_gives_zero_rule(params, kappa):
    A, B, b_eps, b_eta = re_system(replace(params, c3=0.0), kappa)
    rule = solve_re_rule(A, B, b_eps, b_eta, 0.0, 0.0)
    np.testing.assert_array_equal(rule.C, np.zeros((3, 3)))


def test_scalar_stable_root():
    rule = solve_re_rule([[0.5]], [[0.2]], [1.0], [0.0], 0.0, 0.0)
    assert rule.C[0, 0] == pytest.approx((1.0 - math.sqrt(0.6)) / 1.0, abs=1e-12)


def test_explosive_scalar_is_rejected():
    with pytest.raises((IndeterminacyError, InstabilityError)):
        solve_re_rule([[0.1]], [[1.5]], [1.0], [0.0], 0.0, 0.0)


def test_impulse_response_matches_stacked_perfect_foresight(params, kappa):
    A, B, b_eps, b_eta = re_system(params, kappa)
    rule = solve_re_rule(A, B, b_eps, b_eta, 0.0, 0.0)
    assert rule.spectral_radius < 1.0

    horizon = 200
    n = 3
    system = np.zeros((n * horizon, n * horizon))
    rhs = np.zeros(n * horizon)
    for t in range(horizon):
        rows = slice(n * t, n * t + n)
        system[rows, rows] = np.eye(n)
        if t + 1 < horizon:
            system[rows, n * (t + 1):n * (t + 2)] = -A
        if t > 0:
            system[rows, n * (t - 1):n * t] = -B
    rhs[:n] = b_eps
    stacked = np.linalg.solve(system, rhs).reshape(horizon, n)

    x = rule.D_eps.copy()
    rule_path = [x]
    for _ in range(1, 50):
        x = rule.C @ x
        rule_path.append(x)
    np.testing.assert_allclose(np.array(rule_path), stacked[:50], atol=1e-8)


@pytest.mark.parametrize("rho_eps, rho_eta", [(0.8, 0.9), (0.5, 0.0), (0.95, 0.6)])
def test_rational_forecasts_are_exact_without_noise(params, kappa, rho_eps, rho_eta):
    A, B, b_eps, b_eta = re_system(params, kappa)
    rule = solve_re_rule(A, B, b_eps, b_eta, rho_eps, rho_eta)

    horizon = 120
    eps = -0.27 * np.power(rho_eps, np.arange(horizon, dtype=float))
    eta = 0.64 * np.power(rho_eta, np.arange(horizon, dtype=float))
    x = np.zeros((horizon, 3))
    prev = np.zeros(3)
    for t in range(horizon):
        prev = rule.C @ prev + rule.D_eps * eps[t] + rule.D_eta * eta[t]
        x[t] = prev

    for t in range(horizon - 1):
        forecast = rule.C @ x[t] + rule.D_eps * rho_eps * eps[t] + rule.D_eta * rho_eta * eta[t]
        assert np.max(np.abs(x[t + 1] - forecast)) <= 1e-10
        lag = x[t - 1] if t > 0 else np.zeros(3)
        residual = x[t] - A @ forecast - B @ lag - b_eps * eps[t] - b_eta * eta[t]
        assert np.max(np.abs(residual)) <= 1e-10
