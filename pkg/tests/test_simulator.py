"""Tests for shock paths, the two simulators and window extraction."""

from dataclasses import replace

import numpy as np
import pytest

from src.application.services.econ_model import compute_kappa, solve_period
from src.application.services.simulator import (
    background_noise,
    extract_window,
    shock_path,
    simulate,
    simulate_behavioral,
    simulate_rational
)
from src.domain.entities import ModelKind, NoiseMode, ShockScenario, SimConfig
from src.domain.repositories import ConfigurationError, InvalidParameterError

ZERO_SHOCKS = ShockScenario(eps1=0.0, eta1=0.0, t0=10)


def test_demand_shock_decays_geometrically():
    s = ShockScenario()
    eps, eta = shock_path(s, 2000)
    assert eps[s.t0] == -0.27
    assert eps[s.t0 + 1] == pytest.approx(-0.216, abs=1e-15)
    assert eps[s.t0 + 9] != 0.0
    assert eps[s.t0 + 10] == 0.0
    assert eps[s.t0 - 1] == 0.0


def test_supply_shock_window():
    s = ShockScenario()
    _, eta = shock_path(s, 2000)
    first, last = s.supply_window
    assert np.all(eta[:first] == 0.0)
    assert eta[first] == 0.64
    assert eta[first + 1] == pytest.approx(0.64 * 0.9)
    assert eta[last] != 0.0
    assert np.all(eta[last + 1:] == 0.0)


def test_zero_persistence_is_one_quarter_impulse():
    s = ShockScenario(rho_eps=0.0)
    eps, _ = shock_path(s, 2000)
    assert eps[s.t0] == -0.27
    assert np.count_nonzero(eps) == 1


def test_overflowing_window_is_rejected():
    with pytest.raises(ConfigurationError):
        shock_path(ShockScenario(t0=1995), 2000)


@pytest.mark.parametrize("model_kind", list(ModelKind))
def test_zero_input_gives_zero_path(params, quiet_config, model_kind):
    path = simulate(model_kind, params, ZERO_SHOCKS, quiet_config)
    for series in (path.y, path.pi, path.i):
        np.testing.assert_array_equal(series, np.zeros(quiet_config.T))
    if model_kind is ModelKind.BEHAVIORAL:
        np.testing.assert_array_equal(path.alpha_y, np.full(quiet_config.T, 0.5))
        np.testing.assert_array_equal(path.alpha_pi, np.full(quiet_config.T, 0.5))
    else:
        assert path.alpha_y is None


@pytest.mark.parametrize("model_kind", list(ModelKind))
def test_fixed_seed_is_bit_identical(params, model_kind):
    cfg = SimConfig(T=300, seed=17, run_index=3, noise_mode=NoiseMode.WHITE)
    s = ShockScenario(t0=100)
    first = simulate(model_kind, params, s, cfg)
    second = simulate(model_kind, params, s, cfg)
    np.testing.assert_array_equal(first.y, second.y)
    np.testing.assert_array_equal(first.pi, second.pi)
    np.testing.assert_array_equal(first.i, second.i)


def test_run_index_changes_noise():
    cfg = SimConfig(T=100, seed=5, noise_mode=NoiseMode.WHITE)
    a, _ = background_noise(cfg)
    b, _ = background_noise(replace(cfg, run_index=1))
    assert not np.array_equal(a, b)


def test_ar1_noise_follows_recursion():
    cfg = SimConfig(T=50, seed=1, noise_mode=NoiseMode.AR1, noise_rho=0.95)
    white, _ = background_noise(replace(cfg, noise_mode=NoiseMode.WHITE))
    ar1, _ = background_noise(cfg)
    expected = np.empty_like(white)
    level = 0.0
    for t, shock in enumerate(white):
        level = 0.95 * level + shock
        expected[t] = level
    np.testing.assert_allclose(ar1, expected, atol=1e-12)


def test_fractions_stay_in_unit_interval(params):
    cfg = SimConfig(T=500, seed=2, noise_mode=NoiseMode.WHITE)
    path = simulate_behavioral(params, ShockScenario(t0=200), cfg)
    for alpha in (path.alpha_y, path.alpha_pi):
        assert np.all((alpha >= 0.0) & (alpha <= 1.0))
    assert np.all(np.isfinite(path.y))


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(100))
def test_fractions_stay_in_unit_interval_over_seeds(params, seed):
    cfg = SimConfig(T=2000, seed=seed, noise_mode=NoiseMode.WHITE)
    path = simulate_behavioral(params, ShockScenario(), cfg)
    for alpha in (path.alpha_y, path.alpha_pi):
        assert not np.any(np.isnan(alpha))
        assert np.all((alpha >= 0.0) & (alpha <= 1.0))
    for series in (path.y, path.pi, path.i):
        assert np.all(np.isfinite(series))


def test_covid_scenario_depresses_output(params, quiet_config):
    s = ShockScenario(t0=10)
    for model_kind in ModelKind:
        path = simulate(model_kind, params, s, quiet_config)
        assert path.y[s.t0] < 0.0
        np.testing.assert_array_equal(path.y[:s.t0], np.zeros(s.t0))


def test_rational_paths_superpose(params, quiet_config):
    both = ShockScenario(t0=10)
    demand_only = replace(both, eta1=0.0)
    supply_only = replace(both, eps1=0.0)
    total = simulate_rational(params, both, quiet_config)
    parts = (
        simulate_rational(params, demand_only, quiet_config).y
        + simulate_rational(params, supply_only, quiet_config).y
    )
    np.testing.assert_allclose(total.y, parts, atol=1e-13)


def test_regimes_agree_on_impact_without_state(params):
    p = replace(params, c3=0.0)
    s = ShockScenario(rho_eps=0.0, demand_quarters=1, eta1=0.0, supply_quarters=0, t0=5)
    cfg = SimConfig(T=30, window_len=16, noise_mode=NoiseMode.NONE)
    behavioral = simulate_behavioral(p, s, cfg)
    rational = simulate_rational(p, s, cfg)
    impact = solve_period(0.0, 0.0, s.eps1, 0.0, 0.0, p, compute_kappa(p))
    assert behavioral.y[s.t0] == pytest.approx(impact.y, abs=1e-14)
    assert rational.y[s.t0] == pytest.approx(impact.y, abs=1e-14)
    assert rational.pi[s.t0] == pytest.approx(behavioral.pi[s.t0], abs=1e-14)


def test_rational_rate_decays_after_shock(params, quiet_config):
    s = ShockScenario(rho_eps=0.0, demand_quarters=1, eta1=0.0, supply_quarters=0, t0=10)
    path = simulate_rational(params, s, quiet_config)
    tail = path.i[s.t0 + 1:s.t0 + 20]
    assert np.all(np.abs(tail[1:]) < np.abs(tail[:-1]))


def test_invalid_parameters_are_rejected(params, quiet_config):
    with pytest.raises(InvalidParameterError):
        simulate_behavioral(replace(params, c1=0.5), ZERO_SHOCKS, quiet_config)


def test_window_shorter_than_demand_shock_is_rejected(params):
    cfg = SimConfig(T=60, window_len=8, noise_mode=NoiseMode.NONE)
    with pytest.raises(ConfigurationError):
        simulate_behavioral(params, ShockScenario(t0=10), cfg)


def test_extract_window_bounds(params, quiet_config):
    path = simulate(ModelKind.BEHAVIORAL, params, ShockScenario(t0=10), quiet_config)
    y, pi = extract_window(path, 10, 16)
    assert len(y) == len(pi) == 16
    y, _ = extract_window(path, path.T - 16, 16)
    assert len(y) == 16
    with pytest.raises(IndexError):
        extract_window(path, path.T - 15, 16)
    with pytest.raises(IndexError):
        extract_window(path, -1, 16)
