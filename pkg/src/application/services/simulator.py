"""T-period simulation of the behavioral and rational economies under a shock scenario."""

import numpy as np
from scipy.signal import lfilter

from ...domain.entities import (
    ModelKind,
    NoiseMode,
    ShockScenario,
    SimConfig,
    SimPath,
    StructuralParams
)
from ...domain.repositories import (
    ConfigurationError,
    IndeterminacyError,
    InstabilityError
)
from .econ_model import ThreeEquationSystem, compute_kappa, re_system, validate_params
from .expectations import (
    advance_forecaster,
    behavioral_forecasts,
    initial_forecaster,
    solve_re_rule
)


def validate_scenario(s: ShockScenario, T: int) -> ShockScenario:
    """Check that both shock windows lie inside [0, T).

    Raises:
        ConfigurationError: On a negative count, an out-of-range
            persistence or a window overflowing the simulation.
    """
    if s.t0 < 0:
        raise ConfigurationError(f"t0={s.t0} must be non-negative")
    if s.demand_quarters < 0 or s.supply_quarters < 0 or s.supply_offset < 0:
        raise ConfigurationError("shock durations and offsets must be non-negative")
    for name, rho in (("rho_eps", s.rho_eps), ("rho_eta", s.rho_eta)):
        if not 0.0 <= rho <= 1.0:
            raise ConfigurationError(f"{name}={rho} not in [0, 1]")
    if s.eta1 < 0.0:
        raise ConfigurationError(f"eta1={s.eta1} must be non-negative")
    for label, (first, last), count in (
        ("demand", s.demand_window, s.demand_quarters),
        ("supply", s.supply_window, s.supply_quarters),
    ):
        if count and last >= T:
            raise ConfigurationError(
                f"{label} window [{first}, {last}] overflows a {T}-period simulation"
            )
    return s


def validate_sim_config(cfg: SimConfig, s: ShockScenario) -> SimConfig:
    """Check the simulation settings against the scenario.

    Raises:
        ConfigurationError: On an invalid length, window or noise setting.
    """
    if cfg.T < 1:
        raise ConfigurationError(f"T={cfg.T} must be positive")
    if cfg.window_len < 1:
        raise ConfigurationError(f"window_len={cfg.window_len} must be positive")
    if s.t0 + cfg.window_len > cfg.T:
        raise ConfigurationError(
            f"evaluation window [{s.t0}, {s.t0 + cfg.window_len}) exceeds T={cfg.T}"
        )
    if cfg.window_len < s.demand_quarters:
        raise ConfigurationError(
            f"window_len={cfg.window_len} does not cover the "
            f"{s.demand_quarters}-quarter demand shock"
        )
    if cfg.seed < 0 or cfg.run_index < 0:
        raise ConfigurationError("seed and run_index must be non-negative")
    if cfg.noise_sd_demand < 0.0 or cfg.noise_sd_supply < 0.0:
        raise ConfigurationError("noise standard deviations must be non-negative")
    if cfg.noise_mode is NoiseMode.AR1 and not 0.0 <= cfg.noise_rho < 1.0:
        raise ConfigurationError(f"noise_rho={cfg.noise_rho} not in [0, 1)")
    return cfg


def shock_path(s: ShockScenario, T: int) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic demand and supply shock paths.

    Inside its window a shock decays as rho^(t - start) times its initial
    value, with rho^0 = 1 even for rho = 0; it is zero elsewhere.

    Raises:
        ConfigurationError: If a window overflows the simulation.
    """
    validate_scenario(s, T)
    eps = np.zeros(T)
    eta = np.zeros(T)

    first, _ = s.demand_window
    eps[first:first + s.demand_quarters] = s.eps1 * np.power(
        s.rho_eps, np.arange(s.demand_quarters, dtype=float)
    )
    first, _ = s.supply_window
    eta[first:first + s.supply_quarters] = s.eta1 * np.power(
        s.rho_eta, np.arange(s.supply_quarters, dtype=float)
    )
    return eps, eta


def run_generator(cfg: SimConfig) -> np.random.Generator:
    """Per-run generator seeded from (base seed, run index)."""
    return np.random.default_rng(np.random.SeedSequence([cfg.seed, cfg.run_index]))


def background_noise(cfg: SimConfig) -> tuple[np.ndarray, np.ndarray]:
    """Background innovations added to the demand and supply shock slots."""
    if cfg.noise_mode is NoiseMode.NONE:
        return np.zeros(cfg.T), np.zeros(cfg.T)

    rng = run_generator(cfg)
    demand = cfg.noise_sd_demand * rng.standard_normal(cfg.T)
    supply = cfg.noise_sd_supply * rng.standard_normal(cfg.T)
    if cfg.noise_mode is NoiseMode.AR1:
        demand = lfilter([1.0], [1.0, -cfg.noise_rho], demand)
        supply = lfilter([1.0], [1.0, -cfg.noise_rho], supply)
    return demand, supply


def simulate_behavioral(p: StructuralParams, s: ShockScenario, cfg: SimConfig) -> SimPath:
    """Simulate the economy with fundamentalist/extrapolator switching.

    Args:
        p: Structural parameters.
        s: Shock scenario.
        cfg: Simulation settings.

    Returns:
        The simulated path, fractions included.

    Raises:
        InvalidParameterError: If the parameters are out of range.
        ConfigurationError: If the scenario or settings are invalid.
        DegenerateParametersError: If the period system is singular.
    """
    validate_params(p)
    validate_sim_config(cfg, s)
    system = ThreeEquationSystem(p, compute_kappa(p))

    scenario_eps, scenario_eta = shock_path(s, cfg.T)
    noise_eps, noise_eta = background_noise(cfg)
    eps = scenario_eps + noise_eps
    eta = scenario_eta + noise_eta

    T = cfg.T
    y = [0.0] * T
    pi = [0.0] * T
    i = [0.0] * T
    alpha_y = [0.0] * T
    alpha_pi = [0.0] * T

    output_rules = initial_forecaster(0.0)
    inflation_rules = initial_forecaster(p.pi_target)
    y_prev = pi_prev = i_prev = 0.0
    eps_list = eps.tolist()
    eta_list = eta.tolist()

    for t in range(T):
        f_y_fund, f_y_ext, f_pi_fund, f_pi_ext = behavioral_forecasts(y_prev, pi_prev, p)
        output_rules, E_y = advance_forecaster(output_rules, y_prev, f_y_fund, f_y_ext, p)
        inflation_rules, E_pi = advance_forecaster(
            inflation_rules, pi_prev, f_pi_fund, f_pi_ext, p
        )
        y_prev, pi_prev, i_prev = system.solve(E_y, E_pi, eps_list[t], eta_list[t], i_prev)

        y[t] = y_prev
        pi[t] = pi_prev
        i[t] = i_prev
        alpha_y[t] = output_rules.alpha_fund
        alpha_pi[t] = inflation_rules.alpha_fund

    return SimPath(
        y=np.array(y),
        pi=np.array(pi),
        i=np.array(i),
        alpha_y=np.array(alpha_y),
        alpha_pi=np.array(alpha_pi),
        eps_path=eps,
        eta_path=eta,
        model_kind=ModelKind.BEHAVIORAL,
    )


def simulate_rational(p: StructuralParams, s: ShockScenario, cfg: SimConfig) -> SimPath:
    """Simulate the economy under model-consistent expectations.

    Scenario shocks are loaded with the persistence of their own AR(1)
    decay; background noise with noise_rho (ar1 mode) or zero.

    Raises:
        IndeterminacyError: If the decision rule does not converge.
        InstabilityError: If the decision rule is explosive.
    """
    validate_params(p)
    validate_sim_config(cfg, s)
    kappa = compute_kappa(p)
    A, B, b_eps, b_eta = re_system(p, kappa)

    noise_rho = cfg.noise_rho if cfg.noise_mode is NoiseMode.AR1 else 0.0
    try:
        rule = solve_re_rule(A, B, b_eps, b_eta, s.rho_eps, s.rho_eta)
        noise_rule = solve_re_rule(A, B, b_eps, b_eta, noise_rho, noise_rho)
    except (IndeterminacyError, InstabilityError) as e:
        raise type(e)(
            f"{e}; parameters c1={p.c1}, c2={p.c2}, c3={p.c3}, "
            f"sigma={p.sigma}, beta={p.beta}, kappa={kappa:.6f}"
        ) from e

    scenario_eps, scenario_eta = shock_path(s, cfg.T)
    noise_eps, noise_eta = background_noise(cfg)

    impulses = (
        np.outer(scenario_eps, rule.D_eps)
        + np.outer(scenario_eta, rule.D_eta)
        + np.outer(noise_eps, noise_rule.D_eps)
        + np.outer(noise_eta, noise_rule.D_eta)
    )
    x = np.zeros((cfg.T, 3))
    x_prev = np.zeros(3)
    for t in range(cfg.T):
        x_prev = rule.C @ x_prev + impulses[t]
        x[t] = x_prev

    return SimPath(
        y=x[:, 0].copy(),
        pi=x[:, 1].copy(),
        i=x[:, 2].copy(),
        alpha_y=None,
        alpha_pi=None,
        eps_path=scenario_eps + noise_eps,
        eta_path=scenario_eta + noise_eta,
        model_kind=ModelKind.RATIONAL,
    )


def simulate(
    model_kind: ModelKind,
    p: StructuralParams,
    s: ShockScenario,
    cfg: SimConfig
) -> SimPath:
    """Dispatch to the simulator of an expectation regime."""
    if model_kind is ModelKind.BEHAVIORAL:
        return simulate_behavioral(p, s, cfg)
    return simulate_rational(p, s, cfg)


def extract_window(path: SimPath, t0: int, length: int) -> tuple[np.ndarray, np.ndarray]:
    """Contiguous (output gap, inflation) slices starting at t0.

    Raises:
        IndexError: If the window leaves the path.
    """
    if length < 1 or t0 < 0 or t0 + length > path.T:
        raise IndexError(
            f"window [{t0}, {t0 + length}) is outside a path of length {path.T}"
        )
    return path.y[t0:t0 + length].copy(), path.pi[t0:t0 + length].copy()
