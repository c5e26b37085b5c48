"""Expectation formation: fundamentalist/extrapolator switching and the rational solver."""

import numpy as np
from scipy import special

from ... import logger
from ...domain.entities import ForecasterState, ReDecisionRule, StructuralParams
from ...domain.repositories import (
    DegenerateParametersError,
    IndeterminacyError,
    InstabilityError
)

RE_TOLERANCE = 1e-12
RE_MAX_ITERATIONS = 10_000


def update_utility(
    prev_utility: float,
    realized: float,
    forecast_two_lags: float,
    rho_mem: float
) -> float:
    """Geometrically weighted negative squared forecast error, updated one period.

    Recursive form of U_t = -sum_k (1 - rho) rho^k err_{t-k-1}^2.
    """
    error = realized - forecast_two_lags
    return rho_mem * prev_utility - (1.0 - rho_mem) * error * error


def switching_fractions(
    u_fund: float,
    u_ext: float,
    gamma: float
) -> tuple[float, float]:
    """Logit shares of the fundamentalist and extrapolator rules.

    The two-way logit exp(a) / (exp(a) + exp(b)) is the logistic function
    of a - b; expit evaluates it without overflow, so gamma * U products
    far outside the float range still give shares in [0, 1].
    """
    alpha_fund = float(special.expit(gamma * u_fund - gamma * u_ext))
    return alpha_fund, 1.0 - alpha_fund


def behavioral_forecasts(
    y_prev: float,
    pi_prev: float,
    p: StructuralParams
) -> tuple[float, float, float, float]:
    """Rule forecasts (f_y_fund, f_y_ext, f_pi_fund, f_pi_ext).

    Fundamentalists anchor on the steady state (zero gap, the inflation
    target); extrapolators carry the last observed value forward.
    """
    return 0.0, y_prev, p.pi_target, pi_prev


def aggregate_expectation(alpha_fund: float, f_fund: float, f_ext: float) -> float:
    """Market expectation as the share-weighted average of the two rules."""
    return alpha_fund * f_fund + (1.0 - alpha_fund) * f_ext


def initial_forecaster(anchor: float = 0.0) -> ForecasterState:
    """Forecaster state before the first period: equal utilities, equal shares."""
    history = ((anchor, 0.0), (anchor, 0.0))
    return ForecasterState(u_fund=0.0, u_ext=0.0, alpha_fund=0.5, forecast_history=history)


def advance_forecaster(
    state: ForecasterState,
    realized: float,
    f_fund: float,
    f_ext: float,
    p: StructuralParams
) -> tuple[ForecasterState, float]:
    """Run one period of the forecaster population for one variable.

    Order within the period: utilities are scored on the last realized
    value against the forecasts made two periods ago, shares are updated,
    then the new forecasts are combined into the market expectation.

    Args:
        state: State carried from the previous period.
        realized: Value realized last period.
        f_fund: Fundamentalist forecast made this period.
        f_ext: Extrapolator forecast made this period.
        p: Structural parameters (gamma, rho_mem).

    Returns:
        (new state, market expectation).
    """
    (old_fund, old_ext), latest = state.forecast_history
    u_fund = update_utility(state.u_fund, realized, old_fund, p.rho_mem)
    u_ext = update_utility(state.u_ext, realized, old_ext, p.rho_mem)
    alpha_fund, _ = switching_fractions(u_fund, u_ext, p.gamma)
    expectation = aggregate_expectation(alpha_fund, f_fund, f_ext)
    new_state = ForecasterState(
        u_fund=u_fund,
        u_ext=u_ext,
        alpha_fund=alpha_fund,
        forecast_history=(latest, (f_fund, f_ext)),
    )
    return new_state, expectation


def _shock_loading(
    A: np.ndarray,
    C: np.ndarray,
    b: np.ndarray,
    rho: float
) -> np.ndarray:
    """Solve (I - A C - rho A) D = b for the loading of an AR(1) shock."""
    M = np.eye(A.shape[0]) - A @ C - rho * A
    try:
        return np.linalg.solve(M, b)
    except np.linalg.LinAlgError as e:
        raise DegenerateParametersError(
            f"shock loading is undetermined for persistence rho={rho}"
        ) from e


def solve_re_rule(
    A: np.ndarray,
    B: np.ndarray,
    b_eps: np.ndarray,
    b_eta: np.ndarray,
    rho_eps: float,
    rho_eta: float
) -> ReDecisionRule:
    """Model-consistent decision rule of x_t = A E_t x_{t+1} + B x_{t-1} + b u_t.

    C is the fixed point of C = (I - A C)^{-1} B iterated from zero; each
    shock loading solves D = (I - A C)^{-1} (rho A D + b).

    Args:
        A: Expectation loading.
        B: Lag loading.
        b_eps: Demand-shock loading.
        b_eta: Supply-shock loading.
        rho_eps: Persistence the agents attach to the demand shock.
        rho_eta: Persistence the agents attach to the supply shock.

    Returns:
        The decision rule.

    Raises:
        IndeterminacyError: If the iteration does not converge.
        InstabilityError: If C has an eigenvalue on or outside the unit circle.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    n = A.shape[0]
    identity = np.eye(n)
    C = np.zeros((n, n))

    for iteration in range(1, RE_MAX_ITERATIONS + 1):
        try:
            C_next = np.linalg.solve(identity - A @ C, B)
        except np.linalg.LinAlgError as e:
            raise IndeterminacyError(
                f"I - A C became singular at iteration {iteration}"
            ) from e
        change = np.max(np.abs(C_next - C))
        C = C_next
        if not np.isfinite(change):
            raise IndeterminacyError(
                f"decision-rule iteration diverged at iteration {iteration}"
            )
        if change < RE_TOLERANCE:
            break
    else:
        raise IndeterminacyError(
            f"decision-rule iteration did not converge in {RE_MAX_ITERATIONS} "
            f"iterations (last change {change:.3e})"
        )

    rule = ReDecisionRule(
        C=C,
        D_eps=_shock_loading(A, C, np.asarray(b_eps, dtype=float), rho_eps),
        D_eta=_shock_loading(A, C, np.asarray(b_eta, dtype=float), rho_eta),
        iterations=iteration,
    )
    radius = rule.spectral_radius
    if radius >= 1.0:
        raise InstabilityError(f"decision rule is explosive (spectral radius {radius:.6f})")

    logger.debug(f"Rational decision rule converged in {iteration} iterations")
    return rule
