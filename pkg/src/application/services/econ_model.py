"""Three-equation New Keynesian model: AD curve, Phillips curve, Taylor rule.

All variables are deviations from a zero steady state:

    y_t  = E_t y_{t+1} - (1/sigma) (i_t - E_t pi_{t+1}) + eps_t
    pi_t = beta E_t pi_{t+1} + kappa y_t + eta_t
    i_t  = (1 - c3) (c1 pi_t + c2 y_t) + c3 i_{t-1}

The expectation operator is left abstract here; the expectations module
supplies behavioral or model-consistent values.
"""

import math

import numpy as np

from ...domain.entities import PeriodState, StructuralParams
from ...domain.repositories import DegenerateParametersError, InvalidParameterError

# below this the period system is treated as singular
_SINGULAR_DET = 1e-12


def validate_params(p: StructuralParams) -> StructuralParams:
    """Check the admissible ranges of every structural parameter.

    Args:
        p: Parameters to check.

    Returns:
        The same parameters, for chaining.

    Raises:
        InvalidParameterError: Listing every violated constraint.
    """
    violations = []
    if not 0.0 < p.beta < 1.0:
        violations.append(f"beta={p.beta} not in (0, 1)")
    if not 0.0 < p.theta < 1.0:
        violations.append(f"theta={p.theta} not in (0, 1)")
    if not 0.0 < p.rho_mem < 1.0:
        violations.append(f"rho_mem={p.rho_mem} not in (0, 1)")
    if not 0.0 < p.varsigma < 1.0:
        violations.append(f"varsigma={p.varsigma} not in (0, 1)")
    if not p.c1 > 1.0:
        violations.append(f"c1={p.c1} must exceed 1")
    if not 0.0 < p.c2 < 1.0:
        violations.append(f"c2={p.c2} not in (0, 1)")
    if not 0.0 <= p.c3 < 1.0:
        violations.append(f"c3={p.c3} not in [0, 1)")
    if not p.sigma > 0.0:
        violations.append(f"sigma={p.sigma} must be positive")
    if not p.e_price > 1.0:
        violations.append(f"e_price={p.e_price} must exceed 1")
    if not p.chi >= 0.0:
        violations.append(f"chi={p.chi} must be non-negative")
    if not p.gamma >= 0.0:
        violations.append(f"gamma={p.gamma} must be non-negative")
    if not all(math.isfinite(v) for v in p.to_dict().values()):
        violations.append("all parameters must be finite")

    if violations:
        raise InvalidParameterError("; ".join(violations))
    return p


def compute_kappa(p: StructuralParams) -> float:
    """Slope of the Phillips curve implied by Calvo pricing.

    kappa = (1-theta)(1-beta theta)/theta * (sigma(1-vs) + chi + vs) / (1 - vs + vs e)

    Raises:
        ZeroDivisionError: For theta = 0 (fully flexible prices) or a
            vanishing elasticity denominator.
    """
    if p.theta == 0.0:
        raise ZeroDivisionError(
            "theta = 0 means fully flexible prices; kappa is unbounded"
        )
    denominator = 1.0 - p.varsigma + p.varsigma * p.e_price
    if denominator == 0.0:
        raise ZeroDivisionError("1 - varsigma + varsigma * e_price vanishes")

    rigidity = (1.0 - p.theta) * (1.0 - p.beta * p.theta) / p.theta
    return rigidity * (p.sigma * (1.0 - p.varsigma) + p.chi + p.varsigma) / denominator


def markup(p: StructuralParams) -> float:
    """Gross price markup e/(e-1) of monopolistically competitive firms."""
    return p.e_price / (p.e_price - 1.0)


def taylor_rate(pi: float, y: float, i_prev: float, p: StructuralParams) -> float:
    """Smoothed Taylor rule, without a lower bound."""
    return (1.0 - p.c3) * (p.c1 * pi + p.c2 * y) + p.c3 * i_prev


class ThreeEquationSystem:
    """Period solver with the parameter-dependent coefficients precomputed.

    The simulator calls solve() thousands of times per run, so the
    elimination coefficients are computed once per parameter set.
    """

    def __init__(self, p: StructuralParams, kappa: float):
        """Prepare the elimination for one parameter set.

        Args:
            p: Structural parameters.
            kappa: Phillips-curve slope.

        Raises:
            DegenerateParametersError: If the system has no unique solution.
        """
        self.p = p
        self.kappa = kappa
        self._d1 = (1.0 - p.c3) * p.c1
        self._d2 = (1.0 - p.c3) * p.c2
        self._inv_sigma = 1.0 / p.sigma
        # determinant of the contemporaneous matrix
        self.det = 1.0 + (self._d1 * kappa + self._d2) * self._inv_sigma
        if not math.isfinite(self.det) or abs(self.det) < _SINGULAR_DET:
            raise DegenerateParametersError(
                f"period system is singular (det={self.det:.3e}) for "
                f"sigma={p.sigma}, kappa={kappa}, c1={p.c1}, c2={p.c2}, c3={p.c3}"
            )

    def solve(
        self,
        E_y: float,
        E_pi: float,
        eps: float,
        eta: float,
        i_prev: float
    ) -> tuple[float, float, float]:
        """Solve for (y, pi, i) given expectations, shocks and the lagged rate."""
        pi_base = self.p.beta * E_pi + eta
        i_base = self._d1 * pi_base + self.p.c3 * i_prev
        y = (E_y + E_pi * self._inv_sigma + eps - i_base * self._inv_sigma) / self.det
        pi = pi_base + self.kappa * y
        i = i_base + (self._d1 * self.kappa + self._d2) * y
        return y, pi, i


def solve_period(
    E_y: float,
    E_pi: float,
    eps: float,
    eta: float,
    i_prev: float,
    p: StructuralParams,
    kappa: float
) -> PeriodState:
    """Solve the three simultaneous equations for one quarter.

    Args:
        E_y: Expected next-period output gap.
        E_pi: Expected next-period inflation.
        eps: Demand shock.
        eta: Supply shock.
        i_prev: Previous nominal rate.
        p: Structural parameters.
        kappa: Phillips-curve slope.

    Returns:
        PeriodState satisfying all three equations.

    Raises:
        DegenerateParametersError: If the system is singular.
    """
    y, pi, i = ThreeEquationSystem(p, kappa).solve(E_y, E_pi, eps, eta, i_prev)
    return PeriodState(y=y, pi=pi, i=i)


def structural_matrices(
    p: StructuralParams,
    kappa: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Matrix form A0 x_t = A1 E_t x_{t+1} + B1 x_{t-1} + e_eps eps_t + e_eta eta_t.

    x is ordered (y, pi, i).

    Returns:
        (A0, A1, B1, e_eps, e_eta).
    """
    A0 = np.array([
        [1.0, 0.0, 1.0 / p.sigma],
        [-kappa, 1.0, 0.0],
        [-(1.0 - p.c3) * p.c2, -(1.0 - p.c3) * p.c1, 1.0],
    ])
    A1 = np.array([
        [1.0, 1.0 / p.sigma, 0.0],
        [0.0, p.beta, 0.0],
        [0.0, 0.0, 0.0],
    ])
    B1 = np.zeros((3, 3))
    B1[2, 2] = p.c3
    e_eps = np.array([1.0, 0.0, 0.0])
    e_eta = np.array([0.0, 1.0, 0.0])
    return A0, A1, B1, e_eps, e_eta


def re_system(
    p: StructuralParams,
    kappa: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Reduced form x_t = A E_t x_{t+1} + B x_{t-1} + b_eps eps_t + b_eta eta_t.

    Raises:
        DegenerateParametersError: If the contemporaneous matrix is singular.
    """
    A0, A1, B1, e_eps, e_eta = structural_matrices(p, kappa)
    try:
        A0_inv = np.linalg.inv(A0)
    except np.linalg.LinAlgError as e:
        raise DegenerateParametersError(
            f"contemporaneous matrix is singular for kappa={kappa}, c1={p.c1}"
        ) from e
    return A0_inv @ A1, A0_inv @ B1, A0_inv @ e_eps, A0_inv @ e_eta
