"""Trend-cycle decomposition of log real GDP: HP filter and a two-state Kalman filter."""

import numpy as np
from scipy import sparse
from scipy.linalg import solveh_banded

from ... import logger
from ...domain.entities import KalmanResult, KalmanSpec
from ...domain.repositories import SampleSizeError, SpecificationError

_PSD_TOLERANCE = 1e-12


def hp_filter(z: np.ndarray, lamb: float = 1600.0) -> tuple[np.ndarray, np.ndarray]:
    """Hodrick-Prescott decomposition.

    The trend solves (I + lamb D'D) t = z, D being the (n-2) x n second
    difference operator; the system is symmetric pentadiagonal and is
    factorized in banded form.

    Args:
        z: Series to decompose (typically log real GDP).
        lamb: Smoothing parameter (1600 for quarterly data).

    Returns:
        (trend, cycle) with cycle = z - trend.

    Raises:
        SampleSizeError: If the series has fewer than 4 observations.
        ValueError: If lamb is not positive or z is not finite.
    """
    z = np.asarray(z, dtype=float)
    n = z.size
    if n < 4:
        raise SampleSizeError(f"HP filter needs at least 4 observations, got {n}")
    if not lamb > 0.0:
        raise ValueError(f"lambda must be positive, got {lamb}")
    if not np.all(np.isfinite(z)):
        raise ValueError("HP filter input must be finite")

    D = sparse.diags([1.0, -2.0, 1.0], [0, 1, 2], shape=(n - 2, n))
    K = (sparse.eye(n) + lamb * (D.T @ D)).todia()

    # upper banded storage: row 2 - k holds the k-th superdiagonal
    bands = np.zeros((3, n))
    for k in range(3):
        bands[2 - k, k:] = K.diagonal(k)

    trend = solveh_banded(bands, z)
    return trend, z - trend


def _check_psd(name: str, M: np.ndarray) -> None:
    if M.shape != (2, 2):
        raise SpecificationError(f"{name} must be 2x2, got shape {M.shape}")
    if not np.allclose(M, M.T, atol=_PSD_TOLERANCE):
        raise SpecificationError(f"{name} is not symmetric")
    if np.min(np.linalg.eigvalsh(M)) < -_PSD_TOLERANCE:
        raise SpecificationError(f"{name} is not positive semidefinite")


def validate_kalman_spec(spec: KalmanSpec) -> KalmanSpec:
    """Check shapes, V > 0 and positive semidefinite W and C0.

    Raises:
        SpecificationError: On the first violated requirement.
    """
    if np.shape(spec.F) != (1, 2):
        raise SpecificationError(f"F must be 1x2, got shape {np.shape(spec.F)}")
    if np.shape(spec.G) != (2, 2):
        raise SpecificationError(f"G must be 2x2, got shape {np.shape(spec.G)}")
    if not spec.V > 0.0:
        raise SpecificationError(f"measurement variance V={spec.V} must be positive")
    _check_psd("W", np.asarray(spec.W, dtype=float))
    _check_psd("C0", np.asarray(spec.C0, dtype=float))
    return spec


def kalman_filter(z: np.ndarray, spec: KalmanSpec) -> KalmanResult:
    """Predict/update recursion of the two-state trend model.

    Starting from (s0, C0), each observation z_t is processed as

        s_{t|t-1} = G s_{t-1|t-1},     P_{t|t-1} = G P G' + W
        K_t = P_{t|t-1} F' (F P_{t|t-1} F' + V)^{-1}
        s_{t|t} = s_{t|t-1} + K_t (z_t - F s_{t|t-1})
        P_{t|t} = (I - K_t F) P_{t|t-1}

    Raises:
        SampleSizeError: If fewer than 3 observations are given.
        SpecificationError: If the specification is invalid.
    """
    z = np.asarray(z, dtype=float)
    n = z.size
    if n < 3:
        raise SampleSizeError(f"Kalman filter needs at least 3 observations, got {n}")
    validate_kalman_spec(spec)

    F = np.asarray(spec.F, dtype=float)
    G = np.asarray(spec.G, dtype=float)
    W = np.asarray(spec.W, dtype=float)
    identity = np.eye(2)

    s = np.array([z[0], 0.0]) if spec.s0 is None else np.asarray(spec.s0, dtype=float)
    P = np.asarray(spec.C0, dtype=float).copy()

    states = np.empty((n, 2))
    filtered_cov = np.empty((n, 2, 2))
    predicted_cov = np.empty((n, 2, 2))
    errors = np.empty(n)

    for t in range(n):
        s_pred = G @ s
        P_pred = G @ P @ G.T + W
        P_pred = 0.5 * (P_pred + P_pred.T)

        innovation_var = (F @ P_pred @ F.T).item() + spec.V
        gain = (P_pred @ F.T) / innovation_var
        error = z[t] - (F @ s_pred).item()

        s = s_pred + gain[:, 0] * error
        P = (identity - gain @ F) @ P_pred
        P = 0.5 * (P + P.T)

        states[t] = s
        filtered_cov[t] = P
        predicted_cov[t] = P_pred
        errors[t] = error

    return KalmanResult(
        filtered_states=states,
        filtered_cov=filtered_cov,
        predicted_cov=predicted_cov,
        prediction_errors=errors,
    )


def kalman_output_gap(z: np.ndarray, spec: KalmanSpec) -> np.ndarray:
    """Output gap z_t - s1_t from filtered states, first observation dropped.

    The first two potential-output estimates coincide, so the gap series
    starts one quarter after the input.
    """
    result = kalman_filter(z, spec)
    gap = np.asarray(z, dtype=float) - result.filtered_states[:, 0]
    logger.debug(f"Kalman gap computed for {len(gap)} observations")
    return gap[1:]
