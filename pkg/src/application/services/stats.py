"""Moments, normality and structural-break tests, and the calibration distance."""

from typing import Optional, Union

import numpy as np
import pandas as pd
from scipy import special, stats

from ...domain.entities import (
    BreakTestResult,
    JarqueBeraResult,
    MahalanobisSpec,
    MahalanobisStrategy,
    MomentSet,
    QuarterlySeries
)
from ...domain.repositories import (
    DegenerateSampleError,
    PartitionError,
    SampleSizeError,
    SingularCovarianceError
)

JB_MIN_OBSERVATIONS = 8
_EXACT_FIT_RTOL = 1e-12


def moments(x: np.ndarray) -> MomentSet:
    """Mean, unbiased variance, skewness and raw kurtosis.

    Skewness and kurtosis use the biased central moments m_k = sum (x-m)^k / n.

    Raises:
        SampleSizeError: If fewer than 2 observations are given.
        DegenerateSampleError: If the sample has no dispersion.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 2:
        raise SampleSizeError(f"moments need at least 2 observations, got {n}")

    mean = float(np.mean(x))
    m2 = float(np.mean((x - mean) ** 2))
    if np.ptp(x) == 0.0 or m2 == 0.0:
        raise DegenerateSampleError(
            "sample has zero variance; skewness and kurtosis are undefined"
        )

    return MomentSet(
        mean=mean,
        variance=float(np.var(x, ddof=1)),
        skewness=float(stats.skew(x, bias=True)),
        kurtosis=float(stats.kurtosis(x, fisher=False, bias=True)),
        n=n,
    )


def jarque_bera(x: np.ndarray) -> JarqueBeraResult:
    """Jarque-Bera statistic with its exact chi-square(2) p-value exp(-jb/2).

    Raises:
        SampleSizeError: If fewer than 8 observations are given.
        DegenerateSampleError: If the sample has no dispersion.
    """
    x = np.asarray(x, dtype=float)
    if x.size < JB_MIN_OBSERVATIONS:
        raise SampleSizeError(
            f"Jarque-Bera needs at least {JB_MIN_OBSERVATIONS} observations, got {x.size}"
        )
    m = moments(x)
    jb = m.n / 6.0 * (m.skewness ** 2 + (m.kurtosis - 3.0) ** 2 / 4.0)
    return JarqueBeraResult(
        jb=jb,
        p_value=float(np.exp(-jb / 2.0)),
        n=m.n,
        skewness=m.skewness,
        kurtosis=m.kurtosis,
    )


def mahalanobis(
    s_sim: np.ndarray,
    s_data: np.ndarray,
    windows: Optional[np.ndarray] = None,
    spec: MahalanobisSpec = MahalanobisSpec()
) -> float:
    """Covariance-weighted distance between simulated and empirical moment vectors.

    paper_two_obs treats the two vectors as two observations of a
    2-dimensional variable; the resulting covariance is rank one and is
    inverted with a pseudo-inverse, so every distinct pair sits at sqrt(2).
    paired_series uses the covariance of the quarterly (gap, inflation)
    pairs of the data window.

    Args:
        s_sim: Simulated moment vector.
        s_data: Empirical moment vector.
        windows: n x 2 data window (paired_series only).
        spec: Strategy and pseudo-inverse cutoff.

    Raises:
        ValueError: On non-finite vectors, a non-positive tolerance or a
            missing window.
        SingularCovarianceError: If paired_series meets a singular
            covariance with a nonzero difference.
    """
    s_sim = np.asarray(s_sim, dtype=float).ravel()
    s_data = np.asarray(s_data, dtype=float).ravel()
    if s_sim.shape != s_data.shape:
        raise ValueError(f"vector shapes differ: {s_sim.shape} vs {s_data.shape}")
    if not (np.all(np.isfinite(s_sim)) and np.all(np.isfinite(s_data))):
        raise ValueError("moment vectors must be finite")
    if not spec.pinv_tolerance > 0.0:
        raise ValueError(f"pinv_tolerance={spec.pinv_tolerance} must be positive")

    diff = s_sim - s_data
    if not np.any(diff):
        return 0.0

    if spec.strategy is MahalanobisStrategy.PAPER_TWO_OBS:
        sigma = np.cov(np.vstack([s_sim, s_data]), rowvar=False)
        sigma_inv = np.linalg.pinv(sigma, rcond=spec.pinv_tolerance, hermitian=True)
        quad = float(diff @ sigma_inv @ diff)
        return float(np.sqrt(max(quad, 0.0)))

    if windows is None:
        raise ValueError("paired_series strategy needs the data window")
    windows = np.asarray(windows, dtype=float)
    if windows.ndim != 2 or windows.shape[1] != diff.size:
        raise ValueError(f"window must be n x {diff.size}, got shape {windows.shape}")

    sigma = np.atleast_2d(np.cov(windows, rowvar=False))
    singular_values = np.linalg.svd(sigma, compute_uv=False)
    if singular_values[0] == 0.0 or singular_values[-1] <= spec.pinv_tolerance * singular_values[0]:
        raise SingularCovarianceError(
            "data-window covariance is singular; paired_series distance is undefined"
        )
    quad = float(diff @ np.linalg.solve(sigma, diff))
    return float(np.sqrt(max(quad, 0.0)))


def _as_dated_series(x: Union[QuarterlySeries, pd.Series]) -> pd.Series:
    if isinstance(x, QuarterlySeries):
        return x.data
    return x


def lr_break_test(
    x: Union[QuarterlySeries, pd.Series],
    break_date: Union[str, pd.Period]
) -> BreakTestResult:
    """Constant-mean model against separate means before and after a break.

    The break quarter closes the pre-break subsample (t <= break_date).
    F = (rss1 - rss2) / (rss2 / (n - 2)) with (1, n - 2) degrees of freedom;
    the p-value is the regularized incomplete beta form of the F survival
    function.

    Raises:
        PartitionError: If either side has fewer than 2 observations.
    """
    series = _as_dated_series(x).astype(float)
    break_period = pd.Period(break_date, freq="Q")
    pre_mask = np.asarray(series.index <= break_period)
    pre = series.to_numpy()[pre_mask]
    post = series.to_numpy()[~pre_mask]
    if pre.size < 2 or post.size < 2:
        raise PartitionError(
            f"break at {break_period} leaves {pre.size} pre-break and "
            f"{post.size} post-break observations; need at least 2 on each side"
        )

    values = series.to_numpy()
    n = values.size
    rss1 = float(np.sum((values - values.mean()) ** 2))
    rss2 = float(np.sum((pre - pre.mean()) ** 2) + np.sum((post - post.mean()) ** 2))
    df1, df2 = n - 1, n - 2
    ss = max(rss1 - rss2, 0.0)

    exact_fit = rss2 <= _EXACT_FIT_RTOL * rss1 or rss1 == 0.0
    if exact_fit:
        f_stat = np.inf if ss > 0.0 else 0.0
        p_value = 0.0 if ss > 0.0 else 1.0
    else:
        f_stat = ss / (rss2 / df2)
        p_value = float(special.betainc(df2 / 2.0, 0.5, df2 / (df2 + f_stat)))

    return BreakTestResult(
        rss1=rss1,
        rss2=rss2,
        df1=df1,
        df2=df2,
        ss=ss,
        f_stat=float(f_stat),
        p_value=p_value,
        exact_fit=bool(exact_fit),
        break_date=str(break_period),
        n_pre=int(pre.size),
        n_post=int(post.size),
    )


def statistical_properties(samples: dict[str, np.ndarray]) -> pd.DataFrame:
    """Table of moments and Jarque-Bera p-values, one row per named sample."""
    rows = []
    for name, sample in samples.items():
        m = moments(sample)
        jb = jarque_bera(sample)
        rows.append({
            "Data": name,
            "Mean": m.mean,
            "Variance": m.variance,
            "Skewness": m.skewness,
            "Kurtosis": m.kurtosis,
            "JB-P Value": jb.p_value,
        })
    return pd.DataFrame(rows).set_index("Data")
