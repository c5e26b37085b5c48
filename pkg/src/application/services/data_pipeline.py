"""FRED quarterly series: parsing, validation, rebasing, inflation, gaps and windows."""

import io
from typing import Union

import numpy as np
import pandas as pd

from ... import logger
from ...domain.entities import KalmanSpec, QuarterlySeries, SeriesKind
from ...domain.repositories import (
    AnchorMissingError,
    CoverageError,
    EmptySeriesError,
    NonPositiveLevelError,
    SampleSizeError,
    SeriesOrderingError,
    SeriesParseError,
    SpacingError
)
from .filters import hp_filter, kalman_output_gap

MISSING_MARKERS = frozenset({"", ".", "NA", "NaN", "nan", "#N/A"})
QUARTER_START_MONTHS = frozenset({1, 4, 7, 10})

COVID_START = "2020Q1"
COVID_QUARTERS = 16


def _as_text(content: Union[bytes, str]) -> str:
    if isinstance(content, bytes):
        try:
            return content.decode("utf-8-sig")
        except UnicodeDecodeError as e:
            raise SeriesParseError(f"CSV is not valid UTF-8: {e}") from e
    return content


def parse_fred_csv(
    content: Union[bytes, str],
    series_id: str = "",
    kind: SeriesKind = SeriesKind.LEVEL
) -> QuarterlySeries:
    """Parse a two-column FRED CSV (observation date, value) into a quarterly series.

    Row numbers in error messages count the header as row 1.

    Args:
        content: Raw CSV.
        series_id: Identifier; defaults to the value column header.
        kind: Kind of the series; level series must be positive.

    Returns:
        The validated series.

    Raises:
        SeriesParseError: On a malformed header or row, or a missing-value marker.
        EmptySeriesError: If there are no observations.
        SpacingError: If dates are not quarter starts or quarters are skipped.
        SeriesOrderingError: On duplicated or decreasing quarters.
        NonPositiveLevelError: On a non-positive level.
    """
    text = _as_text(content)
    try:
        frame = pd.read_csv(
            io.StringIO(text),
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=True,
        )
    except pd.errors.EmptyDataError as e:
        raise EmptySeriesError("CSV has no header and no observations") from e
    except pd.errors.ParserError as e:
        raise SeriesParseError(f"malformed CSV: {e}") from e

    if frame.shape[1] != 2:
        raise SeriesParseError(
            f"expected 2 columns (date, value), found {frame.shape[1]}: {list(frame.columns)}"
        )
    if frame.empty:
        raise EmptySeriesError(f"series {series_id or frame.columns[1]} has no observations")

    periods = []
    values = []
    for row_number, (raw_date, raw_value) in enumerate(frame.itertuples(index=False), start=2):
        raw_date = raw_date.strip()
        raw_value = raw_value.strip()
        try:
            stamp = pd.Timestamp(raw_date)
        except ValueError as e:
            raise SeriesParseError(f"row {row_number}: unreadable date {raw_date!r}") from e
        if stamp.month not in QUARTER_START_MONTHS or stamp.day != 1:
            raise SpacingError(
                f"row {row_number}: {raw_date} is not the first day of a quarter"
            )
        if raw_value in MISSING_MARKERS:
            raise SeriesParseError(
                f"row {row_number}: missing-value marker {raw_value!r} for {raw_date}"
            )
        try:
            value = float(raw_value)
        except ValueError as e:
            raise SeriesParseError(f"row {row_number}: unreadable value {raw_value!r}") from e
        if not np.isfinite(value):
            raise SeriesParseError(f"row {row_number}: non-finite value {raw_value!r}")
        periods.append(stamp.to_period("Q"))
        values.append(value)

    data = pd.Series(values, index=pd.PeriodIndex(periods, freq="Q"), dtype=float)
    series = QuarterlySeries(
        series_id=series_id or str(frame.columns[1]).strip(),
        data=data,
        kind=kind,
        source="fred",
    )
    return validate_series(series)


def serialize_fred_csv(series: QuarterlySeries) -> bytes:
    """Write a series back in FRED form; values use repr so they parse back exactly."""
    lines = [f"observation_date,{series.series_id}"]
    for period, value in series.data.items():
        lines.append(f"{period.start_time:%Y-%m-%d},{float(value)!r}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def validate_series(series: QuarterlySeries) -> QuarterlySeries:
    """Check ordering, spacing and positivity of a quarterly series.

    Raises:
        EmptySeriesError: If the series is empty.
        SeriesOrderingError: On duplicated or decreasing quarters.
        SpacingError: If a quarter is skipped.
        NonPositiveLevelError: If a level series has a value <= 0.
    """
    if len(series) == 0:
        raise EmptySeriesError(f"series {series.series_id} has no observations")

    ordinals = np.array([period.ordinal for period in series.dates], dtype=np.int64)
    steps = np.diff(ordinals)
    bad = np.flatnonzero(steps <= 0)
    if bad.size:
        k = int(bad[0])
        raise SeriesOrderingError(
            f"series {series.series_id}: {series.dates[k + 1]} follows {series.dates[k]} "
            "(duplicated or decreasing quarter)"
        )
    gaps = np.flatnonzero(steps > 1)
    if gaps.size:
        k = int(gaps[0])
        raise SpacingError(
            f"series {series.series_id}: quarters missing between "
            f"{series.dates[k]} and {series.dates[k + 1]}"
        )

    if series.kind is SeriesKind.LEVEL:
        nonpositive = np.flatnonzero(series.values <= 0.0)
        if nonpositive.size:
            k = int(nonpositive[0])
            raise NonPositiveLevelError(
                f"series {series.series_id}: non-positive level {series.values[k]} "
                f"at {series.dates[k]}"
            )
    return series


def _derived(
    series: QuarterlySeries,
    data: pd.Series,
    kind: SeriesKind,
    source: str,
    suffix: str
) -> QuarterlySeries:
    return QuarterlySeries(
        series_id=f"{series.series_id}_{suffix}",
        data=data,
        kind=kind,
        source=source,
    )


def rebase(cpi: QuarterlySeries, anchor: Union[str, pd.Period]) -> QuarterlySeries:
    """Index a level series to 100 at the anchor quarter.

    Raises:
        AnchorMissingError: If the anchor quarter is not in the series.
    """
    anchor = pd.Period(anchor, freq="Q")
    if anchor not in cpi.dates:
        raise AnchorMissingError(
            f"anchor {anchor} not in {cpi.series_id} ({cpi.dates[0]}..{cpi.dates[-1]})"
        )
    anchor_value = float(cpi.data.loc[anchor])
    if anchor_value == 100.0:
        data = cpi.data.copy()
    else:
        data = cpi.data / anchor_value * 100.0
    data.loc[anchor] = 100.0
    return QuarterlySeries(
        series_id=cpi.series_id,
        data=data,
        kind=cpi.kind,
        source=cpi.source,
        base_quarter=anchor,
    )


def qoq_inflation(cpi: QuarterlySeries) -> QuarterlySeries:
    """Quarter-on-quarter inflation 100 (CPI_t / CPI_{t-1} - 1), dated at t.

    Raises:
        SampleSizeError: If fewer than 2 observations are given.
        NonPositiveLevelError: If a price level is not positive.
    """
    if len(cpi) < 2:
        raise SampleSizeError(f"inflation needs at least 2 observations, got {len(cpi)}")
    values = cpi.values
    if np.any(values <= 0.0):
        raise NonPositiveLevelError(f"series {cpi.series_id} has a non-positive price level")
    rates = 100.0 * (values[1:] / values[:-1] - 1.0)
    data = pd.Series(rates, index=cpi.dates[1:], dtype=float)
    return _derived(cpi, data, SeriesKind.RATE, cpi.source, "qoq")


def log_level(gdp: QuarterlySeries) -> QuarterlySeries:
    """Natural log of a positive level series."""
    validate_series(gdp)
    data = pd.Series(np.log(gdp.values), index=gdp.dates, dtype=float)
    return _derived(gdp, data, SeriesKind.LOG_LEVEL, gdp.source, "log")


def hp_gap(log_gdp: QuarterlySeries, lamb: float = 1600.0) -> QuarterlySeries:
    """HP output gap, dated like the input."""
    _, cycle = hp_filter(log_gdp.values, lamb)
    logger.info(f"HP filter (lambda={lamb}) applied to {len(log_gdp)} quarters")
    data = pd.Series(cycle, index=log_gdp.dates, dtype=float)
    return _derived(log_gdp, data, SeriesKind.GAP, "hp", "hp_gap")


def kalman_gap(log_gdp: QuarterlySeries, spec: KalmanSpec) -> QuarterlySeries:
    """Kalman output gap, starting one quarter after the input."""
    gap = kalman_output_gap(log_gdp.values, spec)
    logger.info(f"Kalman filter applied to {len(log_gdp)} quarters")
    data = pd.Series(gap, index=log_gdp.dates[1:], dtype=float)
    return _derived(log_gdp, data, SeriesKind.GAP, "kalman", "kalman_gap")


def covid_window(
    series: QuarterlySeries,
    start: Union[str, pd.Period] = COVID_START,
    quarters: int = COVID_QUARTERS
) -> QuarterlySeries:
    """Slice of `quarters` consecutive quarters starting at `start`.

    Raises:
        CoverageError: If the series does not cover the whole window.
    """
    if quarters < 1:
        raise CoverageError(f"window length {quarters} must be positive")
    first = pd.Period(start, freq="Q")
    last = first + (quarters - 1)
    if len(series) == 0 or series.dates[0] > first or series.dates[-1] < last:
        covered = f"{series.dates[0]}..{series.dates[-1]}" if len(series) else "nothing"
        raise CoverageError(
            f"series {series.series_id} covers {covered}, window needs {first}..{last}"
        )
    data = series.data.loc[first:last]
    return QuarterlySeries(
        series_id=series.series_id,
        data=data.copy(),
        kind=series.kind,
        source=series.source,
        base_quarter=series.base_quarter,
    )


def paired_window(gap: QuarterlySeries, inflation: QuarterlySeries) -> np.ndarray:
    """n x 2 array of (gap, inflation) pairs aligned by quarter.

    Raises:
        CoverageError: If the two windows are not dated identically.
    """
    if not gap.dates.equals(inflation.dates):
        raise CoverageError(
            f"windows are not aligned: {gap.series_id} {gap.dates[0]}..{gap.dates[-1]} vs "
            f"{inflation.series_id} {inflation.dates[0]}..{inflation.dates[-1]}"
        )
    return np.column_stack([gap.values, inflation.values])
