"""Shared fixtures: baseline parameters, synthetic FRED files and snapshot paths."""

import os

import numpy as np
import pandas as pd
import pytest

from src.application.services.econ_model import compute_kappa
from src.config import config
from src.domain.entities import NoiseMode, QuarterlySeries, SeriesKind, SimConfig, StructuralParams

QUARTERS = pd.period_range("2004Q1", "2024Q1", freq="Q")


@pytest.fixture
def params():
    return StructuralParams()


@pytest.fixture
def kappa(params):
    return compute_kappa(params)


@pytest.fixture
def quiet_config():
    """Deterministic simulation settings: no background noise, short run."""
    return SimConfig(T=60, window_len=16, noise_mode=NoiseMode.NONE)


def make_series(values, start="2004Q1", kind=SeriesKind.LEVEL, series_id="TEST"):
    """QuarterlySeries with consecutive quarters from start."""
    index = pd.period_range(start, periods=len(values), freq="Q")
    return QuarterlySeries(
        series_id=series_id,
        data=pd.Series(np.asarray(values, dtype=float), index=index),
        kind=kind,
    )


def fred_csv(values, start="2004-01-01", series_id="TEST") -> bytes:
    """Two-column FRED CSV text for consecutive quarters."""
    dates = pd.date_range(start, periods=len(values), freq="QS")
    lines = [f"observation_date,{series_id}"]
    lines += [f"{d:%Y-%m-%d},{v}" for d, v in zip(dates, values)]
    return ("\n".join(lines) + "\n").encode("utf-8")


def synthetic_gdp() -> np.ndarray:
    """81 quarters of trending GDP with a deep 2020Q1-Q2 dip."""
    t = np.arange(len(QUARTERS))
    rng = np.random.default_rng(7)
    log_gdp = 12.0 + 0.016 * t + 0.01 * rng.standard_normal(len(t))
    dip = {QUARTERS.get_loc(pd.Period("2020Q1")): -0.20,
           QUARTERS.get_loc(pd.Period("2020Q2")): -0.25,
           QUARTERS.get_loc(pd.Period("2020Q3")): -0.08}
    for k, v in dip.items():
        log_gdp[k] += v
    return np.exp(log_gdp)


def synthetic_cpi() -> np.ndarray:
    """81 quarters of CPI growing about 1.2% per quarter."""
    rng = np.random.default_rng(11)
    growth = 1.0 + 0.012 + 0.004 * rng.standard_normal(len(QUARTERS))
    return 80.0 * np.cumprod(growth)


@pytest.fixture
def data_files(tmp_path):
    """Synthetic GDP and CPI CSVs in FRED form."""
    gdp_path = tmp_path / "GDP.csv"
    cpi_path = tmp_path / "CPI.csv"
    gdp_path.write_bytes(fred_csv(synthetic_gdp(), series_id="GDP"))
    cpi_path.write_bytes(fred_csv(synthetic_cpi(), series_id="CPI"))
    return str(gdp_path), str(cpi_path)


@pytest.fixture
def snapshot_paths():
    """Bundled FRED snapshot; tests comparing with published figures skip without it."""
    gdp_path, cpi_path = config.gdp_path, config.cpi_path
    if not (os.path.exists(gdp_path) and os.path.exists(cpi_path)):
        pytest.skip("FRED snapshot not present; run `python app.py fetch`")
    return gdp_path, cpi_path
