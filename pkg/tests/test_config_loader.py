"""Tests for the YAML run configuration."""

import numpy as np
import pytest

from src.domain.entities import (
    KalmanLayout,
    MahalanobisStrategy,
    NoiseMode,
    RunConfig,
    StructuralParams
)
from src.domain.repositories import ConfigurationError, InputFileMissingError
from src.infrastructure.persistence.run_config_loader import YAMLRunConfigLoader


@pytest.fixture
def loader():
    return YAMLRunConfigLoader()


def test_missing_path_gives_defaults(loader):
    assert loader.load(None) == RunConfig()


def test_empty_file_gives_defaults(loader, tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("")
    config = loader.load(str(path))
    assert config.params == StructuralParams()
    assert config.window_quarters == 16
    assert config.kalman_layout is KalmanLayout.STANDARD
    assert config.mahalanobis.strategy is MahalanobisStrategy.PAIRED_SERIES


def test_sections_override_defaults(loader, tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text(
        "params:\n  gamma: 5\n"
        "simulation:\n  noise_mode: ar1\n  seed: 11\n"
        "grid:\n  eta1_range: [0.5, 0.7, 0.01]\n"
        "mahalanobis:\n  strategy: paired_series\n"
        "kalman:\n  layout: printed\n  v: 0.01\n"
        "data:\n  window_quarters: 17\n  gdp_path: data/GDP.csv\n"
        "output:\n  dir: results\n"
    )
    config = loader.load(str(path))
    assert config.params.gamma == 5.0
    assert config.simulation.noise_mode is NoiseMode.AR1
    assert config.simulation.seed == 11
    assert config.grid.eta1_range == (0.5, 0.7, 0.01)
    assert config.mahalanobis.strategy is MahalanobisStrategy.PAIRED_SERIES
    assert config.window_quarters == 17
    assert config.gdp_path == "data/GDP.csv"
    assert config.output_dir == "results"

    spec = config.kalman_spec()
    assert spec.V == 0.01
    np.testing.assert_array_equal(spec.F, [[1.0, 1.0]])


@pytest.mark.parametrize(
    "document",
    [
        {"parms": {}},
        {"params": {"kappa": 0.1}},
        {"simulation": {"noise_mode": "pink"}},
        {"simulation": {"T": 10.5}},
        {"grid": {"eta1_range": [0.0, 1.0]}},
        {"params": [1, 2]},
        {"data": {"window": "2020Q1"}},
    ],
)
def test_invalid_documents_are_rejected(loader, document):
    with pytest.raises(ConfigurationError):
        loader.from_dict(document)


def test_missing_file_is_reported(loader, tmp_path):
    with pytest.raises(InputFileMissingError):
        loader.load(str(tmp_path / "absent.yaml"))


def test_malformed_yaml_is_reported(loader, tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("params: [unclosed\n")
    with pytest.raises(ConfigurationError):
        loader.load(str(path))


def test_partial_section_keeps_run_defaults(loader):
    config = loader.from_dict({"mahalanobis": {"pinv_tolerance": 1e-10}})
    assert config.mahalanobis.strategy is MahalanobisStrategy.PAIRED_SERIES
    assert config.mahalanobis.pinv_tolerance == 1e-10

    two_obs = loader.from_dict({"mahalanobis": {"strategy": "paper_two_obs"}})
    assert two_obs.mahalanobis.strategy is MahalanobisStrategy.PAPER_TWO_OBS
