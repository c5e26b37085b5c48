import dataclasses
import yaml
from enum import Enum
from typing import Any, Optional
from ...domain.entities import RunConfig
from ...domain.repositories import (
    ConfigurationError,
    DataLoadError,
    InputFileMissingError,
    IRunConfigLoader
)

SECTIONS = ("params", "scenario", "simulation", "grid", "mahalanobis", "kalman", "data", "output")

# RunConfig fields reached through the kalman, data and output sections
KALMAN_KEYS = {"layout": "kalman_layout", "v": "kalman_v", "w": "kalman_w", "c0": "kalman_c0"}
DATA_KEYS = {
    "gdp_path": "gdp_path",
    "cpi_path": "cpi_path",
    "cpi_base_quarter": "cpi_base_quarter",
    "window_start": "window_start",
    "window_quarters": "window_quarters",
    "hp_lambda": "hp_lambda",
}
OUTPUT_KEYS = {"dir": "output_dir"}


def _mapping(section: str, value: Any) -> dict[str, Any]:
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise ConfigurationError(f"section '{section}' must be a mapping")
    return value


def _check_keys(section: str, values: dict[str, Any], allowed: Any) -> None:
    unknown = sorted(set(values) - set(allowed))
    if unknown:
        raise ConfigurationError(
            f"unknown key(s) in section '{section}': {', '.join(map(str, unknown))}"
        )


def _coerce(section: str, key: str, value: Any, default: Any) -> Any:
    """Coerce a YAML value to the type of the field default."""
    try:
        if isinstance(default, Enum):
            return type(default)(value)
        if isinstance(default, bool):
            if not isinstance(value, bool):
                raise TypeError(f"expected a boolean, got {value!r}")
            return value
        if isinstance(default, int):
            if isinstance(value, bool) or int(value) != value:
                raise TypeError(f"expected an integer, got {value!r}")
            return int(value)
        if isinstance(default, float):
            if isinstance(value, bool):
                raise TypeError(f"expected a number, got {value!r}")
            return float(value)
        if isinstance(default, tuple):
            if not isinstance(value, (list, tuple)) or len(value) != len(default):
                raise TypeError(f"expected a list of {len(default)} numbers, got {value!r}")
            return tuple(float(v) for v in value)
        if value is not None and not isinstance(value, str):
            raise TypeError(f"expected a string, got {value!r}")
        return value
    except (TypeError, ValueError) as e:
        raise ConfigurationError(f"{section}.{key}: {str(e)}") from e


def _build(section: str, template: Any, values: dict[str, Any]) -> Any:
    """Override fields of a frozen dataclass default with a YAML section."""
    field_names = [f.name for f in dataclasses.fields(template)]
    _check_keys(section, values, field_names)
    kwargs = {
        key: _coerce(section, key, value, getattr(template, key))
        for key, value in values.items()
    }
    return dataclasses.replace(template, **kwargs)


class YAMLRunConfigLoader(IRunConfigLoader):
    """YAML implementation of the run configuration loader interface.

    Every key is optional; an empty file yields the defaults of RunConfig.
    """

    def load(self, file_path: Optional[str]) -> RunConfig:
        """Load a run configuration; None yields the defaults.

        Args:
            file_path: Path to the YAML file, or None.

        Returns:
            The run configuration.

        Raises:
            InputFileMissingError: If the file does not exist.
            ConfigurationError: If the file holds unknown or invalid keys.
        """
        if file_path is None:
            return RunConfig()
        try:
            with open(file_path, "r", encoding="utf-8") as handle:
                document = yaml.safe_load(handle)
        except FileNotFoundError as e:
            raise InputFileMissingError(f"Run config not found: {file_path}") from e
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Error parsing run config {file_path}: {str(e)}") from e
        except OSError as e:
            raise DataLoadError(f"Error reading run config {file_path}: {str(e)}") from e
        return self.from_dict(document)

    def from_dict(self, document: Any) -> RunConfig:
        """Build a RunConfig from an already parsed document."""
        document = _mapping("<root>", document)
        _check_keys("<root>", document, SECTIONS)
        sections = {name: _mapping(name, document.get(name)) for name in SECTIONS}

        defaults = RunConfig()
        overrides: dict[str, Any] = {
            "params": _build("params", defaults.params, sections["params"]),
            "scenario": _build("scenario", defaults.scenario, sections["scenario"]),
            "simulation": _build("simulation", defaults.simulation, sections["simulation"]),
            "grid": _build("grid", defaults.grid, sections["grid"]),
            "mahalanobis": _build("mahalanobis", defaults.mahalanobis, sections["mahalanobis"]),
        }
        for section, keys in (("kalman", KALMAN_KEYS), ("data", DATA_KEYS), ("output", OUTPUT_KEYS)):
            values = sections[section]
            _check_keys(section, values, keys)
            for key, value in values.items():
                target = keys[key]
                default = getattr(defaults, target)
                if default is None:
                    overrides[target] = _coerce(section, key, value, "")
                else:
                    overrides[target] = _coerce(section, key, value, default)
        return dataclasses.replace(defaults, **overrides)

