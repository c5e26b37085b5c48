import os
from dotenv import load_dotenv


class Config:
    """Centralized configuration class for the NK COVID toolkit.

    This class loads environment variables from an optional .env file and
    provides access to configuration values with validation. Model and
    simulation settings live in the YAML run config; this class only covers
    process-level settings (paths, data sources, parallelism).
    """

    def __init__(self):
        """Initialize the configuration by loading environment variables."""
        load_dotenv()
        self._validate_variables()

    def _get_config_value(self, key: str, default=None):
        """Get configuration value from environment variables.

        Args:
            key: Configuration key
            default: Default value if not found

        Returns:
            Configuration value
        """
        value = os.getenv(key)
        if value is None or value == "":
            return default
        return value

    def _validate_variables(self):
        """Validate the environment variables that have a constrained form."""
        jobs = self._get_config_value('NKCOVID_JOBS')
        if jobs is not None:
            try:
                if int(jobs) < 1:
                    raise ValueError
            except ValueError:
                raise ValueError(
                    f"Invalid NKCOVID_JOBS value: {jobs!r}. "
                    "Expected a positive integer."
                )

        timeout = self._get_config_value('FRED_TIMEOUT')
        if timeout is not None:
            try:
                if float(timeout) <= 0:
                    raise ValueError
            except ValueError:
                raise ValueError(
                    f"Invalid FRED_TIMEOUT value: {timeout!r}. "
                    "Expected a positive number of seconds."
                )

        if '{series_id}' not in self.fred_csv_url:
            raise ValueError(
                "FRED_CSV_URL must contain the '{series_id}' placeholder."
            )

    @property
    def log_dir(self) -> str:
        """Get the log directory path."""
        return self._get_config_value('LOG_DIR', 'logs')

    @property
    def log_level(self) -> str:
        """Get the logging level name."""
        return self._get_config_value('LOG_LEVEL', 'INFO').upper()

    @property
    def output_dir(self) -> str:
        """Get the output directory (overridable per run)."""
        return self._get_config_value('NKCOVID_OUTPUT_DIR', 'output')

    @property
    def data_dir(self) -> str:
        """Get the directory holding the bundled FRED snapshot."""
        return self._get_config_value('NKCOVID_DATA_DIR', 'data')

    @property
    def gdp_series_id(self) -> str:
        """Get the FRED id of quarterly real GDP for India."""
        return self._get_config_value('GDP_SERIES_ID', 'NGDPRNSAXDCINQ')

    @property
    def cpi_series_id(self) -> str:
        """Get the FRED id of the quarterly CPI for India."""
        return self._get_config_value('CPI_SERIES_ID', 'INDCPIALLQINMEI')

    @property
    def gdp_path(self) -> str:
        """Get the path of the bundled GDP snapshot."""
        return os.path.join(self.data_dir, f"{self.gdp_series_id}.csv")

    @property
    def cpi_path(self) -> str:
        """Get the path of the bundled CPI snapshot."""
        return os.path.join(self.data_dir, f"{self.cpi_series_id}.csv")

    @property
    def fred_csv_url(self) -> str:
        """Get the download URL template for FRED CSVs."""
        return self._get_config_value(
            'FRED_CSV_URL',
            'https://fred.stlouisfed.org/graph/fredgraph.csv?id={series_id}'
        )

    @property
    def fred_timeout(self) -> float:
        """Get the HTTP timeout for FRED downloads."""
        return float(self._get_config_value('FRED_TIMEOUT', '30'))

    @property
    def jobs(self) -> int:
        """Get the default worker-pool width for grid searches."""
        return int(self._get_config_value('NKCOVID_JOBS', str(os.cpu_count() or 1)))


# Global configuration instance
config = Config()
