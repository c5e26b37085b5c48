from abc import ABC, abstractmethod
from typing import Any, Callable, Iterable, Iterator, Optional
from .entities import (
    CalibrationResult,
    QuarterlySeries,
    RunConfig,
    SeriesKind,
    Visualization,
    VisualizationType
)


class ISeriesRepository(ABC):
    """Interface for reading and writing quarterly series.

    This interface defines the contract for turning FRED-format CSVs into
    validated QuarterlySeries and for persisting derived series.
    """

    @abstractmethod
    def parse(
        self,
        content: bytes,
        series_id: str,
        kind: SeriesKind = SeriesKind.LEVEL
    ) -> QuarterlySeries:
        """Parse a two-column FRED CSV.

        Args:
            content: Raw CSV bytes (header row, date and value columns).
            series_id: Identifier attached to the parsed series.
            kind: Kind of the parsed series.

        Returns:
            A validated QuarterlySeries.

        Raises:
            SeriesParseError: If a row is malformed.
            EmptySeriesError: If the file holds no observations.
        """
        pass

    @abstractmethod
    def load_series(
        self,
        file_path: str,
        kind: SeriesKind = SeriesKind.LEVEL
    ) -> QuarterlySeries:
        """Load a series from a CSV file in FRED or normalized form.

        Args:
            file_path: Path to the CSV file.
            kind: Kind of the loaded series.

        Returns:
            A validated QuarterlySeries.

        Raises:
            DataLoadError: If the file cannot be read.
        """
        pass

    @abstractmethod
    def save_series(
        self,
        series: QuarterlySeries,
        file_path: str
    ) -> str:
        """Write a series as normalized CSV (year, quarter, value).

        Args:
            series: The series to write.
            file_path: Destination path.

        Returns:
            The path written.
        """
        pass


class ISeriesFetcher(ABC):
    """Interface for downloading raw series from a remote source."""

    @abstractmethod
    def fetch(self, series_id: str) -> bytes:
        """Download the CSV of a series.

        Args:
            series_id: Remote identifier of the series.

        Returns:
            Raw CSV bytes.

        Raises:
            DataLoadError: If the download fails.
        """
        pass


class IChartGenerator(ABC):
    """Interface for generating charts.

    This interface defines the contract for creating charts from
    tabular results and writing them to disk.
    """

    @abstractmethod
    def generate_chart(
        self,
        chart_type: VisualizationType,
        data: Any,
        title: str,
        config: Optional[dict[str, Any]] = None
    ) -> Visualization:
        """Generate a visualization based on the data.

        Args:
            chart_type: Type of chart to generate.
            data: Data to visualize.
            title: Chart title.
            config: Additional chart configuration.

        Returns:
            Visualization object with the generated chart.

        Raises:
            ChartGenerationError: If chart generation fails.
        """
        pass

    @abstractmethod
    def save_chart(
        self,
        visualization: Visualization,
        path_stem: str
    ) -> str:
        """Write a visualization to disk.

        Args:
            visualization: The chart to write.
            path_stem: Destination path without extension.

        Returns:
            The path actually written.
        """
        pass


class IGridExecutor(ABC):
    """Interface for evaluating independent tasks, possibly concurrently."""

    @abstractmethod
    def map_unordered(
        self,
        fn: Callable[[Any], Any],
        tasks: Iterable[Any],
        total: Optional[int] = None
    ) -> Iterator[Any]:
        """Apply fn to every task and yield results in completion order.

        Args:
            fn: Picklable top-level function.
            tasks: Task arguments.
            total: Number of tasks, for progress reporting.

        Returns:
            Iterator over results, in any order.
        """
        pass


class ICheckpointStore(ABC):
    """Interface for the append-only store of completed grid points."""

    @abstractmethod
    def open(
        self,
        grid_hash: str,
        base_seed: int
    ) -> dict[int, CalibrationResult]:
        """Open the store and return the results already recorded.

        Args:
            grid_hash: Fingerprint of the grid and its evaluation context.
            base_seed: Base seed of the run.

        Returns:
            Completed results keyed by grid index.

        Raises:
            CheckpointError: If the store belongs to another run or is corrupt.
        """
        pass

    @abstractmethod
    def append(self, result: CalibrationResult) -> None:
        """Persist one completed result."""
        pass

    @abstractmethod
    def close(self) -> None:
        """Flush and release the store."""
        pass


class IReportStore(ABC):
    """Interface for structured report records."""

    @abstractmethod
    def save(self, name: str, record: dict[str, Any]) -> str:
        """Persist a report record under a name and return its location."""
        pass

    @abstractmethod
    def load_all(self) -> dict[str, dict[str, Any]]:
        """Load every persisted report record keyed by name."""
        pass


class IRunConfigLoader(ABC):
    """Interface for loading the structured run configuration."""

    @abstractmethod
    def load(self, file_path: Optional[str]) -> RunConfig:
        """Load a run configuration; None yields the defaults.

        Raises:
            ConfigurationError: If the file holds unknown or invalid keys.
        """
        pass


# Custom exception classes for better error handling
class ToolkitError(Exception):
    """Root of all errors raised by the toolkit."""
    pass


class InvalidParameterError(ToolkitError, ValueError):
    """Exception raised when structural parameters leave their admissible range."""
    pass


class DegenerateParametersError(ToolkitError):
    """Exception raised when the period system is singular."""
    pass


class IndeterminacyError(ToolkitError):
    """Exception raised when the rational-expectations fixed point does not converge."""
    pass


class InstabilityError(ToolkitError):
    """Exception raised when the rational decision rule is explosive."""
    pass


class ConfigurationError(ToolkitError):
    """Exception raised for invalid scenario, simulation or run configuration."""
    pass


class SeriesParseError(ToolkitError):
    """Exception raised for malformed rows in a series file."""
    pass


class EmptySeriesError(ToolkitError):
    """Exception raised when a series file holds no observations."""
    pass


class SeriesOrderingError(ToolkitError):
    """Exception raised for duplicated or decreasing quarters."""
    pass


class SpacingError(ToolkitError):
    """Exception raised for non-quarterly spacing or missing quarters."""
    pass


class NonPositiveLevelError(ToolkitError):
    """Exception raised when a level series holds a non-positive value."""
    pass


class AnchorMissingError(ToolkitError):
    """Exception raised when a rebasing anchor is absent from the series."""
    pass


class CoverageError(ToolkitError):
    """Exception raised when a series does not cover a requested window."""
    pass


class SampleSizeError(ToolkitError):
    """Exception raised when a sample is too small for a statistic."""
    pass


class DegenerateSampleError(ToolkitError):
    """Exception raised when a sample has zero variance."""
    pass


class SingularCovarianceError(ToolkitError):
    """Exception raised when a distance needs the inverse of a singular covariance."""
    pass


class PartitionError(ToolkitError):
    """Exception raised when a break splits the sample into a too-small side."""
    pass


class SpecificationError(ToolkitError):
    """Exception raised for invalid state-space specifications."""
    pass


class CheckpointError(ToolkitError):
    """Exception raised when a checkpoint cannot be resumed."""
    pass


class DataLoadError(ToolkitError):
    """Exception raised for errors in loading or downloading data."""
    pass


class ChartGenerationError(ToolkitError):
    """Exception raised for errors in chart generation."""
    pass


class InputFileMissingError(DataLoadError):
    """Exception raised when an input file does not exist."""
    pass
