import os
import pandas as pd
from io import StringIO
from ...application.services.data_pipeline import parse_fred_csv, validate_series
from ...domain.entities import QuarterlySeries, SeriesKind
from ...domain.repositories import (
    DataLoadError,
    EmptySeriesError,
    InputFileMissingError,
    ISeriesRepository,
    SeriesParseError
)

NORMALIZED_COLUMNS = ["year", "quarter", "value"]


class CSVLoader(ISeriesRepository):
    """CSV implementation of the series repository interface.

    This class reads FRED two-column CSVs and the normalized
    (year, quarter, value) form written by the toolkit itself.
    """

    def parse(
        self,
        content: bytes,
        series_id: str,
        kind: SeriesKind = SeriesKind.LEVEL
    ) -> QuarterlySeries:
        """Parse a two-column FRED CSV.

        Args:
            content: Raw CSV bytes.
            series_id: Identifier attached to the parsed series.
            kind: Kind of the parsed series.

        Returns:
            A validated QuarterlySeries.
        """
        return parse_fred_csv(content, series_id, kind)

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
            InputFileMissingError: If the file does not exist.
            DataLoadError: If the file cannot be read.
        """
        try:
            with open(file_path, "rb") as handle:
                content = handle.read()
        except FileNotFoundError as e:
            raise InputFileMissingError(f"Series file not found: {file_path}") from e
        except OSError as e:
            raise DataLoadError(f"Error reading series file {file_path}: {str(e)}") from e

        series_id = os.path.splitext(os.path.basename(file_path))[0]
        header = content.decode("utf-8-sig", errors="replace").split("\n", 1)[0]
        if [c.strip().lower() for c in header.split(",")] == NORMALIZED_COLUMNS:
            return self._parse_normalized(content, series_id, kind)
        return self.parse(content, series_id, kind)

    def _parse_normalized(
        self,
        content: bytes,
        series_id: str,
        kind: SeriesKind
    ) -> QuarterlySeries:
        """Parse the (year, quarter, value) form."""
        try:
            frame = pd.read_csv(StringIO(content.decode("utf-8-sig")))
        except pd.errors.ParserError as e:
            raise SeriesParseError(f"Error parsing CSV file: {str(e)}") from e
        frame.columns = [c.strip().lower() for c in frame.columns]
        if frame.empty:
            raise EmptySeriesError(f"series {series_id} has no observations")

        try:
            index = pd.PeriodIndex.from_fields(
                year=frame["year"].astype(int).to_numpy(),
                quarter=frame["quarter"].astype(int).to_numpy(),
                freq="Q"
            )
            values = pd.to_numeric(frame["value"], errors="raise").astype(float)
        except (ValueError, TypeError) as e:
            raise SeriesParseError(f"{series_id}: malformed row: {str(e)}") from e

        series = QuarterlySeries(
            series_id=series_id,
            data=pd.Series(values.to_numpy(), index=index, dtype=float),
            kind=kind,
            source="csv",
        )
        return validate_series(series)

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

        Raises:
            DataLoadError: If the file cannot be written.
        """
        frame = pd.DataFrame({
            "year": [p.year for p in series.dates],
            "quarter": [p.quarter for p in series.dates],
            "value": series.values,
        })
        try:
            directory = os.path.dirname(file_path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            frame.to_csv(file_path, index=False, float_format="%.17g")
        except OSError as e:
            raise DataLoadError(f"Error writing series file {file_path}: {str(e)}") from e
        return file_path
