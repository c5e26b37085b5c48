import os
from datetime import date
from ... import logger
from ...domain.entities import SeriesKind
from ...domain.repositories import DataLoadError, ISeriesFetcher, ISeriesRepository


class FetchDataUseCase:
    """Use case for refreshing the local FRED snapshot over the network."""

    def __init__(
        self,
        fetcher: ISeriesFetcher,
        series_repository: ISeriesRepository
    ):
        """Initialize the use case with required dependencies.

        Args:
            fetcher: Service downloading raw CSVs.
            series_repository: Service validating the downloaded CSVs.
        """
        self.fetcher = fetcher
        self.series_repository = series_repository

    def execute(self, series_ids: list[str], data_dir: str) -> dict[str, str]:
        """Download, validate and store each series as <data_dir>/<id>.csv.

        A download that does not parse as a quarterly series is not written.

        Returns:
            Written files keyed by series id.
        """
        written = {}
        for series_id in series_ids:
            content = self.fetcher.fetch(series_id)
            series = self.series_repository.parse(content, series_id, SeriesKind.LEVEL)
            path = os.path.join(data_dir, f"{series_id}.csv")
            try:
                os.makedirs(data_dir, exist_ok=True)
                with open(path, "wb") as handle:
                    handle.write(content)
            except OSError as e:
                raise DataLoadError(f"Error writing {path}: {str(e)}") from e
            logger.info(
                f"Stored {series_id} ({len(series)} quarters, {series.dates[0]}..{series.dates[-1]}) "
                f"retrieved {date.today().isoformat()}"
            )
            written[series_id] = path
        return written
