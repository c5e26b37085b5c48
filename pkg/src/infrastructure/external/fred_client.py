import requests
from ... import logger
from ...config import config
from ...domain.repositories import DataLoadError, ISeriesFetcher


class FREDClient(ISeriesFetcher):
    """FRED implementation of the series fetcher interface.

    Downloads the public graph CSV of a series; no API key is needed.
    """

    def __init__(self, url_template: str = None, timeout: int = None):
        """Initialize the FRED client.

        Args:
            url_template: Download URL with a {series_id} placeholder.
            timeout: Request timeout in seconds.
        """
        self.url_template = url_template or config.fred_csv_url
        self.timeout = timeout or config.fred_timeout

    def fetch(self, series_id: str) -> bytes:
        """Download the CSV of a series.

        Args:
            series_id: FRED identifier of the series.

        Returns:
            Raw CSV bytes.

        Raises:
            DataLoadError: If the download fails.
        """
        url = self.url_template.format(series_id=series_id)
        logger.info(f"Downloading {series_id} from {url}")
        try:
            response = requests.get(url, timeout=self.timeout)
            response.raise_for_status()
        except requests.exceptions.RequestException as e:
            raise DataLoadError(f"Error downloading {series_id}: {str(e)}") from e

        if not response.content.strip():
            raise DataLoadError(f"Empty response downloading {series_id}")
        return response.content
