import os
from ... import logger
from ...domain.entities import BreakTestResult, SeriesKind
from ...domain.repositories import IReportStore, ISeriesRepository
from ..services.stats import lr_break_test


class BreakTestUseCase:
    """Use case for testing a gap series for a mean shift at a break quarter."""

    def __init__(
        self,
        series_repository: ISeriesRepository,
        report_store: IReportStore
    ):
        """Initialize the use case with required dependencies.

        Args:
            series_repository: Service for reading series.
            report_store: Service for persisting the JSON report.
        """
        self.series_repository = series_repository
        self.report_store = report_store

    def execute(self, gap_path: str, break_date: str) -> tuple[BreakTestResult, str]:
        """Execute the break test.

        Args:
            gap_path: Gap CSV (normalized or FRED form).
            break_date: Last quarter of the pre-break subsample.

        Returns:
            The test result and the path of its JSON report.
        """
        gap = self.series_repository.load_series(gap_path, SeriesKind.GAP)
        result = lr_break_test(gap, break_date)
        logger.info(
            f"Break test on {gap.series_id} at {result.break_date}: "
            f"F={result.f_stat:.4f}, p={result.p_value:.4g}"
        )
        stem = os.path.splitext(os.path.basename(gap_path))[0]
        record = {"series": gap.series_id, **result.to_record()}
        path = self.report_store.save(f"break_{stem}", record)
        return result, path
