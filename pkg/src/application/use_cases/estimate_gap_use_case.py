import os
import pandas as pd
from typing import Optional
from ... import logger
from ...domain.entities import (
    FilterKind,
    KalmanSpec,
    SeriesKind,
    VisualizationType
)
from ...domain.repositories import IChartGenerator, ISeriesRepository
from ..services.data_pipeline import hp_gap, kalman_gap, log_level, qoq_inflation, rebase


class EstimateGapUseCase:
    """Use case for estimating India's output gap from a GDP file.

    This class runs the requested filters, writes each gap as a dated CSV
    and draws the gaps (and inflation, when a CPI file is given) as charts.
    """

    def __init__(
        self,
        series_repository: ISeriesRepository,
        chart_generator: IChartGenerator
    ):
        """Initialize the use case with required dependencies.

        Args:
            series_repository: Service for reading and writing series.
            chart_generator: Service for chart generation.
        """
        self.series_repository = series_repository
        self.chart_generator = chart_generator

    def execute(
        self,
        gdp_path: str,
        filters: list[FilterKind],
        output_dir: str,
        hp_lambda: float = 1600.0,
        kalman_spec: Optional[KalmanSpec] = None,
        cpi_path: Optional[str] = None,
        cpi_base_quarter: str = "2011Q4"
    ) -> dict[str, str]:
        """Execute the gap estimation.

        Args:
            gdp_path: Real GDP CSV.
            filters: Filters to run.
            output_dir: Destination directory.
            hp_lambda: HP smoothing parameter.
            kalman_spec: Trend model of the Kalman filter.
            cpi_path: Optional CPI CSV for the inflation chart.
            cpi_base_quarter: Rebasing anchor of the CPI.

        Returns:
            Written files keyed by artifact name.
        """
        gdp = self.series_repository.load_series(gdp_path, SeriesKind.LEVEL)
        log_gdp = log_level(gdp)
        written: dict[str, str] = {}

        gaps = {}
        for kind in filters:
            if kind is FilterKind.HP:
                gap = hp_gap(log_gdp, hp_lambda)
            else:
                gap = kalman_gap(log_gdp, kalman_spec or KalmanSpec())
            gaps[kind] = gap
            written[f"gap_{kind.value}"] = self.series_repository.save_series(
                gap, os.path.join(output_dir, f"gap_{kind.value}.csv")
            )

        chart_data = pd.DataFrame({
            f"{kind.value.upper()} filter": gap.data for kind, gap in gaps.items()
        })
        chart_data.index = chart_data.index.astype(str)
        chart_data.index.name = "Quarter"
        chart = self.chart_generator.generate_chart(
            chart_type=VisualizationType.LINE,
            data=chart_data,
            title="Quarterly Output Gap of India",
            config={"yaxis_title": "Output gap (log deviation)"}
        )
        written["gap_chart"] = self.chart_generator.save_chart(
            chart, os.path.join(output_dir, "output_gap")
        )

        if cpi_path is not None:
            cpi = self.series_repository.load_series(cpi_path, SeriesKind.LEVEL)
            inflation = qoq_inflation(rebase(cpi, cpi_base_quarter))
            written["inflation"] = self.series_repository.save_series(
                inflation, os.path.join(output_dir, "inflation.csv")
            )
            inflation_data = inflation.data.rename("Inflation rate")
            inflation_data.index = inflation_data.index.astype(str)
            inflation_data.index.name = "Quarter"
            chart = self.chart_generator.generate_chart(
                chart_type=VisualizationType.LINE,
                data=inflation_data.to_frame(),
                title="Quarterly Inflation Rate of India",
                config={"yaxis_title": "Inflation (% per quarter)"}
            )
            written["inflation_chart"] = self.chart_generator.save_chart(
                chart, os.path.join(output_dir, "inflation")
            )

        logger.info(f"Gap estimation wrote {len(written)} files to {output_dir}")
        return written
