from typing import Optional
from ... import logger
from ...domain.entities import (
    CalibrationTarget,
    EmpiricalData,
    FilterKind,
    KalmanSpec,
    SeriesKind
)
from ...domain.repositories import ConfigurationError, ISeriesRepository
from ..services.data_pipeline import (
    covid_window,
    hp_gap,
    kalman_gap,
    log_level,
    paired_window,
    qoq_inflation,
    rebase
)


class LoadEmpiricalDataUseCase:
    """Use case for turning GDP and CPI files into gaps and inflation.

    This class reads the raw series through the series repository and
    derives everything the model is compared with.
    """

    def __init__(self, series_repository: ISeriesRepository):
        """Initialize the use case with required dependencies.

        Args:
            series_repository: Service for reading series files.
        """
        self.series_repository = series_repository

    def execute(
        self,
        gdp_path: str,
        cpi_path: Optional[str] = None,
        hp_lambda: float = 1600.0,
        kalman_spec: Optional[KalmanSpec] = None,
        cpi_base_quarter: str = "2011Q4"
    ) -> EmpiricalData:
        """Load the series and derive output gaps and inflation.

        Args:
            gdp_path: Real GDP CSV.
            cpi_path: CPI CSV; inflation is left out when None.
            hp_lambda: HP smoothing parameter.
            kalman_spec: Trend model of the Kalman filter.
            cpi_base_quarter: Rebasing anchor of the CPI.

        Returns:
            EmpiricalData with both gaps and, when available, inflation.
        """
        gdp = self.series_repository.load_series(gdp_path, SeriesKind.LEVEL)
        logger.info(f"Loaded {gdp.series_id}: {len(gdp)} quarters ({gdp.dates[0]}..{gdp.dates[-1]})")
        log_gdp = log_level(gdp)

        inflation = None
        if cpi_path is not None:
            cpi = self.series_repository.load_series(cpi_path, SeriesKind.LEVEL)
            logger.info(f"Loaded {cpi.series_id}: {len(cpi)} quarters ({cpi.dates[0]}..{cpi.dates[-1]})")
            inflation = qoq_inflation(rebase(cpi, cpi_base_quarter))

        return EmpiricalData(
            log_gdp=log_gdp,
            hp_gap=hp_gap(log_gdp, hp_lambda),
            kalman_gap=kalman_gap(log_gdp, kalman_spec or KalmanSpec()),
            inflation=inflation,
        )

    @staticmethod
    def calibration_target(
        empirics: EmpiricalData,
        filter_kind: FilterKind,
        window_start: str = "2020Q1",
        window_quarters: int = 16
    ) -> CalibrationTarget:
        """Pinned demand shock and window moments of one filter's gap.

        The initial demand shock is the gap measured in the first window
        quarter.

        Raises:
            ConfigurationError: If no inflation series is available.
            CoverageError: If a series does not cover the window.
        """
        if empirics.inflation is None:
            raise ConfigurationError("calibration needs a CPI series for the inflation moments")

        gap_window = covid_window(empirics.gap(filter_kind), window_start, window_quarters)
        inflation_window = covid_window(empirics.inflation, window_start, window_quarters)
        pairs = paired_window(gap_window, inflation_window)
        means = pairs.mean(axis=0)
        target = CalibrationTarget(
            eps1=float(gap_window.values[0]),
            data_means=(float(means[0]), float(means[1])),
            data_window=pairs,
            label=filter_kind.value,
        )
        logger.info(
            f"{filter_kind.value} target: eps1={target.eps1:.4f}, "
            f"means=({target.data_means[0]:.4f}, {target.data_means[1]:.4f})"
        )
        return target
