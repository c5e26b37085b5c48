import os
import pandas as pd
from typing import Optional
from ... import logger
from ...domain.entities import (
    EmpiricalData,
    GridPoint,
    ModelKind,
    RunConfig
)
from ...domain.repositories import IReportStore
from ..services.calibration import scenario_for_point
from ..services.data_pipeline import covid_window
from ..services.simulator import extract_window, simulate
from ..services.stats import statistical_properties

CALIBRATION_PREFIX = "calibration_"


class ReportUseCase:
    """Use case for the summary tables of a finished pipeline.

    This class computes the statistical properties of the empirical
    windows and of the simulated series at a chosen grid point, and
    collects the best rows of earlier calibrations.
    """

    def __init__(self, report_store: IReportStore):
        """Initialize the use case with required dependencies.

        Args:
            report_store: Service for reading earlier reports and saving this one.
        """
        self.report_store = report_store

    def execute(
        self,
        run_config: RunConfig,
        point: GridPoint,
        output_dir: str,
        empirics: Optional[EmpiricalData] = None,
        eps1: Optional[float] = None
    ) -> tuple[pd.DataFrame, pd.DataFrame, dict[str, str]]:
        """Execute the report.

        Args:
            run_config: Parameters, simulation and window settings.
            point: Shock parameters used for the simulated rows.
            output_dir: Destination directory.
            empirics: Actual series; their window rows are skipped when None.
            eps1: Initial demand shock; defaults to the run-config scenario.

        Returns:
            The statistics table, the calibration summary and the written files.
        """
        samples = {}
        if empirics is not None:
            start, quarters = run_config.window_start, run_config.window_quarters
            samples["Output Gap (HP)"] = covid_window(empirics.hp_gap, start, quarters).values
            samples["Output Gap (Kalman)"] = covid_window(empirics.kalman_gap, start, quarters).values
            if empirics.inflation is not None:
                samples["Inflation Rate"] = covid_window(empirics.inflation, start, quarters).values

        shock_eps1 = run_config.scenario.eps1 if eps1 is None else eps1
        scenario = scenario_for_point(point, shock_eps1, run_config.scenario)
        sim_config = run_config.simulation
        for model_kind in (ModelKind.BEHAVIORAL, ModelKind.RATIONAL):
            path = simulate(model_kind, run_config.params, scenario, sim_config)
            y, pi = extract_window(path, scenario.t0, sim_config.window_len)
            name = model_kind.value.capitalize()
            samples[f"{name} Output Gap"] = y
            samples[f"{name} Inflation Rate"] = pi

        table = statistical_properties(samples)
        calibrations = self._calibration_summary()

        os.makedirs(output_dir, exist_ok=True)
        table_path = os.path.join(output_dir, "statistical_properties.csv")
        table.to_csv(table_path, float_format="%.17g")
        written = {"statistics": table_path}
        written["report"] = self.report_store.save("report", {
            "point": list(point.as_tuple()),
            "eps1": shock_eps1,
            "statistics": table.reset_index().to_dict("records"),
            "calibrations": calibrations.to_dict("records"),
        })
        logger.info(f"Report tables written to {output_dir}")
        return table, calibrations, written

    def _calibration_summary(self) -> pd.DataFrame:
        """Best rows of every calibration report found in the store."""
        rows = []
        for name, record in self.report_store.load_all().items():
            if not name.startswith(CALIBRATION_PREFIX) or "best" not in record:
                continue
            best = record["best"]
            rows.append({
                "model": record.get("model"),
                "target": record.get("target"),
                "eta1": best["eta1"],
                "rho_eps": best["rho_eps"],
                "rho_eta": best["rho_eta"],
                "mean_y": best["mean_y"],
                "mean_pi": best["mean_pi"],
                "actual_y": record["data_means"][0],
                "actual_pi": record["data_means"][1],
                "distance": best["distance"],
            })
        columns = ["model", "target", "eta1", "rho_eps", "rho_eta", "mean_y", "mean_pi",
                   "actual_y", "actual_pi", "distance"]
        return pd.DataFrame(rows, columns=columns)
