import math
import os
import pandas as pd
from dataclasses import replace
from typing import Optional
from ... import logger
from ...domain.entities import (
    EmpiricalData,
    JarqueBeraResult,
    ModelKind,
    NoiseMode,
    RobustnessRow,
    ShockScenario,
    SimConfig,
    StructuralParams,
    VisualizationType
)
from ...domain.repositories import ConfigurationError, IChartGenerator, IReportStore
from ..services.simulator import extract_window, simulate
from ..services.stats import jarque_bera

SIGNIFICANCE = 0.05
NOISE_RHO = 0.95
NOISE_SD = math.sqrt(0.5)


def robustness_config(seed: int, start: int, stop: int, periods: int) -> tuple[ShockScenario, SimConfig]:
    """Shock-free scenario with AR(1) innovations over an inclusive window.

    Raises:
        ConfigurationError: If the window does not fit in the simulation.
    """
    if start < 0 or stop < start:
        raise ConfigurationError(f"window {start}:{stop} is empty or negative")
    if stop >= periods:
        raise ConfigurationError(f"window {start}:{stop} lies outside a {periods}-period simulation")
    scenario = ShockScenario(
        eps1=0.0,
        eta1=0.0,
        demand_quarters=0,
        supply_quarters=0,
        supply_offset=0,
        t0=start,
    )
    sim_config = SimConfig(
        T=periods,
        window_len=stop - start + 1,
        seed=seed,
        run_index=0,
        noise_mode=NoiseMode.AR1,
        noise_sd_demand=NOISE_SD,
        noise_sd_supply=NOISE_SD,
        noise_rho=NOISE_RHO,
    )
    return scenario, sim_config


class RobustnessUseCase:
    """Use case for the normality comparison of simulated and actual series.

    Both models are driven by persistent Gaussian innovations only; the
    Jarque-Bera outcome of a reference run is reported together with the
    rejection frequency over repeated seeds.
    """

    def __init__(
        self,
        chart_generator: IChartGenerator,
        report_store: IReportStore
    ):
        """Initialize the use case with required dependencies.

        Args:
            chart_generator: Service for the histogram chart.
            report_store: Service for persisting the JSON report.
        """
        self.chart_generator = chart_generator
        self.report_store = report_store

    def execute(
        self,
        params: StructuralParams,
        seed: int,
        window: tuple[int, int],
        output_dir: str,
        runs: int = 1,
        periods: int = 2000,
        empirics: Optional[EmpiricalData] = None
    ) -> tuple[list[RobustnessRow], dict[str, str]]:
        """Execute the robustness comparison.

        Args:
            params: Structural parameters.
            seed: Base seed; run k uses seed + k.
            window: Inclusive (first, last) period of the tested window.
            output_dir: Destination directory.
            runs: Number of seeds behind the rejection frequencies.
            periods: Simulation length.
            empirics: Actual series to test alongside, when available.

        Returns:
            Table rows and the written files.
        """
        if runs < 1:
            raise ConfigurationError(f"runs={runs} must be positive")
        start, stop = window
        scenario, base_config = robustness_config(seed, start, stop, periods)
        label = f"periods {start}-{stop}"

        rows: list[RobustnessRow] = []
        reference_gaps = {}
        for model_kind in (ModelKind.BEHAVIORAL, ModelKind.RATIONAL):
            reference: dict[str, JarqueBeraResult] = {}
            rejections = {"output_gap": 0, "inflation": 0}
            for k in range(runs):
                sim_config = replace(base_config, seed=seed + k)
                path = simulate(model_kind, params, scenario, sim_config)
                y, pi = extract_window(path, start, sim_config.window_len)
                for variable, values in (("output_gap", y), ("inflation", pi)):
                    result = jarque_bera(values)
                    if result.p_value < SIGNIFICANCE:
                        rejections[variable] += 1
                    if k == 0:
                        reference[variable] = result
                if k == 0:
                    reference_gaps[f"{model_kind.value.capitalize()} model"] = y

            for variable in ("output_gap", "inflation"):
                rows.append(RobustnessRow(
                    source=model_kind.value,
                    variable=variable,
                    label=label,
                    jb=reference[variable],
                    rejection_rate=rejections[variable] / runs,
                    runs=runs,
                ))
            logger.info(
                f"{model_kind.value}: normality rejected in {rejections['output_gap']}/{runs} "
                f"output-gap and {rejections['inflation']}/{runs} inflation runs"
            )

        if empirics is not None:
            actual = [("output_gap", "HP filter", empirics.hp_gap),
                      ("output_gap", "Kalman filter", empirics.kalman_gap)]
            if empirics.inflation is not None:
                actual.append(("inflation", "CPI", empirics.inflation))
            for variable, source_label, series in actual:
                rows.append(RobustnessRow(
                    source="actual",
                    variable=variable,
                    label=source_label,
                    jb=jarque_bera(series.values),
                ))

        record = {
            "seed": seed,
            "runs": runs,
            "window": [start, stop],
            "noise": {"rho": NOISE_RHO, "variance": NOISE_SD ** 2},
            "rows": [row.to_record() for row in rows],
        }
        written = {"report": self.report_store.save(f"robustness_seed{seed}", record)}

        chart = self.chart_generator.generate_chart(
            chart_type=VisualizationType.HISTOGRAM,
            data=pd.DataFrame(reference_gaps),
            title=f"Simulated output gap, {label}",
            config={"xaxis_title": "Output gap"}
        )
        written["chart"] = self.chart_generator.save_chart(
            chart, os.path.join(output_dir, f"robustness_seed{seed}")
        )
        return rows, written
