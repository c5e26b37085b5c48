import os
from typing import Any
from ... import logger
from ...domain.entities import (
    ModelKind,
    ShockScenario,
    SimConfig,
    SimPath,
    StructuralParams
)
from ...domain.repositories import DegenerateSampleError, IReportStore
from ..services.simulator import extract_window, simulate
from ..services.stats import moments


def window_summary(path: SimPath, t0: int, length: int) -> dict[str, Any]:
    """Moments of output gap and inflation inside the evaluation window.

    A flat window (no shocks, no noise) reports its mean only.
    """
    y, pi = extract_window(path, t0, length)
    summary: dict[str, Any] = {"t0": t0, "window_len": length}
    for name, values in (("output_gap", y), ("inflation", pi)):
        try:
            summary[name] = moments(values).to_record()
        except DegenerateSampleError:
            summary[name] = {"test": "moments", "n": len(values), "mean": float(values.mean()),
                             "degenerate": True}
    return summary


class SimulateUseCase:
    """Use case for running one simulation and writing its path and summary."""

    def __init__(self, report_store: IReportStore):
        """Initialize the use case with required dependencies.

        Args:
            report_store: Service for persisting the JSON summary.
        """
        self.report_store = report_store

    def execute(
        self,
        model_kind: ModelKind,
        params: StructuralParams,
        scenario: ShockScenario,
        sim_config: SimConfig,
        output_dir: str
    ) -> tuple[SimPath, dict[str, Any], dict[str, str]]:
        """Execute the simulation.

        Args:
            model_kind: Expectation regime.
            params: Structural parameters.
            scenario: Shock scenario.
            sim_config: Simulation settings.
            output_dir: Destination directory.

        Returns:
            The path, its window summary, and the written files.
        """
        path = simulate(model_kind, params, scenario, sim_config)
        summary = window_summary(path, scenario.t0, sim_config.window_len)
        summary.update({
            "model": model_kind.value,
            "seed": sim_config.seed,
            "run_index": sim_config.run_index,
            "noise_mode": sim_config.noise_mode.value,
            "scenario": {
                "eps1": scenario.eps1,
                "rho_eps": scenario.rho_eps,
                "eta1": scenario.eta1,
                "rho_eta": scenario.rho_eta,
            },
        })

        name = f"simulation_{model_kind.value}_seed{sim_config.seed}"
        os.makedirs(output_dir, exist_ok=True)
        csv_path = os.path.join(output_dir, f"{name}.csv")
        path.to_frame().to_csv(csv_path, index=False, float_format="%.17g")
        report_path = self.report_store.save(f"{name}_summary", summary)

        logger.info(
            f"Simulated {sim_config.T} periods ({model_kind.value}); window means "
            f"y={summary['output_gap']['mean']:.6f}, pi={summary['inflation']['mean']:.6f}"
        )
        return path, summary, {"path": csv_path, "summary": report_path}
