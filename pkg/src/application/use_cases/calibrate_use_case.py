import os
from typing import Optional
from ... import logger
from ...domain.entities import (
    CalibrationTarget,
    GridRunResult,
    ModelKind,
    RunConfig
)
from ...domain.repositories import ICheckpointStore, IGridExecutor, IReportStore
from ..services.calibration import results_frame, run_grid


class CalibrateUseCase:
    """Use case for the grid search over the shock parameters.

    This class runs the grid for one expectation regime against one
    empirical target and writes the ranked table and the best point.
    """

    def __init__(
        self,
        executor: IGridExecutor,
        report_store: IReportStore,
        checkpoint_store: Optional[ICheckpointStore] = None
    ):
        """Initialize the use case with required dependencies.

        Args:
            executor: Service evaluating grid points, possibly in parallel.
            report_store: Service for persisting the best-point report.
            checkpoint_store: Optional append-only store for resume.
        """
        self.executor = executor
        self.report_store = report_store
        self.checkpoint_store = checkpoint_store

    def execute(
        self,
        model_kind: ModelKind,
        target: CalibrationTarget,
        run_config: RunConfig,
        output_dir: str
    ) -> tuple[GridRunResult, dict[str, str]]:
        """Execute the grid search.

        Args:
            model_kind: Expectation regime.
            target: Pinned eps1 and empirical moments.
            run_config: Parameters, scenario template, simulation, grid and distance settings.
            output_dir: Destination directory.

        Returns:
            The ranked results and the written files.
        """
        run = run_grid(
            run_config.grid,
            model_kind,
            target,
            run_config.params,
            run_config.simulation,
            run_config.mahalanobis,
            scenario=run_config.scenario,
            executor=self.executor,
            checkpoint=self.checkpoint_store,
        )

        label = target.label or "custom"
        name = f"calibration_{model_kind.value}_{label}"
        os.makedirs(output_dir, exist_ok=True)
        table_path = os.path.join(output_dir, f"{name}.csv")
        results_frame(run).to_csv(table_path, index=False, float_format="%.17g")

        failed = sum(1 for r in run.results if r.tag is not None)
        record = {
            "model": model_kind.value,
            "target": label,
            "eps1": target.eps1,
            "data_means": list(target.data_means),
            "strategy": run_config.mahalanobis.strategy.value,
            "grid_hash": run.grid_hash,
            "points": len(run.results),
            "failed_points": failed,
            "ties_at_best": run.ties_at_best,
            "best": run.best.to_record(),
        }
        report_path = self.report_store.save(f"{name}_best", record)
        logger.info(f"Calibration table written to {table_path} ({failed} failed points)")
        return run, {"table": table_path, "best": report_path}
