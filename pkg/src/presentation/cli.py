import argparse
import os
import sys
import pandas as pd
from dataclasses import replace
from typing import Optional
from .. import logger
from ..config import config
from ..domain.entities import (
    CalibrationTarget,
    FilterKind,
    GridPoint,
    KalmanLayout,
    MahalanobisStrategy,
    ModelKind,
    NoiseMode,
    RunConfig
)
from ..domain.repositories import InputFileMissingError, ToolkitError
from ..application.use_cases.break_test_use_case import BreakTestUseCase
from ..application.use_cases.calibrate_use_case import CalibrateUseCase
from ..application.use_cases.estimate_gap_use_case import EstimateGapUseCase
from ..application.use_cases.fetch_data_use_case import FetchDataUseCase
from ..application.use_cases.load_empirical_data_use_case import LoadEmpiricalDataUseCase
from ..application.use_cases.report_use_case import ReportUseCase
from ..application.use_cases.robustness_use_case import RobustnessUseCase
from ..application.use_cases.simulate_use_case import SimulateUseCase
from ..infrastructure.execution.grid_executor import ProcessPoolGridExecutor
from ..infrastructure.external.fred_client import FREDClient
from ..infrastructure.persistence.checkpoint_store import FileCheckpointStore
from ..infrastructure.persistence.csv_loader import CSVLoader
from ..infrastructure.persistence.report_store import JSONReportStore
from ..infrastructure.persistence.run_config_loader import YAMLRunConfigLoader
from ..infrastructure.visualization.plotly_chart import PlotlyChartGenerator
from .report_components import ReportComponents

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2


def _quarter(text: str) -> str:
    """argparse type for quarter labels such as 2020Q1."""
    try:
        return str(pd.Period(text.strip().upper(), freq="Q"))
    except (ValueError, TypeError):
        raise argparse.ArgumentTypeError(f"invalid quarter {text!r}; expected e.g. 2020Q1")


def _window(text: str) -> tuple[int, int]:
    """argparse type for inclusive period windows such as 1000:1080."""
    try:
        first, last = (int(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid window {text!r}; expected FIRST:LAST")
    return first, last


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"{value} must be positive")
    return value


class CLIApp:
    """Command-line application wiring the use cases to their adapters."""

    def __init__(self, args: argparse.Namespace):
        """Initialize services from the parsed arguments.

        Args:
            args: Parsed command-line arguments.
        """
        self.args = args
        self.run_config: RunConfig = YAMLRunConfigLoader().load(args.config)
        self.output_dir = args.out or self.run_config.output_dir or config.output_dir
        self.series_repository = CSVLoader()
        self.chart_generator = PlotlyChartGenerator()
        self.report_store = JSONReportStore(self.output_dir)

    def _gdp_path(self) -> str:
        return getattr(self.args, "gdp", None) or self.run_config.gdp_path or config.gdp_path

    def _cpi_path(self) -> str:
        return getattr(self.args, "cpi", None) or self.run_config.cpi_path or config.cpi_path

    def _kalman_spec(self):
        layout = getattr(self.args, "kalman_layout", None)
        if layout:
            return replace(self.run_config, kalman_layout=KalmanLayout(layout)).kalman_spec()
        return self.run_config.kalman_spec()

    def _load_empirics(self, required: bool):
        """Load gaps and inflation; without explicit paths, missing default files are skipped."""
        gdp_path, cpi_path = self._gdp_path(), self._cpi_path()
        explicit = getattr(self.args, "gdp", None) or self.run_config.gdp_path
        if not required and not explicit and not os.path.exists(gdp_path):
            logger.info(f"No GDP file at {gdp_path}; actual-data rows are skipped")
            return None
        if not os.path.exists(cpi_path) and not (getattr(self.args, "cpi", None) or self.run_config.cpi_path):
            cpi_path = None
        return LoadEmpiricalDataUseCase(self.series_repository).execute(
            gdp_path,
            cpi_path,
            hp_lambda=self.run_config.hp_lambda,
            kalman_spec=self._kalman_spec(),
            cpi_base_quarter=self.run_config.cpi_base_quarter,
        )

    def _scenario(self):
        args = self.args
        overrides = {
            name: getattr(args, name)
            for name in ("eps1", "eta1", "rho_eps", "rho_eta")
            if getattr(args, name, None) is not None
        }
        return replace(self.run_config.scenario, **overrides)

    def _simulation(self):
        args = self.args
        overrides = {}
        if getattr(args, "seed", None) is not None:
            overrides["seed"] = args.seed
        if getattr(args, "run_index", None) is not None:
            overrides["run_index"] = args.run_index
        if getattr(args, "noise", None) is not None:
            overrides["noise_mode"] = NoiseMode(args.noise)
        if getattr(args, "periods", None) is not None:
            overrides["T"] = args.periods
        return replace(self.run_config.simulation, **overrides)

    def cmd_gap(self) -> int:
        """Estimate output gaps and draw them."""
        args = self.args
        filters = [FilterKind.HP, FilterKind.KALMAN] if args.filter == "both" else [FilterKind(args.filter)]
        written = EstimateGapUseCase(self.series_repository, self.chart_generator).execute(
            self._gdp_path(),
            filters,
            self.output_dir,
            hp_lambda=args.lamb if args.lamb is not None else self.run_config.hp_lambda,
            kalman_spec=self._kalman_spec(),
            cpi_path=args.cpi,
            cpi_base_quarter=self.run_config.cpi_base_quarter,
        )
        print(ReportComponents.render_files(written))
        return EXIT_OK

    def cmd_break(self) -> int:
        """Test a gap series for a mean shift."""
        args = self.args
        result, path = BreakTestUseCase(self.series_repository, self.report_store).execute(
            args.gap_csv, args.break_date
        )
        name = os.path.splitext(os.path.basename(args.gap_csv))[0]
        print(ReportComponents.render_break_table(result, name))
        print(ReportComponents.render_files({"report": path}))
        return EXIT_OK

    def cmd_simulate(self) -> int:
        """Simulate one economy."""
        _, summary, written = SimulateUseCase(self.report_store).execute(
            ModelKind(self.args.model),
            self.run_config.params,
            self._scenario(),
            self._simulation(),
            self.output_dir,
        )
        print(ReportComponents.render_simulation_summary(summary))
        print(ReportComponents.render_files(written))
        return EXIT_OK

    def _target(self) -> CalibrationTarget:
        args = self.args
        if args.target_means is not None:
            if args.eps1 is None:
                raise argparse.ArgumentTypeError("--target-means needs --eps1")
            return CalibrationTarget(
                eps1=args.eps1,
                data_means=tuple(args.target_means),
                label="custom",
            )
        empirics = self._load_empirics(required=True)
        target = LoadEmpiricalDataUseCase.calibration_target(
            empirics,
            FilterKind(args.filter),
            self.run_config.window_start,
            self.run_config.window_quarters,
        )
        if args.eps1 is not None:
            target = replace(target, eps1=args.eps1)
        return target

    def cmd_calibrate(self) -> int:
        """Grid-search the shock parameters."""
        args = self.args
        grid = self.run_config.grid
        for name in ("eta1_range", "rho_eps_range", "rho_eta_range"):
            if getattr(args, name) is not None:
                grid = replace(grid, **{name: tuple(getattr(args, name))})
        if args.seeds_per_point is not None:
            grid = replace(grid, seeds_per_point=args.seeds_per_point)
        target = self._target()
        mahalanobis = self.run_config.mahalanobis
        if args.strategy is not None:
            mahalanobis = replace(mahalanobis, strategy=MahalanobisStrategy(args.strategy))
        elif (mahalanobis.strategy is MahalanobisStrategy.PAIRED_SERIES
              and target.data_window is None):
            logger.warning(
                "--target-means gives no data window for paired_series; "
                "falling back to paper_two_obs"
            )
            mahalanobis = replace(mahalanobis, strategy=MahalanobisStrategy.PAPER_TWO_OBS)
        run_config = replace(
            self.run_config,
            grid=grid,
            mahalanobis=mahalanobis,
            simulation=self._simulation(),
        )

        checkpoint = FileCheckpointStore(args.checkpoint) if args.checkpoint else None
        executor = ProcessPoolGridExecutor(jobs=args.jobs, progress=not args.quiet)
        run, written = CalibrateUseCase(executor, self.report_store, checkpoint).execute(
            ModelKind(args.model), target, run_config, self.output_dir
        )
        print(ReportComponents.render_calibration(run, target, top=args.top))
        print(ReportComponents.render_files(written))
        return EXIT_OK

    def cmd_robustness(self) -> int:
        """Compare normality of simulated and actual series."""
        args = self.args
        empirics = self._load_empirics(required=bool(args.gdp))
        rows, written = RobustnessUseCase(self.chart_generator, self.report_store).execute(
            self.run_config.params,
            args.seed if args.seed is not None else self.run_config.simulation.seed,
            args.window,
            self.output_dir,
            runs=args.runs,
            periods=args.periods,
            empirics=empirics,
        )
        print(ReportComponents.render_robustness(rows))
        print(ReportComponents.render_files(written))
        return EXIT_OK

    def cmd_report(self) -> int:
        """Summarize empirical and simulated moments."""
        args = self.args
        empirics = self._load_empirics(required=bool(args.gdp))
        scenario = self.run_config.scenario
        point = GridPoint(*args.point) if args.point else GridPoint(
            scenario.eta1, scenario.rho_eps, scenario.rho_eta
        )
        eps1 = args.eps1
        if eps1 is None and empirics is not None:
            gap = empirics.gap(FilterKind(args.filter))
            quarter = pd.Period(self.run_config.window_start, freq="Q")
            if quarter in gap.dates:
                eps1 = float(gap.data.loc[quarter])
        table, calibrations, written = ReportUseCase(self.report_store).execute(
            self.run_config, point, self.output_dir, empirics=empirics, eps1=eps1
        )
        print(ReportComponents.render_statistics(table))
        print()
        print(ReportComponents.render_calibration_summary(calibrations))
        print(ReportComponents.render_files(written))
        return EXIT_OK

    def cmd_fetch(self) -> int:
        """Download fresh FRED CSVs."""
        args = self.args
        series_ids = args.series or [config.gdp_series_id, config.cpi_series_id]
        written = FetchDataUseCase(FREDClient(), self.series_repository).execute(
            series_ids, args.data_dir or config.data_dir
        )
        print(ReportComponents.render_files(written))
        return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subcommand per pipeline step."""
    parser = argparse.ArgumentParser(
        prog="nk-covid",
        description="Behavioral New Keynesian toolkit for India's COVID demand "
                    "and vaccination supply shocks.",
    )
    parser.add_argument("--config", help="YAML run configuration (defaults reproduce the baseline pipeline)")
    parser.add_argument("--out", help="output directory (default: NKCOVID_OUTPUT_DIR or ./output)")
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    gap = commands.add_parser("gap", help="estimate the output gap with the HP and/or Kalman filter")
    gap.add_argument("gdp", nargs="?", help="real GDP CSV (default: snapshot in the data directory)")
    gap.add_argument("--filter", choices=["hp", "kalman", "both"], default="both")
    gap.add_argument("--lambda", dest="lamb", type=float, help="HP smoothing parameter (default 1600)")
    gap.add_argument("--kalman-layout", choices=[k.value for k in KalmanLayout])
    gap.add_argument("--cpi", help="CPI CSV; adds the inflation series and chart")
    gap.set_defaults(handler=CLIApp.cmd_gap)

    brk = commands.add_parser("break", help="test a gap series for a mean shift (ANOVA F test)")
    brk.add_argument("gap_csv", help="gap CSV written by the gap command")
    brk.add_argument("--break-date", type=_quarter, default="2020Q1",
                     help="last quarter of the pre-break sample (default 2020Q1)")
    brk.set_defaults(handler=CLIApp.cmd_break)

    sim = commands.add_parser("simulate", help="simulate the behavioral or rational economy")
    sim.add_argument("--model", choices=[m.value for m in ModelKind], default="behavioral")
    sim.add_argument("--seed", type=int)
    sim.add_argument("--run-index", type=int)
    sim.add_argument("--noise", choices=[n.value for n in NoiseMode])
    sim.add_argument("--periods", type=_positive_int, help="number of simulated periods")
    sim.add_argument("--eps1", type=float, help="initial demand shock")
    sim.add_argument("--eta1", type=float, help="initial supply shock")
    sim.add_argument("--rho-eps", type=float, help="demand-shock persistence")
    sim.add_argument("--rho-eta", type=float, help="supply-shock persistence")
    sim.set_defaults(handler=CLIApp.cmd_simulate)

    cal = commands.add_parser("calibrate", help="grid-search (eta1, rho_eps, rho_eta)")
    cal.add_argument("--filter", choices=["hp", "kalman"], default="hp",
                     help="gap used for the pinned demand shock and the target moments")
    cal.add_argument("--model", choices=[m.value for m in ModelKind], default="behavioral")
    cal.add_argument("--gdp", help="real GDP CSV")
    cal.add_argument("--cpi", help="CPI CSV")
    cal.add_argument("--eps1", type=float, help="override the pinned initial demand shock")
    cal.add_argument("--target-means", type=float, nargs=2, metavar=("Y", "PI"),
                     help="target window means; skips the data files (needs --eps1)")
    cal.add_argument("--eta1-range", type=float, nargs=3, metavar=("START", "STOP", "STEP"))
    cal.add_argument("--rho-eps-range", type=float, nargs=3, metavar=("START", "STOP", "STEP"))
    cal.add_argument("--rho-eta-range", type=float, nargs=3, metavar=("START", "STOP", "STEP"))
    cal.add_argument("--seeds-per-point", type=_positive_int)
    cal.add_argument(
        "--strategy", choices=[s.value for s in MahalanobisStrategy],
        help="distance covariance (default: paired_series, or the config file value)"
    )
    cal.add_argument("--seed", type=int, help="base seed")
    cal.add_argument("--noise", choices=[n.value for n in NoiseMode])
    cal.add_argument("--jobs", type=_positive_int, help="worker processes (default: NKCOVID_JOBS or CPU count)")
    cal.add_argument("--checkpoint", help="append-only checkpoint file for resume")
    cal.add_argument("--top", type=_positive_int, default=10, help="rows shown")
    cal.add_argument("--quiet", action="store_true", help="no progress bar")
    cal.set_defaults(handler=CLIApp.cmd_calibrate)

    rob = commands.add_parser("robustness", help="Jarque-Bera comparison under AR(1) innovations")
    rob.add_argument("--seed", type=int)
    rob.add_argument("--runs", type=_positive_int, default=1, help="seeds behind the rejection rates")
    rob.add_argument("--window", type=_window, default=(1000, 1080), help="inclusive FIRST:LAST periods")
    rob.add_argument("--periods", type=_positive_int, default=2000)
    rob.add_argument("--gdp", help="real GDP CSV for the actual-data rows")
    rob.add_argument("--cpi", help="CPI CSV for the actual-data rows")
    rob.set_defaults(handler=CLIApp.cmd_robustness)

    rep = commands.add_parser("report", help="statistical properties and calibration summary")
    rep.add_argument("--point", type=float, nargs=3, metavar=("ETA1", "RHO_EPS", "RHO_ETA"))
    rep.add_argument("--eps1", type=float, help="initial demand shock of the simulated rows")
    rep.add_argument("--filter", choices=["hp", "kalman"], default="hp",
                     help="gap whose first window quarter pins the demand shock")
    rep.add_argument("--gdp", help="real GDP CSV")
    rep.add_argument("--cpi", help="CPI CSV")
    rep.set_defaults(handler=CLIApp.cmd_report)

    fetch = commands.add_parser("fetch", help="download fresh FRED CSVs (network access)")
    fetch.add_argument("--series", nargs="+", help="FRED ids (default: GDP_SERIES_ID CPI_SERIES_ID)")
    fetch.add_argument("--data-dir", help="destination (default: NKCOVID_DATA_DIR or ./data)")
    fetch.set_defaults(handler=CLIApp.cmd_fetch)

    return parser


def _fail(e: BaseException, code: int) -> int:
    message = " ".join(str(e).split())
    logger.error(f"{type(e).__name__}: {message}")
    print(f"error: {type(e).__name__}: {message}", file=sys.stderr)
    return code


def main(argv: Optional[list[str]] = None) -> int:
    """Entry point of the command-line interface.

    Returns:
        0 on success, 1 on a toolkit error, 2 on a usage error or a missing input file.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        app = CLIApp(args)
        return args.handler(app)
    except InputFileMissingError as e:
        return _fail(e, EXIT_USAGE)
    except argparse.ArgumentTypeError as e:
        return _fail(e, EXIT_USAGE)
    except (ToolkitError, IndexError, ZeroDivisionError) as e:
        return _fail(e, EXIT_ERROR)


if __name__ == "__main__":
    sys.exit(main())
