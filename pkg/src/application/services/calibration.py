"""Grid search over (eta1, rho_eps, rho_eta) minimizing the moment distance."""

import hashlib
import itertools
import json
import math
from dataclasses import asdict, dataclass, replace
from functools import partial
from typing import Any, Iterable, Iterator, Optional

import numpy as np
import pandas as pd

from ... import logger
from ...domain.entities import (
    CalibrationResult,
    CalibrationTarget,
    GridPoint,
    GridRunResult,
    GridSpec,
    MahalanobisSpec,
    MahalanobisStrategy,
    ModelKind,
    ShockScenario,
    SimConfig,
    StructuralParams
)
from ...domain.repositories import (
    ConfigurationError,
    ICheckpointStore,
    IGridExecutor,
    ToolkitError
)
from .simulator import extract_window, simulate
from .stats import mahalanobis

_STEP_TOLERANCE = 1e-9
_GRID_DECIMALS = 10
_DISTANCE_DECIMALS = 12

RESULT_COLUMNS = ["eta1", "rho_eps", "rho_eta", "mean_y", "mean_pi", "distance"]


def grid_axis(bounds: tuple[float, float, float], name: str = "axis") -> np.ndarray:
    """Inclusive, evenly spaced values of one grid axis.

    Raises:
        ConfigurationError: If the step is not positive or does not divide
            the range exactly.
    """
    start, stop, step = (float(v) for v in bounds)
    if not step > 0.0:
        raise ConfigurationError(f"{name}: step {step} must be positive")
    if stop < start:
        raise ConfigurationError(f"{name}: stop {stop} is below start {start}")
    count = round((stop - start) / step)
    if abs(count * step - (stop - start)) > _STEP_TOLERANCE:
        raise ConfigurationError(
            f"{name}: step {step} does not divide the range [{start}, {stop}]"
        )
    return np.round(start + step * np.arange(count + 1), _GRID_DECIMALS)


def grid_points(grid: GridSpec) -> list[GridPoint]:
    """All grid points in lexicographic (eta1, rho_eps, rho_eta) order."""
    if grid.seeds_per_point < 1:
        raise ConfigurationError(f"seeds_per_point={grid.seeds_per_point} must be positive")
    axes = (
        grid_axis(grid.eta1_range, "eta1"),
        grid_axis(grid.rho_eps_range, "rho_eps"),
        grid_axis(grid.rho_eta_range, "rho_eta"),
    )
    return [
        GridPoint(float(a), float(b), float(c))
        for a, b, c in itertools.product(*axes)
    ]


def point_seed(base_seed: int, index: int, k: int) -> int:
    """Seed of the k-th run at a grid index, derived from the base seed."""
    return int(np.random.SeedSequence([base_seed, index, k]).generate_state(1)[0])


def scenario_for_point(
    point: GridPoint,
    eps1: float,
    template: ShockScenario = ShockScenario()
) -> ShockScenario:
    """Shock scenario with pinned eps1 and the point's eta1 and persistences."""
    return replace(
        template,
        eps1=eps1,
        eta1=point.eta1,
        rho_eps=point.rho_eps,
        rho_eta=point.rho_eta,
    )


def evaluate_point(
    point: GridPoint,
    model_kind: ModelKind,
    eps1: float,
    data_means: tuple[float, float],
    p: StructuralParams,
    cfg: SimConfig,
    mspec: MahalanobisSpec = MahalanobisSpec(),
    *,
    scenario: ShockScenario = ShockScenario(),
    seeds_per_point: int = 1,
    index: int = 0,
    data_window: Optional[np.ndarray] = None
) -> CalibrationResult:
    """Simulate one grid point and measure its distance to the data.

    Window means are averaged over seeds_per_point runs, each seeded from
    (cfg.seed, index, k). Simulator failures and non-finite means do not
    propagate: the point is returned with an infinite distance and a tag
    naming the failure.

    Args:
        point: Candidate (eta1, rho_eps, rho_eta).
        model_kind: Expectation regime.
        eps1: Pinned initial demand shock.
        data_means: Empirical (output gap, inflation) window means.
        p: Structural parameters.
        cfg: Simulation settings (cfg.seed is the base seed).
        mspec: Distance settings.
        scenario: Template for the remaining scenario fields.
        seeds_per_point: Runs averaged per point.
        index: Position of the point in the grid enumeration.
        data_window: n x 2 data window (paired_series only).

    Returns:
        The evaluation, unranked.
    """
    shocks = scenario_for_point(point, eps1, scenario)
    means = np.zeros(2)
    try:
        for k in range(seeds_per_point):
            run_cfg = replace(cfg, seed=point_seed(cfg.seed, index, k), run_index=0)
            path = simulate(model_kind, p, shocks, run_cfg)
            y, pi = extract_window(path, shocks.t0, run_cfg.window_len)
            means += (y.mean(), pi.mean())
    except ToolkitError as e:
        logger.warning(f"Grid point {point.as_tuple()} failed: {type(e).__name__}: {e}")
        return CalibrationResult(
            point=point,
            mean_y=float("nan"),
            mean_pi=float("nan"),
            distance=float("inf"),
            index=index,
            tag=type(e).__name__,
        )

    means /= seeds_per_point
    if not np.all(np.isfinite(means)):
        logger.warning(f"Grid point {point.as_tuple()} produced non-finite means")
        return CalibrationResult(
            point=point,
            mean_y=float(means[0]),
            mean_pi=float(means[1]),
            distance=float("inf"),
            index=index,
            tag="NonFiniteMeans",
        )

    distance = mahalanobis(means, np.asarray(data_means, dtype=float), data_window, mspec)
    return CalibrationResult(
        point=point,
        mean_y=float(means[0]),
        mean_pi=float(means[1]),
        distance=distance,
        index=index,
    )


@dataclass(frozen=True, eq=False)
class _GridContext:
    """Everything a worker needs to evaluate a grid point."""

    model_kind: ModelKind
    target: CalibrationTarget
    params: StructuralParams
    simulation: SimConfig
    mahalanobis: MahalanobisSpec
    scenario: ShockScenario
    seeds_per_point: int


def _evaluate_task(context: _GridContext, task: tuple[int, GridPoint]) -> CalibrationResult:
    index, point = task
    return evaluate_point(
        point,
        context.model_kind,
        context.target.eps1,
        context.target.data_means,
        context.params,
        context.simulation,
        context.mahalanobis,
        scenario=context.scenario,
        seeds_per_point=context.seeds_per_point,
        index=index,
        data_window=context.target.data_window,
    )


def grid_hash(grid: GridSpec, context: _GridContext) -> str:
    """SHA-256 fingerprint of the grid and everything that shapes its results."""
    window = context.target.data_window
    payload: dict[str, Any] = {
        "grid": asdict(grid),
        "model_kind": context.model_kind.value,
        "eps1": context.target.eps1,
        "data_means": list(context.target.data_means),
        "data_window": None if window is None else np.asarray(window).tolist(),
        "params": asdict(context.params),
        "simulation": {
            k: (v.value if hasattr(v, "value") else v)
            for k, v in asdict(context.simulation).items()
        },
        "mahalanobis": {
            "strategy": context.mahalanobis.strategy.value,
            "pinv_tolerance": context.mahalanobis.pinv_tolerance,
        },
        "scenario": asdict(context.scenario),
    }
    encoded = json.dumps(payload, sort_keys=True, default=repr).encode("utf-8")
    return hashlib.sha256(encoded).hexdigest()


def rank_key(result: CalibrationResult) -> tuple[float, tuple[float, float, float]]:
    """Sort key (distance, point) with the distance snapped to a fixed precision.

    Distances that differ only by rounding noise compare equal, so ties fall
    back to the lexicographic order of the grid points.
    """
    distance = result.distance
    if math.isfinite(distance):
        distance = round(distance, _DISTANCE_DECIMALS)
    return distance, result.point.as_tuple()


def rank_results(results: Iterable[CalibrationResult]) -> tuple[CalibrationResult, ...]:
    """Order by rank_key and assign 1-based ranks.

    The key is total over grid points, so the ranking does not depend on
    the order in which results arrive.
    """
    ordered = sorted(results, key=rank_key)
    return tuple(replace(r, rank=k) for k, r in enumerate(ordered, start=1))


def ties_at_best(ranked: tuple[CalibrationResult, ...]) -> int:
    """Number of results whose snapped distance equals the best one."""
    best = rank_key(ranked[0])[0]
    return sum(1 for r in ranked if rank_key(r)[0] == best)


def _serial_map(fn: Any, tasks: Iterable[Any]) -> Iterator[Any]:
    for task in tasks:
        yield fn(task)


def run_grid(
    grid: GridSpec,
    model_kind: ModelKind,
    target: CalibrationTarget,
    p: StructuralParams,
    cfg: SimConfig,
    mspec: MahalanobisSpec = MahalanobisSpec(),
    *,
    scenario: ShockScenario = ShockScenario(),
    executor: Optional[IGridExecutor] = None,
    checkpoint: Optional[ICheckpointStore] = None
) -> GridRunResult:
    """Evaluate every grid point and rank the results.

    Args:
        grid: Grid ranges and seeds per point.
        model_kind: Expectation regime.
        target: Pinned eps1 and empirical moments.
        p: Structural parameters.
        cfg: Simulation settings (cfg.seed is the base seed).
        mspec: Distance settings.
        scenario: Template for the non-searched scenario fields.
        executor: Task executor; points run serially when omitted.
        checkpoint: Append-only store of completed points, for resume.

    Returns:
        Ranked results with the best point and the grid fingerprint.

    Raises:
        ConfigurationError: If the grid is malformed or empty.
        CheckpointError: If the checkpoint belongs to another run or is corrupt.
    """
    if mspec.strategy is MahalanobisStrategy.PAIRED_SERIES and target.data_window is None:
        raise ConfigurationError("paired_series strategy needs the data window")

    points = grid_points(grid)
    if not points:
        raise ConfigurationError("calibration grid is empty")

    context = _GridContext(
        model_kind=model_kind,
        target=target,
        params=p,
        simulation=cfg,
        mahalanobis=mspec,
        scenario=scenario,
        seeds_per_point=grid.seeds_per_point,
    )
    fingerprint = grid_hash(grid, context)

    completed: dict[int, CalibrationResult] = {}
    if checkpoint is not None:
        completed = checkpoint.open(fingerprint, cfg.seed)
        if completed:
            logger.info(f"Resuming grid: {len(completed)} of {len(points)} points already done")

    pending = [(index, point) for index, point in enumerate(points) if index not in completed]
    logger.info(
        f"Evaluating {len(pending)} grid points ({model_kind.value}, "
        f"{grid.seeds_per_point} seed(s) per point)"
    )

    task = partial(_evaluate_task, context)
    try:
        if executor is None:
            outcomes = _serial_map(task, pending)
        else:
            outcomes = executor.map_unordered(task, pending, total=len(pending))
        for result in outcomes:
            completed[result.index] = result
            if checkpoint is not None:
                checkpoint.append(result)
    finally:
        if checkpoint is not None:
            checkpoint.close()

    ranked = rank_results(completed.values())
    best = ranked[0]
    ties = ties_at_best(ranked)
    logger.info(
        f"Best point {best.point.as_tuple()} with distance {best.distance:.6f} "
        f"(means y={best.mean_y:.6f}, pi={best.mean_pi:.6f})"
    )
    if ties > 1:
        logger.warning(
            f"{ties} of {len(ranked)} points tie at distance {best.distance:.12f}; "
            f"the best point is the first of them in grid order"
        )
        if mspec.strategy is MahalanobisStrategy.PAPER_TWO_OBS:
            logger.warning(
                "paper_two_obs scores every distinct mean pair at sqrt(2); "
                "use the paired_series strategy to rank grid points"
            )
    return GridRunResult(results=ranked, best=best, grid_hash=fingerprint, ties_at_best=ties)


def results_frame(run: GridRunResult) -> pd.DataFrame:
    """Full results table in rank order."""
    records = [r.to_record() for r in run.results]
    return pd.DataFrame.from_records(records, columns=RESULT_COLUMNS + ["rank", "tag"])
