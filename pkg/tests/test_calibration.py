"""Tests for the calibration grid, point evaluation, ranking and checkpoint resume."""

import math
import random
from dataclasses import replace

import numpy as np
import pytest

from src.application.services.calibration import (
    RESULT_COLUMNS,
    evaluate_point,
    grid_axis,
    grid_points,
    point_seed,
    rank_key,
    rank_results,
    results_frame,
    run_grid,
    scenario_for_point
)
from src.application.services.simulator import extract_window, simulate
from src.application.services.stats import mahalanobis
from src.domain.entities import (
    CalibrationResult,
    CalibrationTarget,
    GridPoint,
    GridSpec,
    MahalanobisSpec,
    MahalanobisStrategy,
    ModelKind,
    NoiseMode,
    ShockScenario,
    SimConfig
)
from src.domain.repositories import CheckpointError, ConfigurationError, IGridExecutor
from src.infrastructure.persistence.checkpoint_store import FileCheckpointStore

TEMPLATE = ShockScenario(t0=10)
TOY_GRID = GridSpec(
    eta1_range=(0.0, 0.5, 0.5),
    rho_eps_range=(0.5, 0.8, 0.3),
    rho_eta_range=(0.5, 0.9, 0.4),
)
DATA_MEANS = (-0.0046, 1.2580)


class ReversedExecutor(IGridExecutor):
    """Runs tasks in reverse order, like a pool finishing out of order."""

    def map_unordered(self, fn, tasks, total=None):
        for task in reversed(list(tasks)):
            yield fn(task)


class Interrupted(RuntimeError):
    pass


class InterruptingExecutor(IGridExecutor):
    """Stops after a fixed number of tasks."""

    def __init__(self, stop_after):
        self.stop_after = stop_after

    def map_unordered(self, fn, tasks, total=None):
        for k, task in enumerate(tasks):
            if k == self.stop_after:
                raise Interrupted("stopped")
            yield fn(task)


@pytest.fixture
def target():
    return CalibrationTarget(eps1=-0.27, data_means=DATA_MEANS, label="test")


def test_default_grid_size():
    assert len(grid_points(GridSpec())) == 101 * 21 * 21 == 44_541


def test_grid_is_lexicographic():
    points = grid_points(TOY_GRID)
    assert points == sorted(points)
    assert points[0] == GridPoint(0.0, 0.5, 0.5)
    assert points[-1] == GridPoint(0.5, 0.8, 0.9)


def test_grid_axis_values_are_exact():
    axis = grid_axis((0.0, 1.0, 0.05))
    assert len(axis) == 21
    assert axis[-1] == 1.0
    assert 0.35 in axis


@pytest.mark.parametrize("bounds", [(0.0, 1.0, 0.3), (0.0, 1.0, 0.0), (1.0, 0.0, 0.1)])
def test_bad_grid_axis_is_rejected(bounds):
    with pytest.raises(ConfigurationError):
        grid_axis(bounds)


def test_point_seed_is_stable_and_distinct():
    assert point_seed(0, 5, 0) == point_seed(0, 5, 0)
    assert len({point_seed(0, i, k) for i in range(50) for k in range(3)}) == 150


def test_scenario_for_point_keeps_template_fields():
    s = scenario_for_point(GridPoint(0.64, 0.8, 0.9), -0.18, TEMPLATE)
    assert (s.eps1, s.eta1, s.rho_eps, s.rho_eta) == (-0.18, 0.64, 0.8, 0.9)
    assert s.t0 == TEMPLATE.t0
    assert s.demand_quarters == TEMPLATE.demand_quarters


def test_one_quarter_impulse_means(params, quiet_config):
    point = GridPoint(0.0, 0.0, 0.9)
    result = evaluate_point(
        point, ModelKind.BEHAVIORAL, -0.27, DATA_MEANS, params, quiet_config, scenario=TEMPLATE
    )
    impulse = replace(TEMPLATE, eps1=-0.27, rho_eps=0.0, eta1=0.0)
    path = simulate(ModelKind.BEHAVIORAL, params, impulse, quiet_config)
    y, pi = extract_window(path, TEMPLATE.t0, quiet_config.window_len)
    assert result.mean_y == pytest.approx(y.mean(), abs=1e-15)
    assert result.mean_pi == pytest.approx(pi.mean(), abs=1e-15)
    assert result.tag is None


def test_matching_means_give_zero_distance(params, quiet_config):
    point = GridPoint(0.3, 0.5, 0.5)
    first = evaluate_point(point, ModelKind.BEHAVIORAL, -0.27, DATA_MEANS, params, quiet_config,
                           scenario=TEMPLATE)
    again = evaluate_point(point, ModelKind.BEHAVIORAL, -0.27, (first.mean_y, first.mean_pi),
                           params, quiet_config, scenario=TEMPLATE)
    assert again.distance == 0.0


def test_seeds_are_averaged(params):
    cfg = SimConfig(T=60, window_len=16, seed=4, noise_mode=NoiseMode.WHITE)
    point = GridPoint(0.5, 0.8, 0.9)
    result = evaluate_point(point, ModelKind.BEHAVIORAL, -0.27, DATA_MEANS, params, cfg,
                            scenario=TEMPLATE, seeds_per_point=2, index=7)
    shocks = scenario_for_point(point, -0.27, TEMPLATE)
    means = []
    for k in range(2):
        run_cfg = replace(cfg, seed=point_seed(4, 7, k), run_index=0)
        y, pi = extract_window(simulate(ModelKind.BEHAVIORAL, params, shocks, run_cfg), 10, 16)
        means.append((y.mean(), pi.mean()))
    np.testing.assert_allclose((result.mean_y, result.mean_pi), np.mean(means, axis=0), atol=1e-15)


def test_failed_point_is_tagged(params):
    cfg = SimConfig(T=60, window_len=16, noise_mode=NoiseMode.NONE)
    late = replace(TEMPLATE, t0=55)
    result = evaluate_point(GridPoint(0.5, 0.8, 0.9), ModelKind.RATIONAL, -0.27, DATA_MEANS,
                            params, cfg, scenario=late)
    assert result.distance == math.inf
    assert result.tag == "ConfigurationError"


def test_toy_grid_matches_independent_evaluations(params, quiet_config, target):
    run = run_grid(TOY_GRID, ModelKind.BEHAVIORAL, target, params, quiet_config,
                   scenario=TEMPLATE)
    assert len(run.results) == 8
    assert [r.rank for r in run.results] == list(range(1, 9))
    for result in run.results:
        expected = evaluate_point(
            result.point, ModelKind.BEHAVIORAL, target.eps1, DATA_MEANS, params, quiet_config,
            scenario=TEMPLATE, index=result.index,
        )
        assert (result.mean_y, result.mean_pi, result.distance) == (
            expected.mean_y, expected.mean_pi, expected.distance
        )
    assert run.best == run.results[0]


def test_ranking_ignores_evaluation_order(params, quiet_config, target):
    serial = run_grid(TOY_GRID, ModelKind.RATIONAL, target, params, quiet_config,
                      scenario=TEMPLATE)
    reversed_run = run_grid(TOY_GRID, ModelKind.RATIONAL, target, params, quiet_config,
                            scenario=TEMPLATE, executor=ReversedExecutor())
    assert serial.results == reversed_run.results
    assert serial.grid_hash == reversed_run.grid_hash

    shuffled = list(serial.results)
    random.Random(0).shuffle(shuffled)
    assert rank_results(shuffled) == serial.results


def test_ties_break_on_point():
    tied = [
        CalibrationResult(GridPoint(*p), 0.0, 0.0, 1.0, index=k)
        for k, p in enumerate([(0.2, 0.5, 0.5), (0.1, 0.9, 0.5), (0.1, 0.5, 0.9)])
    ]
    failed = CalibrationResult(GridPoint(0.0, 0.0, 0.0), math.nan, math.nan, math.inf,
                               index=3, tag="InstabilityError")
    ranked = rank_results([failed] + tied)
    assert [r.point.as_tuple() for r in ranked] == [
        (0.1, 0.5, 0.9), (0.1, 0.9, 0.5), (0.2, 0.5, 0.5), (0.0, 0.0, 0.0)
    ]
    assert ranked[-1].rank == 4


def test_rounding_noise_does_not_decide_ties():
    root2 = math.sqrt(2.0)
    results = [
        CalibrationResult(GridPoint(0.25, 0.0, 0.0), 0.0, 0.0, root2 - 4.44e-16, index=25),
        CalibrationResult(GridPoint(0.5, 0.0, 0.0), 0.0, 0.0, root2 + 2.22e-16, index=50),
        CalibrationResult(GridPoint(0.0, 0.0, 0.0), 0.0, 0.0, root2, index=0),
    ]
    assert rank_key(results[0]) == rank_key(replace(results[0], distance=root2))
    ranked = rank_results(results)
    assert [r.index for r in ranked] == [0, 25, 50]


def test_two_obs_grid_ties_fall_back_to_grid_order(params, quiet_config, target):
    grid = GridSpec(eta1_range=(0.0, 0.5, 0.25), rho_eps_range=(0.0, 0.5, 0.25),
                    rho_eta_range=(0.0, 0.5, 0.25))
    run = run_grid(grid, ModelKind.BEHAVIORAL, target, params, quiet_config,
                   MahalanobisSpec(strategy=MahalanobisStrategy.PAPER_TWO_OBS), scenario=TEMPLATE)
    assert all(r.distance == pytest.approx(math.sqrt(2.0), abs=1e-12) for r in run.results)
    assert [r.point for r in run.results] == grid_points(grid)
    assert run.best.point == GridPoint(0.0, 0.0, 0.0)
    assert run.ties_at_best == 27


def test_paired_strategy_ranks_by_distance(params, quiet_config):
    rng = np.random.default_rng(4)
    window = np.column_stack([rng.normal(-0.01, 0.05, 16), rng.normal(1.2, 0.4, 16)])
    target = CalibrationTarget(eps1=-0.27, data_means=tuple(window.mean(axis=0)),
                               label="test", data_window=window)
    run = run_grid(TOY_GRID, ModelKind.BEHAVIORAL, target, params, quiet_config,
                   MahalanobisSpec(strategy=MahalanobisStrategy.PAIRED_SERIES), scenario=TEMPLATE)
    distances = [r.distance for r in run.results]
    assert distances == sorted(distances)
    assert len(set(distances)) > 1
    assert run.ties_at_best == distances.count(distances[0])


def test_zero_shock_slice_is_flat(params, quiet_config):
    grid = GridSpec(eta1_range=(0.0, 0.0, 1.0), rho_eps_range=(0.0, 1.0, 0.5),
                    rho_eta_range=(0.0, 1.0, 0.5))
    target = CalibrationTarget(eps1=0.0, data_means=DATA_MEANS)
    run = run_grid(grid, ModelKind.BEHAVIORAL, target, params, quiet_config, scenario=TEMPLATE)
    expected = mahalanobis(np.zeros(2), np.asarray(DATA_MEANS))
    assert len(run.results) == 9
    assert all(r.distance == expected for r in run.results)
    assert run.best.point == GridPoint(0.0, 0.0, 0.0)


def test_paired_strategy_needs_window(params, quiet_config, target):
    mspec = MahalanobisSpec(strategy=MahalanobisStrategy.PAIRED_SERIES)
    with pytest.raises(ConfigurationError):
        run_grid(TOY_GRID, ModelKind.BEHAVIORAL, target, params, quiet_config, mspec,
                 scenario=TEMPLATE)


def test_results_frame_layout(params, quiet_config, target):
    run = run_grid(TOY_GRID, ModelKind.BEHAVIORAL, target, params, quiet_config,
                   scenario=TEMPLATE)
    frame = results_frame(run)
    assert list(frame.columns) == RESULT_COLUMNS + ["rank", "tag"]
    assert frame["distance"].round(12).is_monotonic_increasing


def test_resume_is_byte_identical(params, quiet_config, target, tmp_path):
    uninterrupted = run_grid(TOY_GRID, ModelKind.BEHAVIORAL, target, params, quiet_config,
                             scenario=TEMPLATE)
    expected = results_frame(uninterrupted).to_csv(index=False, float_format="%.17g")

    store = FileCheckpointStore(str(tmp_path / "grid.ckpt"))
    with pytest.raises(Interrupted):
        run_grid(TOY_GRID, ModelKind.BEHAVIORAL, target, params, quiet_config,
                 scenario=TEMPLATE, executor=InterruptingExecutor(3), checkpoint=store)
    lines = (tmp_path / "grid.ckpt").read_text().splitlines()
    assert len(lines) == 1 + 3

    resumed = run_grid(TOY_GRID, ModelKind.BEHAVIORAL, target, params, quiet_config,
                       scenario=TEMPLATE, checkpoint=FileCheckpointStore(str(tmp_path / "grid.ckpt")))
    assert results_frame(resumed).to_csv(index=False, float_format="%.17g") == expected
    assert resumed.grid_hash == uninterrupted.grid_hash


def test_checkpoint_of_another_run_is_rejected(params, quiet_config, target, tmp_path):
    path = str(tmp_path / "grid.ckpt")
    run_grid(TOY_GRID, ModelKind.BEHAVIORAL, target, params, quiet_config,
             scenario=TEMPLATE, checkpoint=FileCheckpointStore(path))
    with pytest.raises(CheckpointError):
        run_grid(TOY_GRID, ModelKind.BEHAVIORAL, target, params, replace(quiet_config, seed=1),
                 scenario=TEMPLATE, checkpoint=FileCheckpointStore(path))


@pytest.mark.slow
def test_behavioral_grid_fits_a_window_the_rational_grid_cannot(params, quiet_config):
    grid = GridSpec(
        eta1_range=(0.5, 1.0, 0.25),
        rho_eps_range=(0.0, 0.5, 0.25),
        rho_eta_range=(0.75, 0.75, 0.25),
    )
    shocks = scenario_for_point(GridPoint(1.0, 0.0, 0.75), -0.27, TEMPLATE)
    y, pi = extract_window(simulate(ModelKind.BEHAVIORAL, params, shocks, quiet_config),
                           shocks.t0, quiet_config.window_len)
    window = np.column_stack([y, pi])
    data = CalibrationTarget(eps1=-0.27, data_means=(float(y.mean()), float(pi.mean())),
                             data_window=window, label="behavioral window")
    mspec = MahalanobisSpec(strategy=MahalanobisStrategy.PAIRED_SERIES)

    behavioral = run_grid(grid, ModelKind.BEHAVIORAL, data, params, quiet_config, mspec,
                          scenario=TEMPLATE)
    rational = run_grid(grid, ModelKind.RATIONAL, data, params, quiet_config, mspec,
                        scenario=TEMPLATE)

    assert behavioral.best.distance < rational.best.distance
    assert behavioral.best.mean_y == pytest.approx(data.data_means[0], abs=0.05)
    assert behavioral.best.mean_pi == pytest.approx(data.data_means[1], abs=0.05)
    assert abs(rational.best.mean_y - data.data_means[0]) > 0.15
