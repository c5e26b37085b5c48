"""Tests for the fixed-width checkpoint file."""

import math

import pytest

from src.domain.entities import CalibrationResult, GridPoint
from src.domain.repositories import CheckpointError
from src.infrastructure.persistence.checkpoint_store import (
    RECORD_WIDTH,
    FileCheckpointStore,
    format_record,
    parse_record
)

HASH = "ab" * 32


def test_record_has_fixed_width_and_parses_exactly():
    result = CalibrationResult(GridPoint(0.64, 0.8, 0.9), -0.1 / 3.0, 1.2518, 0.1 + 0.2, index=123)
    line = format_record(result)
    assert len(line) == RECORD_WIDTH + 1
    assert parse_record(line, 2) == result


def test_failed_record_keeps_tag_and_infinity():
    result = CalibrationResult(GridPoint(0.0, 1.0, 1.0), math.nan, math.nan, math.inf,
                               index=44540, tag="IndeterminacyError")
    parsed = parse_record(format_record(result), 2)
    assert parsed.distance == math.inf
    assert math.isnan(parsed.mean_y)
    assert parsed.tag == "IndeterminacyError"
    assert parsed.index == 44540


def test_truncated_record_is_rejected():
    line = format_record(CalibrationResult(GridPoint(0.1, 0.2, 0.3), 0.0, 0.0, 1.0, index=0))
    with pytest.raises(CheckpointError):
        parse_record(line[:40], 5)


def test_store_round_trip(tmp_path):
    path = str(tmp_path / "run" / "grid.ckpt")
    store = FileCheckpointStore(path)
    assert store.open(HASH, 7) == {}
    first = CalibrationResult(GridPoint(0.1, 0.2, 0.3), -0.01, 1.1, 1.4142135623730951, index=0)
    store.append(first)
    store.close()

    reopened = FileCheckpointStore(path)
    assert reopened.open(HASH, 7) == {0: first}
    reopened.close()


def test_store_rejects_foreign_header(tmp_path):
    path = str(tmp_path / "grid.ckpt")
    store = FileCheckpointStore(path)
    store.open(HASH, 7)
    store.close()
    with pytest.raises(CheckpointError):
        FileCheckpointStore(path).open("cd" * 32, 7)
    with pytest.raises(CheckpointError):
        FileCheckpointStore(path).open(HASH, 8)


def test_store_rejects_repeated_index(tmp_path):
    path = tmp_path / "grid.ckpt"
    record = format_record(CalibrationResult(GridPoint(0.1, 0.2, 0.3), 0.0, 0.0, 1.0, index=4))
    path.write_text(f"# nk-covid-checkpoint v1 grid_hash={HASH} base_seed=0\n" + record * 2)
    with pytest.raises(CheckpointError):
        FileCheckpointStore(str(path)).open(HASH, 0)


def test_append_needs_open_store(tmp_path):
    store = FileCheckpointStore(str(tmp_path / "grid.ckpt"))
    with pytest.raises(CheckpointError):
        store.append(CalibrationResult(GridPoint(0.1, 0.2, 0.3), 0.0, 0.0, 1.0, index=0))
