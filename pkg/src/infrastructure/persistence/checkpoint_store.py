import os
import re
from typing import IO, Optional
from ... import logger
from ...domain.entities import CalibrationResult, GridPoint
from ...domain.repositories import CheckpointError, ICheckpointStore

HEADER_FORMAT = "# nk-covid-checkpoint v1 grid_hash={grid_hash} base_seed={base_seed}\n"
HEADER_PATTERN = re.compile(
    r"^# nk-covid-checkpoint v1 grid_hash=(?P<grid_hash>[0-9a-f]{64}) base_seed=(?P<base_seed>\d+)$"
)

# index, six floats, tag; every record has the same width
FLOAT_FIELD = "{:>25.17e}"
TAG_WIDTH = 32
RECORD_WIDTH = 10 + 6 * 26 + 1 + TAG_WIDTH


def format_record(result: CalibrationResult) -> str:
    """Fixed-width line of one result; floats round-trip exactly."""
    floats = (
        result.point.eta1,
        result.point.rho_eps,
        result.point.rho_eta,
        result.mean_y,
        result.mean_pi,
        result.distance,
    )
    tag = (result.tag or "-")[:TAG_WIDTH]
    body = "{:>10d}".format(result.index)
    body += "".join(" " + FLOAT_FIELD.format(v) for v in floats)
    return f"{body} {tag:<{TAG_WIDTH}}\n"


def parse_record(line: str, line_number: int) -> CalibrationResult:
    """Inverse of format_record.

    Raises:
        CheckpointError: If the line is not a well-formed record.
    """
    text = line.rstrip("\n")
    fields = text.split()
    if len(text) != RECORD_WIDTH or len(fields) != 8:
        raise CheckpointError(f"checkpoint line {line_number} is truncated or malformed")
    try:
        index = int(fields[0])
        eta1, rho_eps, rho_eta, mean_y, mean_pi, distance = (float(v) for v in fields[1:7])
    except ValueError as e:
        raise CheckpointError(f"checkpoint line {line_number}: {str(e)}") from e
    return CalibrationResult(
        point=GridPoint(eta1, rho_eps, rho_eta),
        mean_y=mean_y,
        mean_pi=mean_pi,
        distance=distance,
        index=index,
        tag=None if fields[7] == "-" else fields[7],
    )


class FileCheckpointStore(ICheckpointStore):
    """Append-only text implementation of the checkpoint store interface.

    The first line fingerprints the run; every following line is one
    fixed-width completed grid point.
    """

    def __init__(self, file_path: str):
        """Initialize the checkpoint store.

        Args:
            file_path: Location of the checkpoint file.
        """
        self.file_path = file_path
        self._handle: Optional[IO[str]] = None

    def open(
        self,
        grid_hash: str,
        base_seed: int
    ) -> dict[int, CalibrationResult]:
        """Open the store and return the results already recorded.

        Args:
            grid_hash: Fingerprint of the grid and its evaluation context.
            base_seed: Base seed of the run.

        Returns:
            Completed results keyed by grid index.

        Raises:
            CheckpointError: If the store belongs to another run or is corrupt.
        """
        completed: dict[int, CalibrationResult] = {}
        header = HEADER_FORMAT.format(grid_hash=grid_hash, base_seed=base_seed)

        if os.path.exists(self.file_path) and os.path.getsize(self.file_path) > 0:
            with open(self.file_path, "r", encoding="utf-8") as handle:
                first = handle.readline()
                match = HEADER_PATTERN.match(first.rstrip("\n"))
                if match is None:
                    raise CheckpointError(f"{self.file_path} has no checkpoint header")
                if match["grid_hash"] != grid_hash or int(match["base_seed"]) != base_seed:
                    raise CheckpointError(
                        f"{self.file_path} belongs to another run "
                        f"(grid_hash={match['grid_hash'][:12]}..., base_seed={match['base_seed']}); "
                        "remove it or use a different checkpoint path"
                    )
                for line_number, line in enumerate(handle, start=2):
                    result = parse_record(line, line_number)
                    if result.index in completed:
                        raise CheckpointError(
                            f"checkpoint line {line_number} repeats grid index {result.index}"
                        )
                    completed[result.index] = result
            self._handle = open(self.file_path, "a", encoding="utf-8")
        else:
            directory = os.path.dirname(self.file_path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            self._handle = open(self.file_path, "w", encoding="utf-8")
            self._handle.write(header)
            self._handle.flush()

        logger.info(f"Checkpoint {self.file_path} opened with {len(completed)} completed points")
        return completed

    def append(self, result: CalibrationResult) -> None:
        """Persist one completed result.

        Raises:
            CheckpointError: If the store is not open.
        """
        if self._handle is None:
            raise CheckpointError("checkpoint store is not open")
        self._handle.write(format_record(result))
        self._handle.flush()

    def close(self) -> None:
        """Flush and release the store."""
        if self._handle is not None:
            self._handle.close()
            self._handle = None
