import json
import os
import numpy as np
from typing import Any
from ...domain.repositories import DataLoadError, IReportStore


def _to_builtin(value: Any) -> Any:
    """Convert numpy scalars and arrays for JSON."""
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    return str(value)


class JSONReportStore(IReportStore):
    """JSON implementation of the report store interface.

    Each record is written as <output_dir>/<name>.json.
    """

    def __init__(self, output_dir: str):
        """Initialize the report store.

        Args:
            output_dir: Directory that receives the report files.
        """
        self.output_dir = output_dir

    def save(self, name: str, record: dict[str, Any]) -> str:
        """Persist a report record under a name and return its location.

        Raises:
            DataLoadError: If the file cannot be written.
        """
        path = os.path.join(self.output_dir, f"{name}.json")
        try:
            os.makedirs(self.output_dir, exist_ok=True)
            with open(path, "w", encoding="utf-8") as handle:
                json.dump(record, handle, indent=2, sort_keys=True, default=_to_builtin)
                handle.write("\n")
        except OSError as e:
            raise DataLoadError(f"Error writing report {path}: {str(e)}") from e
        return path

    def load_all(self) -> dict[str, dict[str, Any]]:
        """Load every persisted report record keyed by name."""
        if not os.path.isdir(self.output_dir):
            return {}
        records = {}
        for filename in sorted(os.listdir(self.output_dir)):
            if not filename.endswith(".json"):
                continue
            path = os.path.join(self.output_dir, filename)
            try:
                with open(path, "r", encoding="utf-8") as handle:
                    records[filename[:-len(".json")]] = json.load(handle)
            except (OSError, json.JSONDecodeError) as e:
                raise DataLoadError(f"Error reading report {path}: {str(e)}") from e
        return records
