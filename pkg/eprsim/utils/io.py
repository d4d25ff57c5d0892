"""Result-table and summary writers."""
import json
from pathlib import Path

import numpy as np
import pandas as pd

from ..exceptions import ConfigurationError

FLOAT_FORMAT = "%.9f"
RESULT_COLUMNS = ["theta", "model", "estimator", "value", "std_err", "n"]


def write_table(table: pd.DataFrame, path) -> Path:
    """Write a result table as CSV with 9 fractional digits on every float column."""
    path = Path(path)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def read_result_table(path) -> pd.DataFrame:
    """Read a correlation result CSV; missing columns and non-numeric values are reported by the caller."""
    try:
        return pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise ConfigurationError(f"Could not parse {path}: {e}") from e


def to_builtin(value):
    if isinstance(value, dict):
        return {str(k): to_builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_builtin(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_builtin(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        value = float(value)
    if isinstance(value, float) and not np.isfinite(value):
        return str(value)
    if isinstance(value, Path):
        return str(value)
    return value


def write_summary(summary: dict, path) -> Path:
    """Write the JSON summary of an experiment run."""
    path = Path(path)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(to_builtin(summary), f, indent=2, sort_keys=True)
        f.write("\n")
    return path
