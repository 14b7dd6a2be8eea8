"""Regressor bank files."""
import json
from pathlib import Path
from typing import (
    Any,
    Dict,
    List,
    Sequence,
)

import numpy as np

from filtersem.core.exceptions import DataError
from filtersem.core.regression.error import RegressorDimensionError
from filtersem.core.regression.pairs import (
    FEATURE_SIZE,
    TARGET_NAMES,
)
from filtersem.core.regression.regressor import PartRegressor


def _to_dict(
    regressor: PartRegressor,
) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "part_class": regressor.part_class,
        "layer": regressor.layer,
        "filter": regressor.filter,
    }
    for name, row in zip(TARGET_NAMES, regressor.weights):
        data[f"w_{name}"] = [float(value) for value in row]
    data["K"] = regressor.count
    return data


def _from_dict(
    data: Dict[str, Any],
) -> PartRegressor:
    try:
        rows = [np.asarray(data[f"w_{name}"], dtype=np.float64) for name in TARGET_NAMES]
        part_class = str(data["part_class"])
        layer = str(data["layer"])
        filter_index = int(data["filter"])
        count = int(data["K"])
    except (KeyError, TypeError, ValueError) as e:
        raise DataError("Malformed regressor entry") from e
    for name, row in zip(TARGET_NAMES, rows):
        if row.shape != (FEATURE_SIZE,):
            raise RegressorDimensionError(
                f"Regressor {layer}/{filter_index}/{part_class}: w_{name} has shape {row.shape} ; "
                + f"expecting ({FEATURE_SIZE},)"
            )
    return PartRegressor(
        part_class=part_class,
        layer=layer,
        filter=filter_index,
        weights=np.stack(rows),
        count=count,
    )


def save_bank(
    path: Path,
    regressors: Sequence[PartRegressor],
) -> Path:
    """
    Write regressors as a JSON array.

    Args:
        path: the destination file
        regressors: the regressors

    Returns:
        the path of the written file
    """
    path.parent.mkdir(
        parents=True,
        exist_ok=True,
    )
    path.write_text(
        json.dumps(
            [_to_dict(regressor) for regressor in regressors],
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )
    return path


def load_bank(
    path: Path,
) -> List[PartRegressor]:
    """
    Read regressors written by `save_bank`.

    Args:
        path: the file

    Returns:
        the regressors

    Raises:
        DataError: if the file cannot be read or is malformed
    """
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        raise DataError(f"Unable to read regressor bank {path}") from e
    if not isinstance(data, list):
        raise DataError(f"Regressor bank {path} is not a JSON array")
    return [_from_dict(entry) for entry in data]
