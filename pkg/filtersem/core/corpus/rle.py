"""Run-length encoding of binary masks."""
from typing import (
    List,
    Sequence,
    Tuple,
)

import numpy as np

from filtersem.core.corpus.error import CorpusError


def encode_mask(
    mask: np.ndarray,
) -> List[int]:
    """
    Encode a mask as alternating run lengths in row-major order, starting with a run of zeros.

    Args:
        mask: a 2-D boolean mask

    Returns:
        the run lengths ; the first one is 0 when the mask starts with a set pixel
    """
    flat = np.asarray(mask, dtype=bool).ravel()
    if flat.size == 0:
        return []
    changes = np.flatnonzero(flat[1:] != flat[:-1]) + 1
    bounds = np.concatenate([[0], changes, [flat.size]])
    runs = np.diff(bounds).tolist()
    if flat[0]:
        runs.insert(0, 0)
    return [int(run) for run in runs]


def decode_mask(
    runs: Sequence[int],
    shape: Tuple[int, int],
) -> np.ndarray:
    """
    Decode run lengths made by `encode_mask`.

    Args:
        runs: the run lengths
        shape: the (height, width) of the mask

    Returns:
        the boolean mask

    Raises:
        CorpusError: if the runs do not cover the mask exactly
    """
    counts = np.asarray(runs, dtype=np.int64)
    if np.any(counts < 0):
        raise CorpusError("Negative run length in mask")
    total = int(shape[0]) * int(shape[1])
    if int(counts.sum()) != total:
        raise CorpusError(f"Mask runs cover {int(counts.sum())} pixels ; expecting {total}")
    values = np.arange(counts.size) % 2 == 1
    return np.repeat(values, counts).reshape(shape)
