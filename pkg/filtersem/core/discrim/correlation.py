"""Correlations between part detectability, size and discriminativeness."""
from dataclasses import dataclass
from typing import (
    List,
    Mapping,
    Sequence,
    Union,
)

import numpy as np
from scipy import stats

from filtersem.core.discrim.error import (
    DiscrimError,
    UndefinedCorrelationError,
)
from filtersem.core.discrim.scores import DiscrimScore
from filtersem.core.evaluation.matching import EvalReport


SMALL_SAMPLE = 3


@dataclass(frozen=True)
class CorrelationReport:
    """A Pearson correlation between two per-part series ; `small_sample` flags fewer than 3 parts."""

    x: str
    y: str
    value: float
    n: int
    small_sample: bool


def ppmcc(
    xs: Sequence[float],
    ys: Sequence[float],
) -> float:
    """
    Get the Pearson product-moment correlation coefficient of two series.

    Args:
        xs: a series
        ys: a series of the same length

    Returns:
        the coefficient, in [-1, 1]

    Raises:
        UndefinedCorrelationError: if the series differ in length, hold fewer than 2 values or have no variance
    """
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1 or x.shape[0] < 2:
        raise UndefinedCorrelationError(f"Cannot correlate series of shapes {x.shape} and {y.shape}")
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise UndefinedCorrelationError("Cannot correlate a series without variance")
    value = stats.pearsonr(x, y)[0]
    return float(np.clip(value, -1.0, 1.0))


def correlate_series(
    aps: Mapping[str, float],
    sizes: Mapping[str, float],
    deltas: Mapping[str, float],
) -> List[CorrelationReport]:
    """
    Correlate per-part AP, normalized size and delta two by two.

    Args:
        aps: the AP of each part class
        sizes: the normalized size of each part class
        deltas: the delta of each part class

    Returns:
        the AP/size, delta/size and delta/AP correlations

    Raises:
        DiscrimError: if the series do not describe the same part classes
    """
    keys = sorted(aps)
    if sorted(sizes) != keys or sorted(deltas) != keys:
        raise DiscrimError("AP, size and delta series do not cover the same part classes")
    series = {
        "ap": [aps[key] for key in keys],
        "size": [sizes[key] for key in keys],
        "delta": [deltas[key] for key in keys],
    }
    return [
        CorrelationReport(
            x=x,
            y=y,
            value=ppmcc(series[x], series[y]),
            n=len(keys),
            small_sample=len(keys) < SMALL_SAMPLE,
        )
        for x, y in (("ap", "size"), ("delta", "size"), ("delta", "ap"))
    ]


def correlate_emergence(
    eval_reports: Mapping[str, Union[EvalReport, float]],
    part_sizes: Mapping[str, float],
    part_discrims: Mapping[str, Union[DiscrimScore, float]],
) -> List[CorrelationReport]:
    """
    Correlate the detectability, the normalized size and the discriminativeness of parts.

    Args:
        eval_reports: the report, or the AP, of each part class
        part_sizes: the normalized size of each part class
        part_discrims: the score, or the delta, of each part class

    Returns:
        the AP/size, delta/size and delta/AP correlations

    Raises:
        DiscrimError: if the inputs do not describe the same part classes
    """
    return correlate_series(
        aps={key: value.ap if isinstance(value, EvalReport) else float(value) for key, value in eval_reports.items()},
        sizes=dict(part_sizes),
        deltas={
            key: value.delta if isinstance(value, DiscrimScore) else float(value)
            for key, value in part_discrims.items()
        },
    )
