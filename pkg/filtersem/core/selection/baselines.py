"""Baselines of the genetic search: best individual filters and exhaustive enumeration."""
from typing import Sequence

import numpy as np

from filtersem.core.selection.error import GAConfigurationError
from filtersem.core.selection.fitness import (
    Chromosome,
    CombinationEvaluator,
)


EXHAUSTIVE_MAX_FILTERS = 16


def top_filters(
    per_filter_aps: Sequence[float],
    n: int,
) -> Chromosome:
    """
    Select the filters with the highest individual AP.

    Args:
        per_filter_aps: the AP of every filter of the layer
        n: the number of filters to select

    Returns:
        the chromosome of the n best filters, ties broken by lower index

    Raises:
        GAConfigurationError: if n is not in [0, N]
    """
    aps = np.asarray(per_filter_aps, dtype=np.float64)
    if not 0 <= n <= aps.shape[0]:
        raise GAConfigurationError(f"Cannot select {n} filters out of {aps.shape[0]}")
    ranking = np.lexsort((np.arange(aps.shape[0]), -aps))
    return Chromosome.from_filters(
        filters=ranking[:n].tolist(),
        n_filters=aps.shape[0],
    )


def exhaustive_search(
    evaluator: CombinationEvaluator,
) -> Chromosome:
    """
    Score every non-empty subset of filters and keep the best.

    Subsets are enumerated by increasing bit mask ; the first best one wins.

    Args:
        evaluator: the fitness of combinations of the layer

    Returns:
        the optimal chromosome, its fitness set

    Raises:
        GAConfigurationError: if the layer has no filter or more than 16 filters
    """
    n = evaluator.n_filters
    if not 1 <= n <= EXHAUSTIVE_MAX_FILTERS:
        raise GAConfigurationError(f"Exhaustive search needs 1 to {EXHAUSTIVE_MAX_FILTERS} filters ; got {n}")
    masks = np.arange(1, 2**n, dtype=np.int64)
    population = ((masks[:, np.newaxis] >> np.arange(n)[np.newaxis]) & 1).astype(bool)
    fitness = evaluator.evaluate_population(population)
    best = int(np.argmax(fitness))
    return Chromosome(
        bits=population[best].copy(),
        fitness=float(fitness[best]),
    )
