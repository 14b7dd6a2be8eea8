"""Genetic search of the filter combination with the highest collective AP."""
from dataclasses import (
    dataclass,
    field,
)
from typing import (
    List,
    Optional,
)

import numpy as np

from filtersem.core.configuration.analysis import CROSSOVER_TYPES
from filtersem.core.selection.error import GAConfigurationError
from filtersem.core.selection.fitness import (
    Chromosome,
    CombinationEvaluator,
)
from filtersem.core.selection.listener import (
    GAEndEvent,
    GAGenerationEvent,
    GAListener,
    GAStartEvent,
    NoOpGAListener,
)


@dataclass(frozen=True)
class GAConfig:
    """Search hyperparameters."""

    population: int = 200
    generations: int = 100
    crossover_p: float = 0.7
    mutation_p: float = 0.3
    init_p: float = 0.02
    elitism: int = 1
    crossover: str = "single_point"
    rng_seed: int = 0

    def __post_init__(self) -> None:
        """
        Check the hyperparameters.

        Raises:
            GAConfigurationError: if a value is out of its domain
        """
        errors = []
        if self.population < 2 or self.population % 2:
            errors.append(f"population must be even and at least 2 (got {self.population})")
        if self.generations < 0:
            errors.append(f"generations must be non-negative (got {self.generations})")
        for name in ("crossover_p", "mutation_p", "init_p"):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                errors.append(f"{name} must lie in [0, 1] (got {value})")
        if not 0 <= self.elitism < self.population:
            errors.append(f"elitism must lie in [0, population) (got {self.elitism})")
        if self.crossover not in CROSSOVER_TYPES:
            errors.append(f"crossover must be one of {', '.join(CROSSOVER_TYPES)} (got {repr(self.crossover)})")
        if errors:
            raise GAConfigurationError("Invalid GA configuration: " + " ; ".join(errors))


@dataclass(frozen=True)
class GenerationRecord:
    """One line of the search log ; `best_fitness` is the best found so far."""

    generation: int
    best_fitness: float
    mean_fitness: float
    bits_set: int


@dataclass
class GAResult:
    """The outcome of a search: the best chromosome and the non-decreasing best fitness of each generation."""

    best: Chromosome
    history: List[float]
    log: List[GenerationRecord] = field(default_factory=list)
    evaluations: int = 0


def stochastic_universal_sampling(
    fitness: np.ndarray,
    n: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """
    Select indices in proportion to fitness with evenly spaced pointers.

    A population whose fitness sums to 0 is sampled uniformly.

    Args:
        fitness: the (size,) non-negative fitness values
        n: the number of selections
        rng: the random generator

    Returns:
        the (n,) selected indices, in pointer order
    """
    fitness = np.clip(np.asarray(fitness, dtype=np.float64), 0.0, None)
    size = fitness.shape[0]
    total = fitness.sum()
    weights = fitness / total if total > 0 else np.full(size, 1.0 / size)
    step = 1.0 / n
    pointers = rng.uniform(0.0, step) + step * np.arange(n)
    cumulative = np.cumsum(weights)
    return np.minimum(np.searchsorted(cumulative, pointers, side="right"), size - 1)


def _crossover(
    first: np.ndarray,
    second: np.ndarray,
    kind: str,
    rng: np.random.Generator,
) -> None:
    n = first.shape[0]
    if kind == "uniform":
        swap = rng.random(n) < 0.5
    else:
        if n < 2:
            return
        count = 1 if kind == "single_point" or n < 3 else 2
        points = np.sort(rng.choice(np.arange(1, n), size=count, replace=False))
        swap = np.zeros(n, dtype=bool)
        swap[points[0] :] = True
        if points.size == 2:
            swap[points[1] :] = False
    first[swap], second[swap] = second[swap].copy(), first[swap].copy()


def initial_population(
    config: GAConfig,
    n_filters: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """
    Draw the first population: every bit is set independently with probability `init_p`.

    Args:
        config: the hyperparameters
        n_filters: the chromosome length
        rng: the random generator

    Returns:
        the (population, n_filters) boolean population
    """
    return rng.random((config.population, n_filters)) < config.init_p


def _breed(
    config: GAConfig,
    population: np.ndarray,
    fitness: np.ndarray,
    ranking: np.ndarray,
    rng: np.random.Generator,
) -> np.ndarray:
    size, n_filters = population.shape
    elites = population[ranking[: config.elitism]].copy()
    n_children = size - config.elitism
    n_parents = n_children + n_children % 2
    parents = stochastic_universal_sampling(
        fitness=fitness,
        n=n_parents,
        rng=rng,
    )
    parents = rng.permutation(parents)
    children = population[parents].copy()
    for i in range(0, n_parents, 2):
        if rng.random() < config.crossover_p:
            _crossover(
                first=children[i],
                second=children[i + 1],
                kind=config.crossover,
                rng=rng,
            )
    children = children[:n_children]
    mutated = rng.random(n_children) < config.mutation_p
    flips = rng.random((n_children, n_filters)) < 1.0 / n_filters
    children[mutated] ^= flips[mutated]
    return np.vstack([elites, children])


def run_ga(
    cfg: GAConfig,
    evaluator: CombinationEvaluator,
    listener: Optional[GAListener] = None,
) -> GAResult:
    """
    Search the combination of filters with the highest collective AP.

    Each generation keeps its `elitism` best chromosomes unchanged and fills the rest with children: parents drawn by
    stochastic universal sampling and shuffled are crossed pairwise with probability `crossover_p`, then each child is
    mutated with probability `mutation_p`, every bit flipping with probability 1/N.
    Randomness is only consumed between scorings, so results do not depend on the evaluator's pool.

    Args:
        cfg: the hyperparameters
        evaluator: the fitness of combinations of the layer
        listener: a listener receiving progress events

    Returns:
        the best chromosome, the history of the best fitness (initial population first) and the log

    Raises:
        GAConfigurationError: if the layer has no filter
    """
    listener = listener or NoOpGAListener()
    n_filters = evaluator.n_filters
    if n_filters < 1:
        raise GAConfigurationError("Cannot search combinations of a layer without filters")
    listener.on_event(
        GAStartEvent(
            part_class=evaluator.part_class,
            n_filters=n_filters,
            generations=cfg.generations,
        )
    )
    rng = np.random.default_rng(cfg.rng_seed)
    population = initial_population(
        config=cfg,
        n_filters=n_filters,
        rng=rng,
    )
    best: Optional[Chromosome] = None
    history: List[float] = []
    log: List[GenerationRecord] = []
    for generation in range(cfg.generations + 1):
        fitness = evaluator.evaluate_population(population)
        ranking = np.lexsort((np.arange(fitness.shape[0]), -fitness))
        leader = ranking[0]
        if best is None or best.fitness is None or fitness[leader] > best.fitness:
            best = Chromosome(
                bits=population[leader].copy(),
                fitness=float(fitness[leader]),
            )
        best_fitness = float(best.fitness or 0.0)
        history.append(best_fitness)
        record = GenerationRecord(
            generation=generation,
            best_fitness=best_fitness,
            mean_fitness=float(fitness.mean()),
            bits_set=best.bits_set,
        )
        log.append(record)
        listener.on_event(
            GAGenerationEvent(
                part_class=evaluator.part_class,
                generation=generation,
                best_fitness=record.best_fitness,
                mean_fitness=record.mean_fitness,
                bits_set=record.bits_set,
            )
        )
        if generation == cfg.generations:
            break
        population = _breed(
            config=cfg,
            population=population,
            fitness=fitness,
            ranking=ranking,
            rng=rng,
        )
    assert best is not None
    listener.on_event(
        GAEndEvent(
            part_class=evaluator.part_class,
            best_fitness=float(best.fitness or 0.0),
            bits_set=best.bits_set,
            evaluations=evaluator.evaluations,
        )
    )
    return GAResult(
        best=best,
        history=history,
        log=log,
        evaluations=evaluator.evaluations,
    )
