import unittest
from typing import List

import numpy as np

from filtersem.core.pool import WorkerPool
from filtersem.core.selection.baselines import exhaustive_search
from filtersem.core.selection.error import GAConfigurationError
from filtersem.core.selection.fitness import CombinationEvaluator
from filtersem.core.selection.ga import (
    GAConfig,
    initial_population,
    run_ga,
    stochastic_universal_sampling,
)
from filtersem.core.selection.listener import (
    GAEndEvent,
    GAEvent,
    GAGenerationEvent,
    GAListener,
    GAStartEvent,
)
from filtersem.core.stimulus.detection import Detections
from filtersem.tests.detections import (
    N_FILTERS,
    synthetic_detections,
    synthetic_ground_truth,
)


class RecordingListener(GAListener):
    events: List[GAEvent]

    def __init__(self) -> None:
        self.events = []

    def on_event(
        self,
        event: GAEvent,
    ) -> None:
        self.events.append(event)


def _evaluator() -> CombinationEvaluator:
    gt_images, gt_boxes = synthetic_ground_truth()
    return CombinationEvaluator(
        detections=synthetic_detections(),
        n_filters=N_FILTERS,
        gt_images=gt_images,
        gt_boxes=gt_boxes,
        part_class="wheel",
    )


def _random_evaluator(
    seed: int,
    n_filters: int = 10,
) -> CombinationEvaluator:
    # filters find a random share of the parts, with some clutter on top
    rng = np.random.default_rng(seed)
    n_images = 6
    gt_images = np.repeat(np.arange(n_images), 2)
    gt_boxes = np.hstack([rng.uniform(0.0, 80.0, (gt_images.shape[0], 2)), np.full((gt_images.shape[0], 2), 10.0)])
    images: List[int] = []
    boxes: List[np.ndarray] = []
    scores: List[float] = []
    filters: List[int] = []
    for j in range(n_filters):
        hit_rate = rng.uniform(0.0, 1.0)
        for g in range(gt_images.shape[0]):
            if rng.random() < hit_rate:
                images.append(int(gt_images[g]))
                boxes.append(gt_boxes[g] + np.array([rng.normal(0.0, 1.5), rng.normal(0.0, 1.5), 0.0, 0.0]))
                scores.append(float(rng.uniform(0.3, 1.0)))
                filters.append(j)
        for _ in range(int(rng.integers(0, 4))):
            images.append(int(rng.integers(n_images)))
            boxes.append(np.array([rng.uniform(100.0, 150.0), rng.uniform(100.0, 150.0), 10.0, 10.0]))
            scores.append(float(rng.uniform(0.0, 1.0)))
            filters.append(j)
    return CombinationEvaluator(
        detections=Detections(
            images=np.array(images, dtype=np.intp),
            boxes=np.array(boxes, dtype=np.float64).reshape(-1, 4),
            scores=np.array(scores, dtype=np.float64),
            filters=np.array(filters, dtype=np.intp),
            regressed=np.zeros(len(scores), dtype=bool),
        ),
        n_filters=n_filters,
        gt_images=gt_images,
        gt_boxes=gt_boxes,
        part_class="wheel",
    )


def _config(
    **kwargs: object,
) -> GAConfig:
    values = dict(
        population=20,
        generations=15,
        init_p=0.3,
        rng_seed=5,
    )
    values.update(kwargs)
    return GAConfig(**values)  # type: ignore[arg-type]


class TestGAConfig(unittest.TestCase):
    def test_defaults(self) -> None:
        config = GAConfig()
        self.assertEqual(200, config.population)
        self.assertEqual(100, config.generations)
        self.assertEqual(0.7, config.crossover_p)
        self.assertEqual(0.3, config.mutation_p)
        self.assertEqual(0.02, config.init_p)
        self.assertEqual(1, config.elitism)
        self.assertEqual("single_point", config.crossover)

    def test_odd_population(self) -> None:
        with self.assertRaises(GAConfigurationError):
            GAConfig(population=21)

    def test_tiny_population(self) -> None:
        with self.assertRaises(GAConfigurationError):
            GAConfig(population=0)

    def test_elitism_out_of_range(self) -> None:
        with self.assertRaises(GAConfigurationError):
            GAConfig(
                population=10,
                elitism=10,
            )

    def test_probability_out_of_range(self) -> None:
        with self.assertRaises(GAConfigurationError):
            GAConfig(mutation_p=1.5)

    def test_unknown_crossover(self) -> None:
        with self.assertRaises(GAConfigurationError) as context:
            GAConfig(crossover="three_point")
        self.assertIn("three_point", str(context.exception))


class TestInitialPopulation(unittest.TestCase):
    def test_expected_bits_set(self) -> None:
        means = []
        for seed in range(10):
            population = initial_population(
                config=GAConfig(),
                n_filters=256,
                rng=np.random.default_rng(seed),
            )
            self.assertEqual((200, 256), population.shape)
            self.assertEqual(np.bool_, population.dtype)
            means.append(float(population.sum(axis=1).mean()))
            self.assertAlmostEqual(5.12, means[-1], delta=1.0)
        self.assertAlmostEqual(5.12, float(np.mean(means)), delta=0.5)


class TestStochasticUniversalSampling(unittest.TestCase):
    def test_single_positive(self) -> None:
        selected = stochastic_universal_sampling(
            fitness=np.array([0.0, 0.0, 1.0, 0.0]),
            n=4,
            rng=np.random.default_rng(1),
        )
        self.assertEqual([2, 2, 2, 2], selected.tolist())

    def test_zero_fitness_is_uniform(self) -> None:
        selected = stochastic_universal_sampling(
            fitness=np.zeros(4),
            n=4,
            rng=np.random.default_rng(2),
        )
        self.assertEqual([0, 1, 2, 3], selected.tolist())

    def test_proportional(self) -> None:
        for seed in range(10):
            selected = stochastic_universal_sampling(
                fitness=np.array([1.0, 3.0]),
                n=4,
                rng=np.random.default_rng(seed),
            )
            self.assertEqual([1, 3], np.bincount(selected, minlength=2).tolist())

    def test_frequencies_converge_to_fitness_shares(self) -> None:
        fitness = np.array([1.0, 2.0, 3.0, 4.0, 10.0])
        shares = fitness / fitness.sum()
        rng = np.random.default_rng(6)
        draws = 2000
        n = 7
        counts = np.zeros(fitness.shape[0])
        for _ in range(draws):
            selected = np.bincount(
                stochastic_universal_sampling(
                    fitness=fitness,
                    n=n,
                    rng=rng,
                ),
                minlength=fitness.shape[0],
            )
            # evenly spaced pointers give every index the floor or the ceiling of its expected count
            np.testing.assert_array_less(np.floor(n * shares) - 1, selected)
            np.testing.assert_array_less(selected, np.ceil(n * shares) + 1)
            counts += selected
        np.testing.assert_allclose(shares, counts / (draws * n), atol=0.02)


class TestRunGA(unittest.TestCase):
    def test_random_instances_reach_exhaustive_optimum(self) -> None:
        reached = 0
        for seed in range(20):
            optimum = exhaustive_search(_random_evaluator(seed))
            result = run_ga(
                cfg=_config(
                    population=30,
                    generations=30,
                    rng_seed=seed,
                ),
                evaluator=_random_evaluator(seed),
            )
            self.assertEqual(sorted(result.history), result.history)
            if (result.best.fitness or 0.0) >= 0.95 * (optimum.fitness or 0.0):
                reached += 1
        self.assertGreaterEqual(reached, 19)

    def test_reaches_exhaustive_optimum(self) -> None:
        optimum = exhaustive_search(_evaluator())
        for crossover in ("single_point", "two_point", "uniform"):
            result = run_ga(
                cfg=_config(crossover=crossover),
                evaluator=_evaluator(),
            )
            self.assertIsNotNone(result.best.fitness)
            self.assertGreaterEqual(result.best.fitness, 0.95 * (optimum.fitness or 0.0))

    def test_history_is_monotonic(self) -> None:
        config = _config(init_p=0.05)
        result = run_ga(
            cfg=config,
            evaluator=_evaluator(),
        )
        self.assertEqual(config.generations + 1, len(result.history))
        self.assertEqual(sorted(result.history), result.history)
        self.assertEqual(result.history[-1], result.best.fitness)
        self.assertEqual(list(range(config.generations + 1)), [record.generation for record in result.log])

    def test_best_fitness_is_its_ap(self) -> None:
        evaluator = _evaluator()
        result = run_ga(
            cfg=_config(),
            evaluator=evaluator,
        )
        self.assertAlmostEqual(result.best.fitness or 0.0, evaluator.fitness(result.best.bits))
        self.assertEqual(evaluator.evaluations, result.evaluations)

    def test_deterministic(self) -> None:
        first = run_ga(
            cfg=_config(),
            evaluator=_evaluator(),
        )
        second = run_ga(
            cfg=_config(),
            evaluator=_evaluator(),
        )
        self.assertEqual(first.history, second.history)
        self.assertEqual(first.best.as_string(), second.best.as_string())

    def test_pool_does_not_change_result(self) -> None:
        serial = run_ga(
            cfg=_config(),
            evaluator=_evaluator(),
        )
        gt_images, gt_boxes = synthetic_ground_truth()
        with WorkerPool(workers=4) as pool:
            parallel = run_ga(
                cfg=_config(),
                evaluator=CombinationEvaluator(
                    detections=synthetic_detections(),
                    n_filters=N_FILTERS,
                    gt_images=gt_images,
                    gt_boxes=gt_boxes,
                    part_class="wheel",
                    pool=pool,
                ),
            )
        self.assertEqual(serial.history, parallel.history)
        self.assertEqual(serial.best.as_string(), parallel.best.as_string())

    def test_zero_generations(self) -> None:
        result = run_ga(
            cfg=_config(generations=0),
            evaluator=_evaluator(),
        )
        self.assertEqual(1, len(result.history))

    def test_events(self) -> None:
        listener = RecordingListener()
        run_ga(
            cfg=_config(generations=3),
            evaluator=_evaluator(),
            listener=listener,
        )
        self.assertIsInstance(listener.events[0], GAStartEvent)
        self.assertIsInstance(listener.events[-1], GAEndEvent)
        generations = [event for event in listener.events if isinstance(event, GAGenerationEvent)]
        self.assertEqual([0, 1, 2, 3], [event.generation for event in generations])
        self.assertTrue(all(event.part_class == "wheel" for event in generations))
