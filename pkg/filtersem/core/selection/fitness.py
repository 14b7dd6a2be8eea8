"""Chromosomes and the collective-AP fitness of filter combinations."""
from __future__ import annotations

import threading
from dataclasses import (
    dataclass,
    field,
)
from typing import (
    Dict,
    List,
    Optional,
    Sequence,
)

import numpy as np

from filtersem.core.evaluation.error import UndefinedAPError
from filtersem.core.evaluation.matching import (
    EvalReport,
    evaluate_arrays,
)
from filtersem.core.pool import WorkerPool
from filtersem.core.regression.pairs import PartBox
from filtersem.core.stimulus.detection import (
    Detections,
    StimulusDetection,
)
from filtersem.core.stimulus.nms import nms_indices


@dataclass
class Chromosome:
    """A subset of the filters of a layer, one bit per filter."""

    bits: np.ndarray = field(repr=False)
    fitness: Optional[float] = None

    @classmethod
    def from_filters(
        cls,
        filters: Sequence[int],
        n_filters: int,
        fitness: Optional[float] = None,
    ) -> Chromosome:
        """
        Create a chromosome selecting filters.

        Args:
            filters: the selected filter indices
            n_filters: the number of filters of the layer
            fitness: the fitness, if known

        Returns:
            the chromosome
        """
        bits = np.zeros(n_filters, dtype=bool)
        bits[list(filters)] = True
        return cls(
            bits=bits,
            fitness=fitness,
        )

    @property
    def filters(self) -> List[int]:
        """
        Get the selected filters.

        Returns:
            the filter indices, ascending
        """
        return [int(i) for i in np.flatnonzero(self.bits)]

    @property
    def bits_set(self) -> int:
        """
        Get the number of selected filters.

        Returns:
            the count
        """
        return int(np.count_nonzero(self.bits))

    @property
    def key(self) -> bytes:
        """
        Get a hashable key of the subset.

        Returns:
            the packed bits
        """
        return chromosome_key(self.bits)

    def as_string(self) -> str:
        """
        Get the bits as a string of 0 and 1.

        Returns:
            the string, filter 0 first
        """
        return "".join("1" if bit else "0" for bit in self.bits)


def chromosome_key(
    bits: np.ndarray,
) -> bytes:
    """
    Get a hashable key of a bit vector.

    Args:
        bits: the bits

    Returns:
        the packed bits
    """
    return np.packbits(np.asarray(bits, dtype=bool)).tobytes()


class CombinationEvaluator:
    """
    Score filter combinations of one layer for one part class.

    The detections of the selected filters are united in filter order, deduplicated with a per-image NMS
    and scored against the part instances. Scores are cached by subset ; an empty subset scores 0.
    """

    part_class: str
    n_filters: int
    iou_threshold: float
    nms_threshold: float
    _detections: Detections
    _by_filter: List[np.ndarray]
    _gt_images: np.ndarray
    _gt_boxes: np.ndarray
    _cache: Dict[bytes, float]
    _lock: threading.Lock
    _pool: Optional[WorkerPool]

    def __init__(
        self,
        detections: Detections,
        n_filters: int,
        gt_images: np.ndarray,
        gt_boxes: np.ndarray,
        part_class: str = "",
        iou_threshold: float = 0.4,
        nms_threshold: float = 0.3,
        pool: Optional[WorkerPool] = None,
    ):
        """
        Initialize the evaluator.

        Args:
            detections: the detections of every filter of the layer
            n_filters: the number of filters of the layer
            gt_images: the (m,) image index of every part instance
            gt_boxes: the (m, 4) part instance boxes
            part_class: the part class
            iou_threshold: the matching threshold
            nms_threshold: the NMS threshold
            pool: a pool scoring populations in parallel

        Raises:
            UndefinedAPError: if there is no part instance
        """
        if np.asarray(gt_images).shape[0] == 0:
            raise UndefinedAPError(f"No ground truth for part class {repr(part_class)} ; AP is undefined")
        self.part_class = part_class
        self.n_filters = n_filters
        self.iou_threshold = iou_threshold
        self.nms_threshold = nms_threshold
        self._detections = detections
        order = np.argsort(detections.filters, kind="stable")
        boundaries = np.searchsorted(detections.filters[order], np.arange(n_filters + 1), side="left")
        self._by_filter = [order[boundaries[j] : boundaries[j + 1]] for j in range(n_filters)]
        self._gt_images = np.asarray(gt_images)
        self._gt_boxes = np.asarray(gt_boxes, dtype=np.float64).reshape(-1, 4)
        self._cache = {}
        self._lock = threading.Lock()
        self._pool = pool

    @property
    def evaluations(self) -> int:
        """
        Get the number of distinct subsets scored so far.

        Returns:
            the count
        """
        return len(self._cache)

    def detection_count(
        self,
        filter_index: int,
    ) -> int:
        """
        Get the number of detections of a filter.

        Args:
            filter_index: the filter

        Returns:
            the count
        """
        return int(self._by_filter[filter_index].size)

    def selected(
        self,
        bits: np.ndarray,
    ) -> Detections:
        """
        Get the deduplicated detections of a subset.

        Args:
            bits: the subset

        Returns:
            the detections kept by the NMS, by descending score
        """
        filters = np.flatnonzero(bits)
        if filters.size == 0:
            return Detections.empty()
        union = self._detections.take(np.concatenate([self._by_filter[j] for j in filters]))
        kept = nms_indices(
            images=union.images,
            boxes=union.boxes,
            scores=union.scores,
            iou_threshold=self.nms_threshold,
        )
        return union.take(kept)

    def report(
        self,
        bits: np.ndarray,
    ) -> EvalReport:
        """
        Score a subset.

        Args:
            bits: the subset

        Returns:
            the report
        """
        detections = self.selected(bits)
        return evaluate_arrays(
            images=detections.images,
            boxes=detections.boxes,
            scores=detections.scores,
            gt_images=self._gt_images,
            gt_boxes=self._gt_boxes,
            iou_threshold=self.iou_threshold,
            part_class=self.part_class,
            filters=np.flatnonzero(bits).tolist(),
        )

    def fitness(
        self,
        bits: np.ndarray,
    ) -> float:
        """
        Get the collective AP of a subset.

        Args:
            bits: the subset

        Returns:
            the AP, 0 for an empty subset
        """
        bits = np.asarray(bits, dtype=bool)
        key = chromosome_key(bits)
        with self._lock:
            cached = self._cache.get(key)
        if cached is not None:
            return cached
        value = self.report(bits).ap if bits.any() else 0.0
        with self._lock:
            self._cache[key] = value
        return value

    def evaluate_population(
        self,
        population: np.ndarray,
    ) -> np.ndarray:
        """
        Score every chromosome of a population.

        Args:
            population: a (size, n_filters) boolean array

        Returns:
            the (size,) fitness values
        """
        keys = [chromosome_key(bits) for bits in population]
        pending: Dict[bytes, int] = {}
        with self._lock:
            for row, key in enumerate(keys):
                if key not in self._cache and key not in pending:
                    pending[key] = row
        rows = list(pending.values())
        if self._pool is not None:
            self._pool.map(lambda row: self.fitness(population[row]), rows)
        else:
            for row in rows:
                self.fitness(population[row])
        with self._lock:
            return np.array([self._cache[key] for key in keys], dtype=np.float64)


def fitness(
    z: Chromosome,
    per_filter_dets: Sequence[Sequence[StimulusDetection]],
    gts: Sequence[PartBox],
    iou_threshold: float = 0.4,
    nms_threshold: float = 0.3,
) -> float:
    """
    Get the collective AP of a filter combination from detection records.

    Args:
        z: the combination
        per_filter_dets: the detections of every filter of the layer, indexed by filter
        gts: the part instances
        iou_threshold: the matching threshold
        nms_threshold: the NMS threshold

    Returns:
        the AP, 0 for an empty combination
    """
    image_ids = sorted({det.image_id for dets in per_filter_dets for det in dets} | {gt.image_id for gt in gts})
    index = {image_id: i for i, image_id in enumerate(image_ids)}
    records = [(j, det) for j, dets in enumerate(per_filter_dets) for det in dets]
    detections = Detections(
        images=np.array([index[det.image_id] for _, det in records], dtype=np.intp),
        boxes=np.array([det.box.as_list() for _, det in records], dtype=np.float64).reshape(-1, 4),
        scores=np.array([det.score for _, det in records], dtype=np.float64),
        filters=np.array([j for j, _ in records], dtype=np.intp),
        regressed=np.array([det.regressed for _, det in records], dtype=bool),
    )
    evaluator = CombinationEvaluator(
        detections=detections,
        n_filters=len(per_filter_dets),
        gt_images=np.array([index[gt.image_id] for gt in gts], dtype=np.intp),
        gt_boxes=np.array([gt.box.as_list() for gt in gts], dtype=np.float64).reshape(-1, 4),
        part_class=gts[0].part_class if gts else "",
        iou_threshold=iou_threshold,
        nms_threshold=nms_threshold,
    )
    return evaluator.fitness(z.bits)
