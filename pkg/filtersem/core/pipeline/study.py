"""Per-layer and per-part analysis: activations, detections, single filters and filter combinations."""
from dataclasses import (
    dataclass,
    replace,
)
from typing import (
    Dict,
    List,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from filtersem.core.corpus.crop import ObjectCrop
from filtersem.core.evaluation.matching import EvalReport
from filtersem.core.evaluation.report import (
    Emergence,
    emergence,
)
from filtersem.core.geometry.receptive_field import receptive_field_arrays
from filtersem.core.nn.engine import forward
from filtersem.core.nn.spec import NetworkSpec
from filtersem.core.pool import WorkerPool
from filtersem.core.regression.error import InsufficientPairsError
from filtersem.core.regression.pairs import build_pairs
from filtersem.core.regression.regressor import (
    PartRegressor,
    fit,
)
from filtersem.core.selection.baselines import top_filters
from filtersem.core.selection.fitness import (
    Chromosome,
    CombinationEvaluator,
)
from filtersem.core.selection.ga import (
    GAConfig,
    GAResult,
    run_ga,
)
from filtersem.core.selection.listener import GAListener
from filtersem.core.stimulus.activation import (
    ActivationArrays,
    find_maxima,
)
from filtersem.core.stimulus.detection import Detections


@dataclass
class LayerActivations:
    """
    The activations of a layer over every crop.

    `images` gives the crop of each local maximum ; `peaks` and `peak_positions` hold, for each crop and filter,
    the largest value of the feature map and its first (column, row) in row-major order.
    """

    layer: str
    n_filters: int
    maxima: ActivationArrays
    images: np.ndarray
    peaks: np.ndarray
    peak_positions: np.ndarray

    def of_crops(
        self,
        crops: Sequence[int],
    ) -> Tuple[ActivationArrays, np.ndarray]:
        """
        Get the local maxima of some crops.

        Args:
            crops: the crop indices

        Returns:
            the maxima and the crop of each
        """
        selected = np.isin(self.images, np.asarray(crops, dtype=np.intp))
        return self.maxima.take(selected), self.images[selected]


def extract_activations(
    net: NetworkSpec,
    crops: Sequence[ObjectCrop],
    layers: Sequence[str],
    min_value: float = 0.0,
    pool: Optional[WorkerPool] = None,
) -> Dict[str, LayerActivations]:
    """
    Run the network on every crop and keep the local maxima and peaks of the analyzed layers.

    Args:
        net: the network
        crops: the crops
        layers: the analyzed conv layers
        min_value: the activation floor of the local maxima
        pool: a pool running crops in parallel

    Returns:
        the activations of each layer
    """

    def _run(crop: ObjectCrop) -> Dict[str, np.ndarray]:
        return forward(
            net=net,
            input=crop.tensor,
            capture=layers,
        ).captured

    captured = pool.map(_run, crops) if pool is not None else [_run(crop) for crop in crops]
    activations = {}
    for layer in layers:
        n_filters = net.layer(layer).out_channels
        chunks = []
        images = []
        peaks = np.zeros((len(crops), n_filters), dtype=np.float64)
        positions = np.zeros((len(crops), n_filters, 2), dtype=np.intp)
        for index, maps in enumerate(captured):
            feature_maps = np.asarray(maps[layer], dtype=np.float64)
            maxima = find_maxima(
                maps=feature_maps,
                min_value=min_value,
            )
            chunks.append(maxima)
            images.append(np.full(len(maxima), index, dtype=np.intp))
            flat = feature_maps.reshape(n_filters, -1)
            argmax = np.argmax(flat, axis=1)
            peaks[index] = flat[np.arange(n_filters), argmax]
            positions[index, :, 0] = argmax % feature_maps.shape[2]
            positions[index, :, 1] = argmax // feature_maps.shape[2]
        activations[layer] = LayerActivations(
            layer=layer,
            n_filters=n_filters,
            maxima=_concat_maxima(chunks),
            images=np.concatenate(images) if images else np.zeros(0, dtype=np.intp),
            peaks=peaks,
            peak_positions=positions,
        )
    return activations


def _concat_maxima(
    chunks: List[ActivationArrays],
) -> ActivationArrays:
    if not chunks:
        return ActivationArrays.empty()
    return ActivationArrays(
        filters=np.concatenate([chunk.filters for chunk in chunks]),
        cols=np.concatenate([chunk.cols for chunk in chunks]),
        rows=np.concatenate([chunk.rows for chunk in chunks]),
        values=np.concatenate([chunk.values for chunk in chunks]),
        neighborhoods=np.concatenate([chunk.neighborhoods for chunk in chunks]).reshape(-1, 9),
    )


def layer_detections(
    net: NetworkSpec,
    activations: LayerActivations,
    crops: Optional[Sequence[int]] = None,
) -> Detections:
    """
    Get the receptive-field detections of a layer.

    Args:
        net: the network
        activations: the activations of the layer
        crops: restrict to these crops ; every crop by default

    Returns:
        the detections, `images` holding crop indices
    """
    if crops is None:
        maxima, images = activations.maxima, activations.images
    else:
        maxima, images = activations.of_crops(crops)
    _, _, boxes = receptive_field_arrays(
        net=net,
        layer=activations.layer,
        cols=maxima.cols,
        rows=maxima.rows,
    )
    return Detections(
        images=images,
        boxes=boxes,
        scores=maxima.values.astype(np.float64),
        filters=maxima.filters.copy(),
        regressed=np.zeros(len(maxima), dtype=bool),
    )


@dataclass
class PartDetections:
    """The detections of every filter of a layer for one part class, with and without regression."""

    regressed: Detections
    raw: Detections
    regressors: List[PartRegressor]
    skipped: List[int]


def part_detections(
    net: NetworkSpec,
    activations: LayerActivations,
    crops: Sequence[int],
    gt_images: np.ndarray,
    gt_boxes: np.ndarray,
    part_key: str,
    regression: bool = True,
    min_pairs: int = 20,
    ridge: float = 1e-6,
) -> PartDetections:
    """
    Turn the activations of the crops of an object class into detections of one of its part classes.

    Every filter with enough training pairs gets a regressor turning its activations into part boxes ; the other
    filters keep their receptive-field boxes.

    Args:
        net: the network
        activations: the activations of the layer
        crops: the crops of the object class
        gt_images: the crop of every part instance
        gt_boxes: the (m, 4) part instance boxes
        part_key: the "object/part" name of the part class
        regression: whether to regress boxes
        min_pairs: the pairs a regressor needs
        ridge: the ridge penalty of the regressors

    Returns:
        the detections, the fitted regressors and the filters left without one
    """
    layer = activations.layer
    maxima, images = activations.of_crops(crops)
    centers, _, rf_boxes = receptive_field_arrays(
        net=net,
        layer=layer,
        cols=maxima.cols,
        rows=maxima.rows,
    )
    raw = Detections(
        images=images,
        boxes=rf_boxes,
        scores=maxima.values.astype(np.float64),
        filters=maxima.filters.copy(),
        regressed=np.zeros(len(maxima), dtype=bool),
    )
    if not regression:
        return PartDetections(
            regressed=raw,
            raw=raw,
            regressors=[],
            skipped=[],
        )
    boxes = rf_boxes.copy()
    regressed = np.zeros(len(maxima), dtype=bool)
    regressors = []
    skipped = []
    image_size = (net.input_shape[2], net.input_shape[1])
    for j in range(activations.n_filters):
        rows = np.flatnonzero(maxima.filters == j)
        pairs, _ = build_pairs(
            centers=centers[rows],
            neighborhoods=maxima.neighborhoods[rows],
            values=maxima.values[rows],
            images=images[rows],
            gt_boxes=gt_boxes,
            gt_images=gt_images,
        )
        try:
            regressor = fit(
                pairs=pairs,
                min_pairs=min_pairs,
                ridge=ridge,
                part_class=part_key,
                layer=layer,
                filter_index=j,
            )
        except InsufficientPairsError:
            skipped.append(j)
            continue
        regressors.append(regressor)
        boxes[rows] = regressor.boxes(
            centers=centers[rows],
            neighborhoods=maxima.neighborhoods[rows],
            image_size=image_size,
        )
        regressed[rows] = True
    return PartDetections(
        regressed=Detections(
            images=images,
            boxes=boxes,
            scores=raw.scores,
            filters=raw.filters,
            regressed=regressed,
        ),
        raw=raw,
        regressors=regressors,
        skipped=skipped,
    )


@dataclass
class PartResult:
    """
    The analysis of a part class in a layer.

    The GA fields are None when the genetic search is disabled ; `top` is then the single best filter.
    `not_in_top` is the fraction of GA-selected filters absent from the TopFilters selection of the same size.
    """

    layer: str
    object_class: str
    part_class: str
    n_gt: int
    per_filter_aps: np.ndarray
    best_filter: int
    best_ap: float
    best_raw_ap: float
    best_report: EvalReport
    ga: Optional[GAResult]
    ga_report: Optional[EvalReport]
    top: Chromosome
    top_ap: float
    not_in_top: float
    emergence: Emergence
    curve_reports: Dict[int, EvalReport]

    @property
    def key(self) -> str:
        """
        Get the "object/part" name of the part class.

        Returns:
            the name
        """
        return f"{self.object_class}/{self.part_class}"

    @property
    def ga_filters(self) -> List[int]:
        """
        Get the filters selected by the genetic search.

        Returns:
            the filters, empty when the search is disabled
        """
        return self.ga.best.filters if self.ga is not None else []


def one_hot_population(
    n_filters: int,
) -> np.ndarray:
    """
    Get the chromosomes of the single filters.

    Args:
        n_filters: the number of filters

    Returns:
        the (n_filters, n_filters) identity chromosomes
    """
    return np.eye(n_filters, dtype=bool)


def analyze_part(
    detections: PartDetections,
    n_filters: int,
    gt_images: np.ndarray,
    gt_boxes: np.ndarray,
    layer: str,
    object_class: str,
    part_class: str,
    iou_threshold: float = 0.4,
    nms_threshold: float = 0.3,
    ga_config: Optional[GAConfig] = None,
    ap_threshold: float = 0.3,
    recall_threshold: float = 0.5,
    curve_filters: int = 3,
    pool: Optional[WorkerPool] = None,
    listener: Optional[GAListener] = None,
) -> PartResult:
    """
    Score the single filters and the filter combinations of a layer for a part class.

    Args:
        detections: the detections of the part class
        n_filters: the number of filters of the layer
        gt_images: the crop of every part instance
        gt_boxes: the (m, 4) part instance boxes
        layer: the layer
        object_class: the object class
        part_class: the part class
        iou_threshold: the matching threshold
        nms_threshold: the NMS threshold
        ga_config: the genetic search hyperparameters ; no search when None
        ap_threshold: the emergence AP threshold
        recall_threshold: the coverage recall threshold
        curve_filters: the number of best single filters whose reports are kept for curves
        pool: a pool scoring combinations in parallel
        listener: a listener of the genetic search

    Returns:
        the result

    Raises:
        UndefinedAPError: if the part has no instance
    """
    key = f"{object_class}/{part_class}"
    evaluator = CombinationEvaluator(
        detections=detections.regressed,
        n_filters=n_filters,
        gt_images=gt_images,
        gt_boxes=gt_boxes,
        part_class=key,
        iou_threshold=iou_threshold,
        nms_threshold=nms_threshold,
        pool=pool,
    )
    singles = one_hot_population(n_filters)
    per_filter_aps = evaluator.evaluate_population(singles)
    ranking = np.lexsort((np.arange(n_filters), -per_filter_aps))
    best_filter = int(ranking[0])
    raw_evaluator = CombinationEvaluator(
        detections=detections.raw,
        n_filters=n_filters,
        gt_images=gt_images,
        gt_boxes=gt_boxes,
        part_class=key,
        iou_threshold=iou_threshold,
        nms_threshold=nms_threshold,
    )
    best_raw_ap = raw_evaluator.fitness(singles[best_filter])
    ga_result = None
    ga_report = None
    if ga_config is not None:
        ga_result = run_ga(
            cfg=ga_config,
            evaluator=evaluator,
            listener=listener,
        )
        if ga_result.best.bits.any():
            ga_report = evaluator.report(ga_result.best.bits)
    n_selected = ga_result.best.bits_set if ga_result is not None else 1
    top = top_filters(
        per_filter_aps=per_filter_aps.tolist(),
        n=n_selected,
    )
    top_ap = evaluator.fitness(top.bits)
    not_in_top = 0.0
    if ga_result is not None and ga_result.best.bits_set:
        not_in_top = float(np.sum(ga_result.best.bits & ~top.bits)) / ga_result.best.bits_set
    curve_reports = {int(j): evaluator.report(singles[j]) for j in ranking[: max(curve_filters, 0)]}
    best_report = curve_reports.get(best_filter) or evaluator.report(singles[best_filter])
    return PartResult(
        layer=layer,
        object_class=object_class,
        part_class=part_class,
        n_gt=int(np.asarray(gt_images).shape[0]),
        per_filter_aps=per_filter_aps,
        best_filter=best_filter,
        best_ap=float(per_filter_aps[best_filter]),
        best_raw_ap=float(best_raw_ap),
        best_report=best_report,
        ga=ga_result,
        ga_report=ga_report,
        top=replace(
            top,
            fitness=float(top_ap),
        ),
        top_ap=float(top_ap),
        not_in_top=not_in_top,
        emergence=emergence(
            report=ga_report if ga_report is not None else best_report,
            ap_threshold=ap_threshold,
            recall_threshold=recall_threshold,
        ),
        curve_reports=curve_reports,
    )


@dataclass(frozen=True)
class TopActivation:
    """One of the strongest activations of a filter over the crops of an object class."""

    crop: int
    value: float
    c: int
    r: int


def top_activations(
    activations: LayerActivations,
    crops: Sequence[int],
    filter_index: int,
    k: int,
) -> List[TopActivation]:
    """
    Get the crops where a filter responds the most.

    Args:
        activations: the activations of the layer
        crops: the candidate crops
        filter_index: the filter
        k: the number of crops

    Returns:
        at most k activations, by descending peak then crop order
    """
    crops = np.asarray(crops, dtype=np.intp)
    if crops.size == 0 or k <= 0:
        return []
    values = activations.peaks[crops, filter_index]
    order = np.lexsort((crops, -values))[:k]
    return [
        TopActivation(
            crop=int(crops[i]),
            value=float(values[i]),
            c=int(activations.peak_positions[crops[i], filter_index, 0]),
            r=int(activations.peak_positions[crops[i], filter_index, 1]),
        )
        for i in order
    ]
