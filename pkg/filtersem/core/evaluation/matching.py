"""Matching detections to ground truth and average precision."""
from dataclasses import (
    dataclass,
    field,
)
from typing import (
    Dict,
    List,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from filtersem.core.evaluation.error import (
    DomainError,
    UndefinedAPError,
)
from filtersem.core.geometry.box import (
    Box,
    pairwise_iou,
)
from filtersem.core.regression.pairs import PartBox
from filtersem.core.stimulus.detection import StimulusDetection
from filtersem.core.stimulus.nms import score_order


def iou(
    a: Box,
    b: Box,
) -> float:
    """
    Get the intersection-over-union of two boxes.

    Args:
        a: a box
        b: a box

    Returns:
        the IoU, in [0, 1]

    Raises:
        DomainError: if a box has no area
    """
    for box in (a, b):
        if not box.w > 0 or not box.h > 0:
            raise DomainError(f"Box {box} has no area")
    return float(pairwise_iou(a.as_array(), b.as_array())[0, 0])


@dataclass
class MatchResult:
    """
    The outcome of a matching, indexed like the inputs.

    `order` is the visiting order of the detections ; `matched` holds the ground-truth index of every true positive
    and -1 elsewhere.
    """

    order: np.ndarray
    is_tp: np.ndarray
    matched: np.ndarray
    covered: np.ndarray


@dataclass
class EvalReport:
    """
    Scores of a set of detections for a part class.

    Curve arrays follow the score order of the detections: `precision[i]`, `recall[i]` and `false_positives[i]`
    describe the i + 1 best detections.
    """

    part_class: str
    filters: Tuple[int, ...]
    ap: float
    max_recall: float
    n_detections: int
    n_gt: int
    precision: np.ndarray = field(repr=False)
    recall: np.ndarray = field(repr=False)
    false_positives: np.ndarray = field(repr=False)

    @property
    def pr_points(self) -> List[Tuple[float, float]]:
        """
        Get the precision-recall curve.

        Returns:
            the (recall, precision) points
        """
        return list(zip(self.recall.tolist(), self.precision.tolist()))

    @property
    def recall_fp_points(self) -> List[Tuple[int, float]]:
        """
        Get the recall-vs-false-positive curve.

        Returns:
            the (false positives, recall) points
        """
        return list(zip(self.false_positives.astype(int).tolist(), self.recall.tolist()))


def match_detections(
    images: np.ndarray,
    boxes: np.ndarray,
    scores: np.ndarray,
    gt_images: np.ndarray,
    gt_boxes: np.ndarray,
    iou_threshold: float = 0.4,
) -> MatchResult:
    """
    Match detections to ground-truth boxes greedily.

    Detections are visited by descending score, ties in input order ; each one takes the unmatched box of its
    image with the highest IoU when that IoU reaches the threshold, and is a false positive otherwise.

    Args:
        images: the (n,) image index of every detection
        boxes: the (n, 4) detection boxes
        scores: the (n,) scores
        gt_images: the (m,) image index of every ground-truth box
        gt_boxes: the (m, 4) ground-truth boxes
        iou_threshold: the matching threshold

    Returns:
        the matching
    """
    images = np.asarray(images)
    boxes = np.asarray(boxes, dtype=np.float64).reshape(-1, 4)
    gt_images = np.asarray(gt_images)
    gt_boxes = np.asarray(gt_boxes, dtype=np.float64).reshape(-1, 4)
    n = images.shape[0]
    order = score_order(scores)
    matched = np.full(n, -1, dtype=np.intp)
    covered = np.zeros(gt_images.shape[0], dtype=bool)
    if n and gt_images.shape[0]:
        # each image is matched on its own, visiting its detections in global score order
        ranked = order[np.argsort(images[order], kind="stable")]
        ranked_images = images[ranked]
        gt_sorted = np.argsort(gt_images, kind="stable")
        gt_sorted_images = gt_images[gt_sorted]
        for image in np.intersect1d(ranked_images, gt_sorted_images):
            start = np.searchsorted(ranked_images, image, side="left")
            stop = np.searchsorted(ranked_images, image, side="right")
            dets = ranked[start:stop]
            gt_start = np.searchsorted(gt_sorted_images, image, side="left")
            gt_stop = np.searchsorted(gt_sorted_images, image, side="right")
            gts = gt_sorted[gt_start:gt_stop]
            overlaps = pairwise_iou(boxes[dets], gt_boxes[gts])
            overlaps[overlaps < iou_threshold] = -1.0
            taken = np.zeros(gts.size, dtype=bool)
            for row in np.flatnonzero((overlaps >= 0).any(axis=1)):
                available = np.where(taken, -1.0, overlaps[row])
                best = int(np.argmax(available))
                if available[best] < 0:
                    continue
                taken[best] = True
                matched[dets[row]] = gts[best]
        covered[matched[matched >= 0]] = True
    return MatchResult(
        order=order,
        is_tp=matched >= 0,
        matched=matched,
        covered=covered,
    )


def average_precision(
    precision: np.ndarray,
    recall: np.ndarray,
) -> float:
    """
    Get the all-points average precision: the area under the precision envelope.

    Args:
        precision: the precision after each detection, in score order
        recall: the recall after each detection, in score order

    Returns:
        the AP
    """
    if precision.size == 0:
        return 0.0
    envelope_recall = np.concatenate([[0.0], recall, [1.0]])
    envelope = np.concatenate([[0.0], precision, [0.0]])
    envelope = np.maximum.accumulate(envelope[::-1])[::-1]
    steps = np.flatnonzero(envelope_recall[1:] != envelope_recall[:-1])
    return float(np.sum((envelope_recall[steps + 1] - envelope_recall[steps]) * envelope[steps + 1]))


def evaluate_arrays(
    images: np.ndarray,
    boxes: np.ndarray,
    scores: np.ndarray,
    gt_images: np.ndarray,
    gt_boxes: np.ndarray,
    iou_threshold: float = 0.4,
    part_class: str = "",
    filters: Sequence[int] = (),
) -> EvalReport:
    """
    Score detections against ground truth.

    Args:
        images: the (n,) image index of every detection
        boxes: the (n, 4) detection boxes
        scores: the (n,) scores
        gt_images: the (m,) image index of every ground-truth box
        gt_boxes: the (m, 4) ground-truth boxes
        iou_threshold: the matching threshold
        part_class: the part class
        filters: the filters the detections come from

    Returns:
        the report

    Raises:
        UndefinedAPError: if there is no ground truth
    """
    n_gt = int(np.asarray(gt_images).shape[0])
    if n_gt == 0:
        raise UndefinedAPError(f"No ground truth for part class {repr(part_class)} ; AP is undefined")
    result = match_detections(
        images=images,
        boxes=boxes,
        scores=scores,
        gt_images=gt_images,
        gt_boxes=gt_boxes,
        iou_threshold=iou_threshold,
    )
    hits = result.is_tp[result.order]
    true_positives = np.cumsum(hits, dtype=np.float64)
    false_positives = np.cumsum(~hits, dtype=np.float64)
    recall = true_positives / n_gt
    precision = true_positives / np.maximum(true_positives + false_positives, 1.0)
    return EvalReport(
        part_class=part_class,
        filters=tuple(int(f) for f in filters),
        ap=average_precision(
            precision=precision,
            recall=recall,
        ),
        max_recall=float(recall[-1]) if recall.size else 0.0,
        n_detections=int(hits.size),
        n_gt=n_gt,
        precision=precision,
        recall=recall,
        false_positives=false_positives,
    )


def match_and_ap(
    dets: Sequence[StimulusDetection],
    gts: Sequence[PartBox],
    iou_thr: float = 0.4,
    part_class: Optional[str] = None,
) -> EvalReport:
    """
    Score detection records against part instances.

    Args:
        dets: the detections
        gts: the part instances
        iou_thr: the matching threshold
        part_class: the part class ; taken from the first instance by default

    Returns:
        the report

    Raises:
        UndefinedAPError: if there is no ground truth
    """
    image_ids = sorted({det.image_id for det in dets} | {gt.image_id for gt in gts})
    index: Dict[str, int] = {image_id: i for i, image_id in enumerate(image_ids)}
    if part_class is None:
        part_class = gts[0].part_class if gts else ""
    return evaluate_arrays(
        images=np.array([index[det.image_id] for det in dets], dtype=np.intp),
        boxes=np.array([det.box.as_list() for det in dets]).reshape(-1, 4),
        scores=np.array([det.score for det in dets], dtype=np.float64),
        gt_images=np.array([index[gt.image_id] for gt in gts], dtype=np.intp),
        gt_boxes=np.array([gt.box.as_list() for gt in gts]).reshape(-1, 4),
        iou_threshold=iou_thr,
        part_class=part_class,
        filters=sorted({det.filter[1] for det in dets}),
    )
