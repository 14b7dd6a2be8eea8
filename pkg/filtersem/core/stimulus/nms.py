"""Greedy non-maximum suppression, per image."""
from typing import List

import numpy as np

from filtersem.core.evaluation.error import DomainError
from filtersem.core.geometry.box import pairwise_iou
from filtersem.core.stimulus.detection import StimulusDetection


def score_order(
    scores: np.ndarray,
) -> np.ndarray:
    """
    Sort indices by descending score, ties kept in index order.

    Args:
        scores: the (n,) scores

    Returns:
        the (n,) permutation
    """
    scores = np.asarray(scores, dtype=np.float64)
    return np.lexsort((np.arange(scores.shape[0]), -scores))


def nms_indices(
    images: np.ndarray,
    boxes: np.ndarray,
    scores: np.ndarray,
    iou_threshold: float = 0.3,
) -> np.ndarray:
    """
    Select the detections surviving a greedy non-maximum suppression.

    Detections are visited by descending score ; one is dropped when its IoU with an already kept
    detection of the same image exceeds the threshold.

    Args:
        images: the (n,) image index of every detection
        boxes: the (n, 4) boxes
        scores: the (n,) scores
        iou_threshold: the suppression threshold, in (0, 1)

    Returns:
        the kept indices, by descending score then index

    Raises:
        DomainError: if the threshold is outside (0, 1)
    """
    if not 0.0 < iou_threshold < 1.0:
        raise DomainError(f"NMS threshold must lie in (0, 1) ; got {iou_threshold}")
    images = np.asarray(images)
    n = images.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.intp)
    boxes = np.asarray(boxes, dtype=np.float64).reshape(-1, 4)
    order = score_order(scores)
    rank = np.empty(n, dtype=np.intp)
    rank[order] = np.arange(n)
    grouped = order[np.argsort(images[order], kind="stable")]
    boundaries = np.flatnonzero(np.diff(images[grouped])) + 1
    kept: List[np.ndarray] = []
    for group in np.split(grouped, boundaries):
        if group.size == 1:
            kept.append(group)
            continue
        overlaps = pairwise_iou(boxes[group], boxes[group]) > iou_threshold
        suppressed = np.zeros(group.size, dtype=bool)
        keep = np.zeros(group.size, dtype=bool)
        for i in range(group.size):
            if suppressed[i]:
                continue
            keep[i] = True
            suppressed |= overlaps[i]
        kept.append(group[keep])
    result = np.concatenate(kept)
    return result[np.argsort(rank[result], kind="stable")]


def nms(
    dets: List[StimulusDetection],
    iou_threshold: float = 0.3,
) -> List[StimulusDetection]:
    """
    Remove duplicate detections with a greedy non-maximum suppression, image by image.

    Args:
        dets: the detections
        iou_threshold: the suppression threshold, in (0, 1)

    Returns:
        the kept detections, by descending score ; ties keep the input order

    Raises:
        DomainError: if the threshold is outside (0, 1)
    """
    if not 0.0 < iou_threshold < 1.0:
        raise DomainError(f"NMS threshold must lie in (0, 1) ; got {iou_threshold}")
    if not dets:
        return []
    _, images = np.unique(
        [det.image_id for det in dets],
        return_inverse=True,
    )
    kept = nms_indices(
        images=images,
        boxes=np.array([det.box.as_list() for det in dets]),
        scores=np.array([det.score for det in dets]),
        iou_threshold=iou_threshold,
    )
    return [dets[i] for i in kept]
