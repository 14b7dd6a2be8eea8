"""Matched-filter baseline detector for planted parts."""
from typing import (
    Optional,
    Sequence,
)

import numpy as np
from scipy.ndimage import correlate

from filtersem.core.corpus.model import AnnotatedImage
from filtersem.core.evaluation.matching import (
    EvalReport,
    evaluate_arrays,
)
from filtersem.core.geometry.box import clip_boxes
from filtersem.core.nn.inject import matched_template
from filtersem.core.stimulus.activation import find_maxima
from filtersem.core.stimulus.detection import Detections
from filtersem.core.stimulus.nms import nms_indices


def matched_filter_detections(
    images: Sequence[AnnotatedImage],
    pattern: str,
    channel: int,
    sizes: Sequence[int],
    nms_threshold: float = 0.3,
) -> Detections:
    """
    Detect a pattern by cross-correlating a channel with its zero-mean template at several scales.

    Each template has a one pixel margin around the rasterized pattern. Responses are divided by the pattern side so
    that scales compare, their strict local maxima become square boxes of that side, and overlapping boxes of all
    scales are merged by non-maximum suppression.

    Args:
        images: the images
        pattern: the pattern name
        channel: the channel the pattern is painted in
        sizes: the pattern sides to try, in pixels
        nms_threshold: the suppression threshold

    Returns:
        the detections ; `images` indexes the given sequence and `filters` holds the index of the scale

    Raises:
        NetworkConfigurationError: if the pattern is unknown or has no contrast at a size
    """
    templates = [
        matched_template(
            pattern=pattern,
            kernel=size + 2,
            size=size,
        )
        for size in sizes
    ]
    chunks = []
    for index, image in enumerate(images):
        plane = np.asarray(image.image[channel], dtype=np.float64)
        width, height = image.size
        responses = np.stack(
            [correlate(plane, template, mode="nearest") / size for size, template in zip(sizes, templates)]
        )
        peaks = find_maxima(responses)
        if not len(peaks):
            continue
        sides = np.asarray(sizes, dtype=np.float64)[peaks.filters]
        kernels = np.asarray(sizes, dtype=np.intp)[peaks.filters] + 2
        boxes = np.stack(
            [
                peaks.cols - kernels // 2 + 1,
                peaks.rows - kernels // 2 + 1,
                sides,
                sides,
            ],
            axis=1,
        ).astype(np.float64)
        chunks.append(
            Detections(
                images=np.full(len(peaks), index, dtype=np.intp),
                boxes=clip_boxes(boxes, width, height),
                scores=peaks.values,
                filters=peaks.filters,
                regressed=np.zeros(len(peaks), dtype=bool),
            )
        )
    detections = Detections.concat(chunks)
    return detections.take(
        nms_indices(
            images=detections.images,
            boxes=detections.boxes,
            scores=detections.scores,
            iou_threshold=nms_threshold,
        )
    )


def matched_filter_report(
    images: Sequence[AnnotatedImage],
    object_class: str,
    part_class: str,
    pattern: str,
    channel: int,
    sizes: Optional[Sequence[int]] = None,
    iou_threshold: float = 0.4,
) -> EvalReport:
    """
    Score the matched-filter baseline against the planted instances of a part.

    Args:
        images: the images
        object_class: the object class owning the part
        part_class: the part class
        pattern: the pattern the part is drawn with
        channel: the channel the part is painted in
        sizes: the pattern sides to try ; the distinct sides of the planted instances by default
        iou_threshold: the matching threshold

    Returns:
        the report

    Raises:
        UndefinedAPError: if no instance of the part is planted
    """
    gt_images = []
    gt_boxes = []
    for index, image in enumerate(images):
        for part in image.parts:
            if part.part_class == part_class and image.objects[part.parent].object_class == object_class:
                gt_images.append(index)
                gt_boxes.append(part.box.as_list())
    if sizes is None:
        sizes = sorted({int(round(max(box[2], box[3]))) for box in gt_boxes})
    detections = matched_filter_detections(
        images=images,
        pattern=pattern,
        channel=channel,
        sizes=sizes,
    )
    return evaluate_arrays(
        images=detections.images,
        boxes=detections.boxes,
        scores=detections.scores,
        gt_images=np.asarray(gt_images, dtype=np.intp),
        gt_boxes=np.asarray(gt_boxes, dtype=np.float64).reshape(-1, 4),
        iou_threshold=iou_threshold,
        part_class=part_class,
    )
