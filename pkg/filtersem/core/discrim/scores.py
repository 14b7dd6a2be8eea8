"""Score drops caused by zeroing filters or blacking out parts."""
from dataclasses import (
    dataclass,
    field,
    replace,
)
from typing import (
    Dict,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from filtersem.core.configuration.analysis import SCORE_MODES
from filtersem.core.discrim.error import DiscrimError
from filtersem.core.nn.engine import (
    AblationSpec,
    ForwardResult,
    forward,
    layer_input,
)
from filtersem.core.nn.error import NetworkConfigurationError
from filtersem.core.nn.spec import NetworkSpec
from filtersem.core.pool import WorkerPool


@dataclass(frozen=True)
class DiscrimScore:
    """
    The mean drop of a class score when a filter or a part is removed.

    `target` names the removed element ; `sigma` is the standard deviation of the deltas of its peers
    (filters of the same layer, or parts of the same object class).
    """

    target: str
    delta: float
    per_image_deltas: Tuple[float, ...] = field(repr=False)
    sigma: Optional[float] = None
    is_discriminative: bool = False
    layer: Optional[str] = None
    filter: Optional[int] = None
    part_class: Optional[str] = None


def class_score(
    result: ForwardResult,
    class_index: int,
    score_mode: str = "softmax",
) -> float:
    """
    Get the score of a class from a forward pass.

    Args:
        result: the forward pass
        class_index: the class
        score_mode: "softmax" for the class probability, "logit" for the input of the final softmax

    Returns:
        the score

    Raises:
        NetworkConfigurationError: if the mode or the class is unknown
    """
    if score_mode not in SCORE_MODES:
        raise NetworkConfigurationError(f"Unknown score mode {repr(score_mode)}")
    if score_mode == "logit":
        values = result.logits if result.logits is not None else result.scores
    elif result.logits is not None:
        values = result.scores
    else:
        raw = result.scores.astype(np.float64)
        exponentials = np.exp(raw - raw.max())
        values = exponentials / exponentials.sum()
    if not 0 <= class_index < values.shape[0]:
        raise NetworkConfigurationError(f"Network has {values.shape[0]} outputs ; no class {class_index}")
    return float(values[class_index])


def _with_peers(
    scores: List[DiscrimScore],
    sigma_factor: float,
) -> List[DiscrimScore]:
    if not scores:
        return scores
    deltas = np.array([score.delta for score in scores], dtype=np.float64)
    sigma = float(deltas.std())
    return [
        replace(
            score,
            sigma=sigma,
            is_discriminative=bool(score.delta > sigma_factor * sigma),
        )
        for score in scores
    ]


def layer_discrim(
    net: NetworkSpec,
    images: Sequence[np.ndarray],
    class_index: int,
    layer: str,
    score_mode: str = "softmax",
    sigma_factor: float = 2.0,
    pool: Optional[WorkerPool] = None,
) -> List[DiscrimScore]:
    """
    Get the discriminativeness of every filter of a conv layer for a class.

    The delta of filter j is the mean over images of s - s_j, s_j being the class score with the feature map of j
    zeroed ; sigma is the population standard deviation of the deltas of the layer and a filter is discriminative
    when its delta exceeds `sigma_factor` times sigma.

    Args:
        net: a parameterized network
        images: crops of the class, network input tensors
        class_index: the class
        layer: a conv layer
        score_mode: "softmax" or "logit"
        sigma_factor: the discriminativeness threshold, in sigmas
        pool: a pool running images in parallel

    Returns:
        one score per filter, in filter order

    Raises:
        DiscrimError: if there is no image
        NetworkConfigurationError: if the layer is not a conv layer
    """
    if not images:
        raise DiscrimError(f"No image to measure the filters of layer {repr(layer)} on")
    spec = net.layer(layer)
    if spec.kind != "conv":
        raise NetworkConfigurationError(f"Layer {repr(layer)} is not a conv layer")

    def _deltas(image: np.ndarray) -> np.ndarray:
        entering = layer_input(
            net=net,
            input=image,
            layer_name=layer,
        )
        base = class_score(
            result=forward(
                net=net,
                input=entering,
                start=layer,
            ),
            class_index=class_index,
            score_mode=score_mode,
        )
        ablated = [
            class_score(
                result=forward(
                    net=net,
                    input=entering,
                    ablation=AblationSpec(zero_filters=frozenset({(layer, j)})),
                    start=layer,
                ),
                class_index=class_index,
                score_mode=score_mode,
            )
            for j in range(spec.out_channels)
        ]
        return base - np.array(ablated, dtype=np.float64)

    rows = pool.map(_deltas, images) if pool is not None else [_deltas(image) for image in images]
    per_image = np.stack(rows)
    deltas = per_image.mean(axis=0)
    scores = [
        DiscrimScore(
            target=f"{layer}/{j}",
            delta=float(deltas[j]),
            per_image_deltas=tuple(float(value) for value in per_image[:, j]),
            layer=layer,
            filter=j,
        )
        for j in range(spec.out_channels)
    ]
    return _with_peers(
        scores=scores,
        sigma_factor=sigma_factor,
    )


def filter_discrim(
    net: NetworkSpec,
    images: Sequence[np.ndarray],
    class_index: int,
    layer: str,
    j: int,
    score_mode: str = "softmax",
    sigma_factor: float = 2.0,
    pool: Optional[WorkerPool] = None,
) -> DiscrimScore:
    """
    Get the discriminativeness of one filter ; sigma still spans every filter of the layer.

    Args:
        net: a parameterized network
        images: crops of the class
        class_index: the class
        layer: a conv layer
        j: the filter
        score_mode: "softmax" or "logit"
        sigma_factor: the discriminativeness threshold, in sigmas
        pool: a pool running images in parallel

    Returns:
        the score of the filter

    Raises:
        NetworkConfigurationError: if the filter does not exist
    """
    out_channels = net.layer(layer).out_channels
    if not 0 <= j < out_channels:
        raise NetworkConfigurationError(f"Layer {repr(layer)} has no filter {j}")
    return layer_discrim(
        net=net,
        images=images,
        class_index=class_index,
        layer=layer,
        score_mode=score_mode,
        sigma_factor=sigma_factor,
        pool=pool,
    )[j]


def part_discrim(
    net: NetworkSpec,
    images: Sequence[np.ndarray],
    masks: Sequence[Optional[np.ndarray]],
    class_index: int,
    part_class: str,
    score_mode: str = "softmax",
    pool: Optional[WorkerPool] = None,
) -> DiscrimScore:
    """
    Get the mean drop of a class score when the pixels of a part are set to zero.

    Images without a mask for the part are skipped ; an empty mask counts with a zero drop.

    Args:
        net: a parameterized network
        images: crops of the class
        masks: the part mask of each crop, None when the crop has no such part
        class_index: the class
        part_class: the part class
        score_mode: "softmax" or "logit"
        pool: a pool running images in parallel

    Returns:
        the score, without sigma

    Raises:
        DiscrimError: if no image carries a mask or the inputs are not aligned
    """
    if len(images) != len(masks):
        raise DiscrimError(f"{len(images)} images for {len(masks)} masks of part {repr(part_class)}")
    pairs = [(image, mask) for image, mask in zip(images, masks) if mask is not None]
    if not pairs:
        raise DiscrimError(f"No image contains part {repr(part_class)}")

    def _delta(pair: Tuple[np.ndarray, np.ndarray]) -> float:
        image, mask = pair
        base = class_score(
            result=forward(
                net=net,
                input=image,
            ),
            class_index=class_index,
            score_mode=score_mode,
        )
        if not np.any(mask):
            return 0.0
        blacked = class_score(
            result=forward(
                net=net,
                input=image,
                ablation=AblationSpec(blackout_mask=mask),
            ),
            class_index=class_index,
            score_mode=score_mode,
        )
        return base - blacked

    deltas = pool.map(_delta, pairs) if pool is not None else [_delta(pair) for pair in pairs]
    return DiscrimScore(
        target=part_class,
        delta=float(np.mean(deltas)),
        per_image_deltas=tuple(float(delta) for delta in deltas),
        part_class=part_class,
    )


def object_part_discrims(
    net: NetworkSpec,
    images: Sequence[np.ndarray],
    masks_by_part: Mapping[str, Sequence[Optional[np.ndarray]]],
    class_index: int,
    score_mode: str = "softmax",
    sigma_factor: float = 2.0,
    pool: Optional[WorkerPool] = None,
) -> List[DiscrimScore]:
    """
    Get the discriminativeness of every part of an object class.

    Parts carried by no image are left out ; sigma spans the remaining parts.

    Args:
        net: a parameterized network
        images: crops of the class
        masks_by_part: for each part class, the mask of each crop
        class_index: the class
        score_mode: "softmax" or "logit"
        sigma_factor: the discriminativeness threshold, in sigmas
        pool: a pool running images in parallel

    Returns:
        one score per present part, in part-class order
    """
    scores: Dict[str, DiscrimScore] = {}
    for part_class in sorted(masks_by_part):
        masks = masks_by_part[part_class]
        if all(mask is None for mask in masks):
            continue
        scores[part_class] = part_discrim(
            net=net,
            images=images,
            masks=masks,
            class_index=class_index,
            part_class=part_class,
            score_mode=score_mode,
            pool=pool,
        )
    return _with_peers(
        scores=list(scores.values()),
        sigma_factor=sigma_factor,
    )
