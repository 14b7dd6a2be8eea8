"""Matched-filter injection: overwrite a conv filter with the template of a planted pattern."""
from dataclasses import replace
from typing import Optional

import numpy as np

from filtersem.core.corpus.patterns import (
    PATTERNS,
    pattern_mask,
)
from filtersem.core.nn.error import NetworkConfigurationError
from filtersem.core.nn.spec import (
    ELEMENTWISE_KINDS,
    NetworkSpec,
)


def matched_template(
    pattern: str,
    kernel: int,
    size: Optional[int] = None,
) -> np.ndarray:
    """
    Get the zero-mean, unit-norm template of a pattern.

    Args:
        pattern: a pattern name
        kernel: the side of the template
        size: the side of the rasterized pattern, centered in the template ; the whole template by default

    Returns:
        a (kernel, kernel) float64 template

    Raises:
        NetworkConfigurationError: if the pattern is unknown or has no contrast at this size
    """
    if pattern not in PATTERNS:
        raise NetworkConfigurationError(f"Unknown pattern {repr(pattern)}")
    side = kernel if size is None else size
    if not 1 <= side <= kernel:
        raise NetworkConfigurationError(f"Pattern side {side} does not fit a kernel of {kernel}")
    template = np.zeros((kernel, kernel), dtype=np.float64)
    offset = (kernel - side) // 2
    template[offset : offset + side, offset : offset + side] = pattern_mask(pattern, side)
    template -= template.mean()
    norm = np.linalg.norm(template)
    if norm == 0:
        raise NetworkConfigurationError(f"Pattern {repr(pattern)} has no contrast in a {kernel}x{kernel} kernel")
    return template / norm


def inject_matched_filter(
    net: NetworkSpec,
    layer_name: str,
    filter_index: int,
    pattern: str,
    channel: int,
    size: Optional[int] = None,
    gain: float = 1.0,
) -> NetworkSpec:
    """
    Get a copy of the network where a conv filter is the matched template of a pattern.

    The filter only sees the given channel and has a zero bias. The layer must be fed by the input image,
    with only elementwise layers in between.

    Args:
        net: a parameterized network
        layer_name: a conv layer name
        filter_index: the filter to overwrite
        pattern: a pattern name
        channel: the input channel the pattern is painted in
        size: the side of the pattern inside the kernel
        gain: a factor applied to the template

    Returns:
        the modified network

    Raises:
        NetworkConfigurationError: if the layer or the filter cannot receive the template
    """
    index = net.layer_index(layer_name)
    layer = net.layers[index]
    if layer.kind != "conv" or layer.weights is None or layer.bias is None:
        raise NetworkConfigurationError(f"Layer {repr(layer_name)} is not a parameterized conv layer")
    if any(previous.kind not in ELEMENTWISE_KINDS for previous in net.layers[:index]):
        raise NetworkConfigurationError(f"Layer {repr(layer_name)} is not fed by the input image")
    if not 0 <= filter_index < layer.out_channels:
        raise NetworkConfigurationError(f"Layer {repr(layer_name)} has no filter {filter_index}")
    if not 0 <= channel < net.input_shape[0]:
        raise NetworkConfigurationError(f"Input has no channel {channel}")
    weights = layer.weights.copy()
    bias = layer.bias.copy()
    weights[filter_index] = 0
    weights[filter_index, channel] = gain * matched_template(
        pattern=pattern,
        kernel=layer.kernel,
        size=size,
    )
    bias[filter_index] = 0
    return net.with_layer(
        replace(
            layer,
            weights=weights.astype(np.float32),
            bias=bias,
        )
    )
