"""Forward pass with feature-map capture, filter zero-ablation and input blackout."""
from dataclasses import (
    dataclass,
    field,
)
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    Optional,
    Tuple,
)

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from filtersem.core.nn.error import (
    EngineNumericError,
    NetworkConfigurationError,
)
from filtersem.core.nn.spec import (
    LayerSpec,
    NetworkSpec,
)


Tensor = np.ndarray


@dataclass(frozen=True)
class AblationSpec:
    """Filters whose feature map is zeroed and input pixels set to zero."""

    zero_filters: FrozenSet[Tuple[str, int]] = frozenset()
    blackout_mask: Optional[np.ndarray] = field(default=None, repr=False)


NO_ABLATION = AblationSpec()


@dataclass
class ForwardResult:
    """
    Outputs of a forward pass.

    `scores` is the flattened output of the last layer ; `logits` the input of a final softmax, if any.
    """

    scores: np.ndarray
    logits: Optional[np.ndarray]
    captured: Dict[str, Tensor]


def forward(
    net: NetworkSpec,
    input: Tensor,
    ablation: AblationSpec = NO_ABLATION,
    capture: Iterable[str] = (),
    start: Optional[str] = None,
) -> ForwardResult:
    """
    Run the network on an input tensor.

    Captured conv layers directly followed by a relu are captured after the relu.

    Args:
        net: a parameterized network
        input: a (channels, height, width) tensor ; the input of layer `start` when given
        ablation: filters to zero and input pixels to black out
        capture: names of the layers whose output is returned
        start: name of the layer the computation starts at, the first layer by default

    Returns:
        the class scores and the captured maps

    Raises:
        NetworkConfigurationError: if the input or the ablation does not fit the network
        EngineNumericError: if a layer produces a non-finite value
    """
    if not net.is_parameterized:
        raise NetworkConfigurationError("Network has no weights ; load or initialize them first")
    start_index = 0 if start is None else net.layer_index(start)
    expected_shape = net.input_shape if start is None else net.input_shape_of(start)
    x = np.asarray(input, dtype=np.float32)
    if x.shape != tuple(expected_shape):
        where = "network input" if start is None else f"input of layer {repr(start)}"
        raise NetworkConfigurationError(f"Shape mismatch for {where}: expecting {tuple(expected_shape)}, got {x.shape}")
    capture_names = set(capture)
    for name in capture_names:
        net.layer_index(name)
    zeroed = _zeroed_filters(
        net=net,
        ablation=ablation,
    )
    if ablation.blackout_mask is not None:
        if start is not None:
            raise NetworkConfigurationError("Input blackout applies to the network input only")
        mask = np.asarray(ablation.blackout_mask, dtype=bool)
        if mask.shape != x.shape[1:]:
            raise NetworkConfigurationError(
                f"Blackout mask shape {mask.shape} does not match input spatial shape {x.shape[1:]}"
            )
        x = np.where(mask[np.newaxis], np.float32(0), x)

    captured: Dict[str, Tensor] = {}
    logits: Optional[np.ndarray] = None
    layers = net.layers
    for index in range(start_index, len(layers)):
        layer = layers[index]
        if layer.kind == "softmax":
            logits = x.ravel().copy()
        x = _apply_layer(
            layer=layer,
            x=x,
        )
        if layer.kind == "conv" and layer.name in zeroed:
            x[zeroed[layer.name]] = 0
        if not np.isfinite(x).all():
            raise EngineNumericError(layer.name)
        if layer.name in capture_names and not _captured_after_next(
            layers=layers,
            index=index,
        ):
            captured[layer.name] = x
        if layer.kind == "relu" and index > 0:
            previous = layers[index - 1]
            if previous.kind == "conv" and previous.name in capture_names and index - 1 >= start_index:
                captured[previous.name] = x
    return ForwardResult(
        scores=x.ravel(),
        logits=logits,
        captured=captured,
    )


def layer_input(
    net: NetworkSpec,
    input: Tensor,
    layer_name: str,
    ablation: AblationSpec = NO_ABLATION,
) -> Tensor:
    """
    Get the tensor entering a layer.

    Args:
        net: a parameterized network
        input: the network input
        layer_name: a layer name
        ablation: filters to zero and input pixels to black out

    Returns:
        the input tensor of the layer
    """
    index = net.layer_index(layer_name)
    if index == 0:
        x = np.asarray(input, dtype=np.float32)
        if ablation.blackout_mask is not None:
            x = np.where(np.asarray(ablation.blackout_mask, dtype=bool)[np.newaxis], np.float32(0), x)
        return x
    previous = net.layers[index - 1].name
    result = forward(
        net=_truncated(net, index),
        input=input,
        ablation=ablation,
        capture=(previous,),
    )
    return result.captured[previous]


def _truncated(
    net: NetworkSpec,
    end: int,
) -> NetworkSpec:
    return NetworkSpec(
        input_shape=net.input_shape,
        layers=net.layers[:end],
    )


def _captured_after_next(
    layers: Tuple[LayerSpec, ...],
    index: int,
) -> bool:
    return layers[index].kind == "conv" and index + 1 < len(layers) and layers[index + 1].kind == "relu"


def _zeroed_filters(
    net: NetworkSpec,
    ablation: AblationSpec,
) -> Dict[str, np.ndarray]:
    zeroed: Dict[str, list] = {}
    for layer_name, filter_index in ablation.zero_filters:
        layer = net.layer(layer_name)
        if layer.kind != "conv":
            raise NetworkConfigurationError(f"Cannot zero filters of layer {repr(layer_name)} of kind {layer.kind}")
        if not 0 <= filter_index < layer.out_channels:
            raise NetworkConfigurationError(
                f"Layer {repr(layer_name)} has {layer.out_channels} filters ; cannot zero filter {filter_index}"
            )
        zeroed.setdefault(layer_name, []).append(filter_index)
    return {name: np.array(sorted(indices), dtype=np.intp) for name, indices in zeroed.items()}


def _apply_layer(
    layer: LayerSpec,
    x: Tensor,
) -> Tensor:
    if layer.kind == "conv":
        return _conv(layer, x)
    if layer.kind == "relu":
        return np.maximum(x, np.float32(0))
    if layer.kind == "maxpool":
        return _maxpool(layer, x)
    if layer.kind == "lrn":
        return _lrn(layer, x)
    if layer.kind == "fc":
        return _fc(layer, x)
    return _softmax(x)


def _conv(
    layer: LayerSpec,
    x: Tensor,
) -> Tensor:
    pad = layer.pad
    if pad:
        x = np.pad(x, ((0, 0), (pad, pad), (pad, pad)))
    windows = sliding_window_view(x, (layer.kernel, layer.kernel), axis=(1, 2))
    windows = windows[:, :: layer.stride, :: layer.stride]
    # (out, in, k, k) x (in, H, W, k, k) -> (out, H, W), accumulated in float64
    out = np.tensordot(
        np.asarray(layer.weights, dtype=np.float64),
        windows.astype(np.float64),
        axes=([1, 2, 3], [0, 3, 4]),
    )
    out += np.asarray(layer.bias, dtype=np.float64)[:, np.newaxis, np.newaxis]
    return out.astype(np.float32)


def _maxpool(
    layer: LayerSpec,
    x: Tensor,
) -> Tensor:
    windows = sliding_window_view(x, (layer.kernel, layer.kernel), axis=(1, 2))
    return windows[:, :: layer.stride, :: layer.stride].max(axis=(3, 4))


def _lrn(
    layer: LayerSpec,
    x: Tensor,
) -> Tensor:
    squares = np.square(x.astype(np.float64))
    half = layer.size // 2
    padded = np.pad(squares, ((half + 1, layer.size - half - 1), (0, 0), (0, 0)))
    cumulative = np.cumsum(padded, axis=0)
    # sum over channels [c - half, c - half + size)
    window_sums = cumulative[layer.size :] - cumulative[: -layer.size]
    scale = np.power(layer.k + layer.alpha * window_sums, layer.beta)
    return (x / scale).astype(np.float32)


def _fc(
    layer: LayerSpec,
    x: Tensor,
) -> Tensor:
    out = np.asarray(layer.weights, dtype=np.float64) @ x.ravel().astype(np.float64)
    out += np.asarray(layer.bias, dtype=np.float64)
    return out.astype(np.float32).reshape(-1, 1, 1)


def _softmax(
    x: Tensor,
) -> Tensor:
    values = x.ravel().astype(np.float64)
    exponentials = np.exp(values - values.max())
    return (exponentials / exponentials.sum()).astype(np.float32).reshape(x.shape)
