"""Weight file reading/writing and seeded initialization."""
from dataclasses import replace
from typing import (
    BinaryIO,
    List,
)

import numpy as np

from filtersem.core.nn.error import (
    NetworkConfigurationError,
    WeightFormatError,
    WeightSizeError,
)
from filtersem.core.nn.spec import (
    LayerSpec,
    NetworkSpec,
)


MAGIC = b"FSW1"
_COUNT_DTYPE = np.dtype("<u4")
_VALUE_DTYPE = np.dtype("<f4")


def _expected_count(
    net: NetworkSpec,
    layer: LayerSpec,
) -> int:
    weight_shape, bias_shape = net.parameter_shapes(layer.name)
    return int(np.prod(weight_shape, dtype=np.int64)) + int(np.prod(bias_shape, dtype=np.int64)) if weight_shape else 0


def save_weights(
    net: NetworkSpec,
    stream: BinaryIO,
) -> None:
    """
    Write the weights of a network.

    The layout is the magic, then for every layer in chain order a little-endian uint32 count
    followed by that many little-endian float32 values (weights then bias) ; count is 0 for
    parameter-free layers.

    Args:
        net: a fully parameterized network
        stream: a binary stream

    Raises:
        NetworkConfigurationError: if the network lacks weights
    """
    if not net.is_parameterized:
        raise NetworkConfigurationError("Cannot save the weights of a network without weights")
    stream.write(MAGIC)
    for layer in net.layers:
        if not layer.is_parameterized:
            stream.write(np.array([0], dtype=_COUNT_DTYPE).tobytes())
            continue
        values = np.concatenate(
            [
                np.asarray(layer.weights).ravel(),
                np.asarray(layer.bias).ravel(),
            ]
        ).astype(_VALUE_DTYPE)
        stream.write(np.array([values.size], dtype=_COUNT_DTYPE).tobytes())
        stream.write(values.tobytes())


def load_weights(
    net: NetworkSpec,
    stream: BinaryIO,
) -> NetworkSpec:
    """
    Read the weights of a network.

    Args:
        net: a network specification
        stream: a binary stream

    Returns:
        the fully parameterized network

    Raises:
        WeightFormatError: if the file is truncated, has trailing data or a bad magic
        WeightSizeError: if a layer count does not match the specification
    """
    data = stream.read()
    if data[: len(MAGIC)] != MAGIC:
        raise WeightFormatError(f"Bad weight file magic {data[:len(MAGIC)]!r} ; expecting {MAGIC!r}")
    offset = len(MAGIC)
    layers: List[LayerSpec] = []
    for layer in net.layers:
        if len(data) - offset < _COUNT_DTYPE.itemsize:
            raise WeightFormatError(f"Weight file truncated before layer {repr(layer.name)}")
        count = int(np.frombuffer(data, dtype=_COUNT_DTYPE, count=1, offset=offset)[0])
        offset += _COUNT_DTYPE.itemsize
        expected = _expected_count(
            net=net,
            layer=layer,
        )
        if count != expected:
            raise WeightSizeError(
                layer=layer.name,
                expected=expected,
                actual=count,
            )
        size = count * _VALUE_DTYPE.itemsize
        if len(data) - offset < size:
            raise WeightFormatError(f"Weight file truncated inside layer {repr(layer.name)}")
        values = np.frombuffer(data, dtype=_VALUE_DTYPE, count=count, offset=offset).astype(np.float32)
        offset += size
        layers.append(
            _with_values(
                net=net,
                layer=layer,
                values=values,
            )
        )
    if offset != len(data):
        raise WeightFormatError(f"Weight file has {len(data) - offset} trailing bytes")
    return replace(
        net,
        layers=tuple(layers),
    )


def _with_values(
    net: NetworkSpec,
    layer: LayerSpec,
    values: np.ndarray,
) -> LayerSpec:
    if not layer.is_parameterized:
        return layer
    weight_shape, bias_shape = net.parameter_shapes(layer.name)
    split = int(np.prod(weight_shape))
    return replace(
        layer,
        weights=values[:split].reshape(weight_shape),
        bias=values[split:].reshape(bias_shape),
    )


def random_init(
    net: NetworkSpec,
    seed: int,
) -> NetworkSpec:
    """
    Initialize every conv and fc layer from a seeded zero-mean uniform distribution.

    Values are drawn in [-1/sqrt(fan_in), 1/sqrt(fan_in)] with fan_in the number of inputs of a unit.

    Args:
        net: a network specification
        seed: a seed

    Returns:
        the parameterized network
    """
    rng = np.random.default_rng(seed)
    layers = []
    for layer in net.layers:
        if not layer.is_parameterized:
            layers.append(layer)
            continue
        weight_shape, bias_shape = net.parameter_shapes(layer.name)
        fan_in = int(np.prod(weight_shape[1:]))
        bound = 1.0 / np.sqrt(fan_in)
        layers.append(
            replace(
                layer,
                weights=rng.uniform(-bound, bound, size=weight_shape).astype(np.float32),
                bias=rng.uniform(-bound, bound, size=bias_shape).astype(np.float32),
            )
        )
    return replace(
        net,
        layers=tuple(layers),
    )


def zero_filter(
    net: NetworkSpec,
    layer_name: str,
    filter_index: int,
) -> NetworkSpec:
    """
    Get a copy of the network where the weights and bias of one conv filter are zero.

    Args:
        net: a parameterized network
        layer_name: a conv layer name
        filter_index: the filter index

    Returns:
        the modified network

    Raises:
        NetworkConfigurationError: if the filter does not exist
    """
    layer = net.layer(layer_name)
    if layer.kind != "conv" or layer.weights is None or layer.bias is None:
        raise NetworkConfigurationError(f"Layer {repr(layer_name)} is not a parameterized conv layer")
    if not 0 <= filter_index < layer.out_channels:
        raise NetworkConfigurationError(f"Layer {repr(layer_name)} has no filter {filter_index}")
    weights = layer.weights.copy()
    bias = layer.bias.copy()
    weights[filter_index] = 0
    bias[filter_index] = 0
    return net.with_layer(
        replace(
            layer,
            weights=weights,
            bias=bias,
        )
    )
