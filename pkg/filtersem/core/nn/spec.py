"""Network specification: a linear chain of layers and its shape algebra."""
from __future__ import annotations

import json
from dataclasses import (
    dataclass,
    field,
    replace,
)
from typing import (
    Any,
    Dict,
    List,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from filtersem.core.nn.error import NetworkConfigurationError


Shape = Tuple[int, int, int]

LAYER_KINDS = (
    "conv",
    "relu",
    "maxpool",
    "lrn",
    "fc",
    "softmax",
)
PARAMETERIZED_KINDS = (
    "conv",
    "fc",
)
SPATIAL_KINDS = (
    "conv",
    "maxpool",
)
ELEMENTWISE_KINDS = (
    "relu",
    "lrn",
)


@dataclass(frozen=True, eq=False)
class LayerSpec:
    """
    A layer of the chain.

    Only the fields of the layer kind are meaningful:
    conv uses out_channels, kernel, stride and pad ; maxpool uses kernel and stride ;
    lrn uses size, alpha, beta and k ; fc uses out_units.
    """

    name: str
    kind: str
    out_channels: int = 0
    kernel: int = 1
    stride: int = 1
    pad: int = 0
    size: int = 5
    alpha: float = 1e-4
    beta: float = 0.75
    k: float = 2.0
    out_units: int = 0
    weights: Optional[np.ndarray] = field(default=None, repr=False)
    bias: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def is_parameterized(self) -> bool:
        """
        Check whether the layer carries weights and biases.

        Returns:
            True for conv and fc layers
        """
        return self.kind in PARAMETERIZED_KINDS


@dataclass(frozen=True, eq=False)
class NetworkSpec:
    """A feed-forward network: input shape, layer chain and output labels."""

    input_shape: Shape
    layers: Tuple[LayerSpec, ...]
    class_names: Tuple[str, ...] = ()
    _shapes: Tuple[Shape, ...] = field(default=(), init=False, repr=False)

    def __post_init__(self) -> None:
        """
        Check the chain and compute the output shape of every layer.

        Raises:
            NetworkConfigurationError: if the layers do not compose
        """
        object.__setattr__(self, "_shapes", tuple(_compute_shapes(self)))

    @property
    def output_shapes(self) -> Tuple[Shape, ...]:
        """
        Get the output shape of every layer.

        Returns:
            the shapes, in layer order
        """
        return self._shapes

    @property
    def is_parameterized(self) -> bool:
        """
        Check whether every conv and fc layer carries its weights.

        Returns:
            True if the network can be run
        """
        return all(layer.weights is not None for layer in self.layers if layer.is_parameterized)

    def layer_index(
        self,
        name: str,
    ) -> int:
        """
        Get the position of a layer in the chain.

        Args:
            name: a layer name

        Returns:
            the index of the layer

        Raises:
            NetworkConfigurationError: if no layer has this name
        """
        for index, layer in enumerate(self.layers):
            if layer.name == name:
                return index
        raise NetworkConfigurationError(f"Unknown layer {repr(name)}")

    def layer(
        self,
        name: str,
    ) -> LayerSpec:
        """
        Get a layer by name.

        Args:
            name: a layer name

        Returns:
            the layer
        """
        return self.layers[self.layer_index(name)]

    def input_shape_of(
        self,
        name: str,
    ) -> Shape:
        """
        Get the shape of the tensor entering a layer.

        Args:
            name: a layer name

        Returns:
            the input shape
        """
        index = self.layer_index(name)
        return self.input_shape if index == 0 else self._shapes[index - 1]

    def output_shape_of(
        self,
        name: str,
    ) -> Shape:
        """
        Get the shape of the tensor produced by a layer.

        Args:
            name: a layer name

        Returns:
            the output shape
        """
        return self._shapes[self.layer_index(name)]

    def conv_layer_names(self) -> List[str]:
        """
        Get the names of the conv layers, in chain order.

        Returns:
            the names
        """
        return [layer.name for layer in self.layers if layer.kind == "conv"]

    def parameter_shapes(
        self,
        name: str,
    ) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """
        Get the weight and bias shapes required by a layer.

        Args:
            name: a layer name

        Returns:
            the weight shape and the bias shape ; empty shapes for parameter-free layers
        """
        layer = self.layer(name)
        in_channels, in_height, in_width = self.input_shape_of(name)
        if layer.kind == "conv":
            return (layer.out_channels, in_channels, layer.kernel, layer.kernel), (layer.out_channels,)
        if layer.kind == "fc":
            return (layer.out_units, in_channels * in_height * in_width), (layer.out_units,)
        return (), ()

    def with_layer(
        self,
        layer: LayerSpec,
    ) -> NetworkSpec:
        """
        Get a copy of the network where the layer of the same name is replaced.

        Args:
            layer: the new layer

        Returns:
            the new network
        """
        index = self.layer_index(layer.name)
        layers = list(self.layers)
        layers[index] = layer
        return replace(
            self,
            layers=tuple(layers),
        )


def conv_output_size(
    size: int,
    kernel: int,
    stride: int,
    pad: int,
) -> int:
    """
    Get the spatial output size of a sliding window.

    Args:
        size: the input size
        kernel: the window size
        stride: the window step
        pad: the zero padding added on each side

    Returns:
        floor((size + 2 pad - kernel) / stride) + 1
    """
    return (size + 2 * pad - kernel) // stride + 1


def _compute_shapes(
    net: NetworkSpec,
) -> List[Shape]:
    if len(net.input_shape) != 3 or any(dimension < 1 for dimension in net.input_shape):
        raise NetworkConfigurationError(f"Invalid input shape {net.input_shape}")
    names = set()
    shapes: List[Shape] = []
    shape = tuple(net.input_shape)
    for layer in net.layers:
        if layer.name in names:
            raise NetworkConfigurationError(f"Duplicate layer name {repr(layer.name)}")
        names.add(layer.name)
        shape = _layer_output_shape(
            layer=layer,
            shape=shape,  # type: ignore
        )
        _check_parameters(
            layer=layer,
            input_shape=shapes[-1] if shapes else net.input_shape,
        )
        shapes.append(shape)  # type: ignore
    if net.layers and net.layers[-1].kind == "softmax" and net.class_names:
        outputs = int(np.prod(shapes[-1]))
        if outputs != len(net.class_names):
            raise NetworkConfigurationError(
                f"Layer {repr(net.layers[-1].name)} outputs {outputs} scores for {len(net.class_names)} class names"
            )
    return shapes


def _layer_output_shape(
    layer: LayerSpec,
    shape: Shape,
) -> Shape:
    channels, height, width = shape
    if layer.kind not in LAYER_KINDS:
        raise NetworkConfigurationError(f"Layer {repr(layer.name)} has unknown kind {repr(layer.kind)}")
    if layer.kind in SPATIAL_KINDS:
        if layer.kernel < 1 or layer.stride < 1 or layer.pad < 0:
            raise NetworkConfigurationError(
                f"Layer {repr(layer.name)} needs kernel >= 1, stride >= 1 and pad >= 0"
                + f" ; got kernel={layer.kernel}, stride={layer.stride}, pad={layer.pad}"
            )
        if layer.kind == "maxpool" and layer.pad != 0:
            raise NetworkConfigurationError(f"Layer {repr(layer.name)}: maxpool layers take no padding")
        if layer.kernel > min(height, width) + 2 * layer.pad:
            raise NetworkConfigurationError(
                f"Layer {repr(layer.name)}: kernel {layer.kernel} larger than its padded input {height}x{width}"
            )
        out_height = conv_output_size(height, layer.kernel, layer.stride, layer.pad)
        out_width = conv_output_size(width, layer.kernel, layer.stride, layer.pad)
        if layer.kind == "conv":
            if layer.out_channels < 1:
                raise NetworkConfigurationError(f"Layer {repr(layer.name)} needs out_channels >= 1")
            return layer.out_channels, out_height, out_width
        return channels, out_height, out_width
    if layer.kind == "lrn":
        if layer.size < 1:
            raise NetworkConfigurationError(f"Layer {repr(layer.name)} needs size >= 1")
        return shape
    if layer.kind == "fc":
        if layer.out_units < 1:
            raise NetworkConfigurationError(f"Layer {repr(layer.name)} needs out_units >= 1")
        return layer.out_units, 1, 1
    if layer.kind == "softmax" and (height, width) != (1, 1):
        raise NetworkConfigurationError(f"Layer {repr(layer.name)}: softmax expects a vector input, got {shape}")
    return shape


def _check_parameters(
    layer: LayerSpec,
    input_shape: Shape,
) -> None:
    if not layer.is_parameterized:
        if layer.weights is not None or layer.bias is not None:
            raise NetworkConfigurationError(f"Layer {repr(layer.name)} of kind {layer.kind} takes no parameters")
        return
    if layer.weights is None and layer.bias is None:
        return
    in_channels, in_height, in_width = input_shape
    if layer.kind == "conv":
        weight_shape = (layer.out_channels, in_channels, layer.kernel, layer.kernel)
        bias_shape = (layer.out_channels,)
    else:
        weight_shape = (layer.out_units, in_channels * in_height * in_width)
        bias_shape = (layer.out_units,)
    if layer.weights is None or layer.bias is None:
        raise NetworkConfigurationError(f"Layer {repr(layer.name)} needs both weights and bias")
    if layer.weights.shape != weight_shape or layer.bias.shape != bias_shape:
        raise NetworkConfigurationError(
            f"Layer {repr(layer.name)} expects weights {weight_shape} and bias {bias_shape}"
            + f" ; got {layer.weights.shape} and {layer.bias.shape}"
        )


_LAYER_FIELDS: Dict[str, Sequence[str]] = {
    "conv": ("out_channels", "kernel", "stride", "pad"),
    "maxpool": ("kernel", "stride"),
    "lrn": ("size", "alpha", "beta", "k"),
    "fc": ("out_units",),
    "relu": (),
    "softmax": (),
}


def network_spec_from_dict(
    data: Any,
) -> NetworkSpec:
    """
    Build a network specification from its JSON document.

    Args:
        data: the decoded JSON document

    Returns:
        the specification, without weights

    Raises:
        NetworkConfigurationError: if the document is malformed
    """
    if not isinstance(data, dict):
        raise NetworkConfigurationError(f"Expecting an object for the network specification ; got {type(data)}")
    try:
        input_shape = tuple(int(dimension) for dimension in data["input_shape"])
        class_names = tuple(str(name) for name in data.get("class_names", []))
        raw_layers = data["layers"]
    except (KeyError, TypeError, ValueError) as e:
        raise NetworkConfigurationError("Network specification needs input_shape and layers") from e
    if not isinstance(raw_layers, list) or not raw_layers:
        raise NetworkConfigurationError("Network specification needs a non-empty list of layers")
    layers = []
    for position, raw_layer in enumerate(raw_layers):
        layers.append(
            _layer_from_dict(
                position=position,
                data=raw_layer,
            )
        )
    return NetworkSpec(
        input_shape=input_shape,  # type: ignore
        layers=tuple(layers),
        class_names=class_names,
    )


def _layer_from_dict(
    position: int,
    data: Any,
) -> LayerSpec:
    if not isinstance(data, dict):
        raise NetworkConfigurationError(f"Layer #{position} must be an object")
    kind = data.get("kind")
    name = data.get("name")
    if kind not in _LAYER_FIELDS:
        raise NetworkConfigurationError(f"Layer #{position} has unknown kind {repr(kind)}")
    if not isinstance(name, str) or not name:
        raise NetworkConfigurationError(f"Layer #{position} needs a name")
    unknown = set(data) - {"kind", "name", *_LAYER_FIELDS[kind]}
    if unknown:
        raise NetworkConfigurationError(f"Layer {repr(name)} has unsupported fields {sorted(unknown)}")
    values: Dict[str, Any] = {}
    for field_name in _LAYER_FIELDS[kind]:
        if field_name in data:
            caster = float if field_name in ("alpha", "beta", "k") else int
            try:
                values[field_name] = caster(data[field_name])
            except (TypeError, ValueError) as e:
                raise NetworkConfigurationError(f"Layer {repr(name)}: invalid {field_name}") from e
    if kind == "maxpool" and "stride" not in values:
        values["stride"] = values.get("kernel", 1)
    return LayerSpec(
        name=name,
        kind=kind,
        **values,
    )


def network_spec_to_dict(
    net: NetworkSpec,
) -> Dict[str, Any]:
    """
    Get the JSON document of a network specification (weights excluded).

    Args:
        net: a network

    Returns:
        the document
    """
    layers = []
    for layer in net.layers:
        entry: Dict[str, Any] = {
            "name": layer.name,
            "kind": layer.kind,
        }
        for field_name in _LAYER_FIELDS[layer.kind]:
            entry[field_name] = getattr(layer, field_name)
        layers.append(entry)
    return {
        "input_shape": list(net.input_shape),
        "class_names": list(net.class_names),
        "layers": layers,
    }


def load_network_spec(
    path: str,
) -> NetworkSpec:
    """
    Load a network specification from a JSON file.

    Args:
        path: a file path

    Returns:
        the specification, without weights

    Raises:
        NetworkConfigurationError: if the file cannot be read or is malformed
    """
    try:
        with open(path, "r") as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise NetworkConfigurationError(f"Network specification {repr(path)} not found") from e
    except ValueError as e:
        raise NetworkConfigurationError(f"Network specification {repr(path)} is not valid JSON") from e
    return network_spec_from_dict(data)
