from typing import (
    Any,
    Dict,
    Sequence,
)

from filtersem.core.nn.spec import (
    NetworkSpec,
    network_spec_from_dict,
)
from filtersem.core.nn.weights import random_init


def toy_network_dict(
    side: int = 24,
    conv1_filters: int = 6,
    conv2_filters: int = 8,
    class_names: Sequence[str] = ("bicycle", "car", "face"),
) -> Dict[str, Any]:
    return {
        "input_shape": [3, side, side],
        "class_names": list(class_names),
        "layers": [
            {"name": "conv1", "kind": "conv", "out_channels": conv1_filters, "kernel": 5, "stride": 1, "pad": 2},
            {"name": "relu1", "kind": "relu"},
            {"name": "pool1", "kind": "maxpool", "kernel": 2},
            {"name": "conv2", "kind": "conv", "out_channels": conv2_filters, "kernel": 3, "stride": 1, "pad": 1},
            {"name": "relu2", "kind": "relu"},
            {"name": "pool2", "kind": "maxpool", "kernel": 2},
            {"name": "fc", "kind": "fc", "out_units": len(class_names)},
            {"name": "prob", "kind": "softmax"},
        ],
    }


def toy_network(
    seed: int = 0,
    side: int = 24,
) -> NetworkSpec:
    return random_init(
        net=network_spec_from_dict(
            toy_network_dict(
                side=side,
            )
        ),
        seed=seed,
    )
