"""Run inputs: the parameterized network and the cropped, filtered corpus."""
from dataclasses import dataclass
from pathlib import Path
from typing import (
    Dict,
    List,
    Optional,
    Tuple,
)

import numpy as np

from filtersem.core.configuration.root import RootConfiguration
from filtersem.core.corpus.catalog import (
    PartCatalog,
    apply_catalog,
    filter_catalog,
)
from filtersem.core.corpus.crop import (
    CropSpec,
    ObjectCrop,
    crop_object,
)
from filtersem.core.corpus.io import load_corpus
from filtersem.core.corpus.model import AnnotatedImage
from filtersem.core.nn.inject import inject_matched_filter
from filtersem.core.nn.spec import (
    NetworkSpec,
    load_network_spec,
)
from filtersem.core.nn.weights import (
    load_weights,
    random_init,
)
from filtersem.core.pipeline.error import PipelineError
from filtersem.core.pool import WorkerPool


def prepare_network(
    configuration: RootConfiguration,
) -> NetworkSpec:
    """
    Load the network of a run, its weights and its matched-filter injections.

    Weights are read from the configured file, or drawn from the run seed when none is configured.

    Args:
        configuration: the run configuration

    Returns:
        the parameterized network

    Raises:
        PipelineError: if no network is configured
        NetworkConfigurationError: if the network or an injection is invalid
        WeightFormatError: if the weight file is malformed
    """
    network = configuration.network
    if network is None or not network.spec:
        raise PipelineError("No network specification configured (network.spec)")
    net = load_network_spec(network.spec)
    if network.weights:
        try:
            with open(network.weights, "rb") as f:
                net = load_weights(
                    net=net,
                    stream=f,
                )
        except FileNotFoundError as e:
            raise PipelineError(f"Weight file {repr(network.weights)} not found") from e
    else:
        net = random_init(
            net=net,
            seed=configuration.seed,
        )
    for injection in network.inject or []:
        net = inject_matched_filter(
            net=net,
            layer_name=injection.layer,
            filter_index=injection.filter,
            pattern=injection.pattern,
            channel=injection.channel,
            size=injection.size,
            gain=injection.gain,
        )
    return net


def analyzed_layers(
    net: NetworkSpec,
    layers: Optional[List[str]],
) -> List[str]:
    """
    Get the conv layers a run analyzes.

    Args:
        net: the network
        layers: the configured layers ; every conv layer when empty

    Returns:
        the layer names, in network order

    Raises:
        PipelineError: if a configured layer is not a conv layer of the network
    """
    conv_layers = net.conv_layer_names()
    if not layers:
        return conv_layers
    unknown = [name for name in layers if name not in conv_layers]
    if unknown:
        raise PipelineError(f"Not conv layers of the network: {', '.join(unknown)}")
    return [name for name in conv_layers if name in layers]


def crop_spec(
    configuration: RootConfiguration,
    net: NetworkSpec,
) -> CropSpec:
    """
    Get the crop specification matching the network input.

    Args:
        configuration: the run configuration
        net: the network

    Returns:
        the specification

    Raises:
        PipelineError: if the network does not take RGB images
    """
    channels, height, width = net.input_shape
    if channels != 3:
        raise PipelineError(f"The network takes {channels} channels ; crops are RGB")
    corpus = configuration.corpus
    return CropSpec(
        context_pad=corpus.context_pad,
        target_size=(width, height),
        absolute_pad=None if corpus.absolute_pad is None else float(corpus.absolute_pad),
    )


@dataclass
class PreparedCorpus:
    """The filtered corpus of a run and its object crops, in image then object order."""

    images: List[AnnotatedImage]
    catalog: PartCatalog
    crops: List[ObjectCrop]

    @property
    def crop_ids(self) -> List[str]:
        """
        Get the id of every crop.

        Returns:
            the ids, in crop order
        """
        return [crop.crop_id for crop in self.crops]

    def crops_of(
        self,
        object_class: str,
    ) -> List[int]:
        """
        Get the crops of an object class.

        Args:
            object_class: the object class

        Returns:
            the crop indices, in crop order
        """
        return [index for index, crop in enumerate(self.crops) if crop.object_class == object_class]

    def part_instances(
        self,
        object_class: str,
        part_class: str,
    ) -> Tuple[np.ndarray, np.ndarray]:
        """
        Get the instances of a part in the crops of its object class.

        Args:
            object_class: the object class
            part_class: the part class

        Returns:
            the (m,) crop index and the (m, 4) crop-space box of every instance
        """
        images = []
        boxes = []
        for index in self.crops_of(object_class):
            for part in self.crops[index].parts:
                if part.part_class == part_class:
                    images.append(index)
                    boxes.append(part.box.as_list())
        return np.asarray(images, dtype=np.intp), np.asarray(boxes, dtype=np.float64).reshape(-1, 4)

    def part_masks(
        self,
        object_class: str,
        part_class: str,
    ) -> List[Optional[np.ndarray]]:
        """
        Get the mask of a part in each crop of its object class.

        Args:
            object_class: the object class
            part_class: the part class

        Returns:
            the union of the instance masks of each crop, None when the crop has no instance
        """
        masks: List[Optional[np.ndarray]] = []
        for index in self.crops_of(object_class):
            instances = [part.mask for part in self.crops[index].parts if part.part_class == part_class]
            masks.append(np.logical_or.reduce(instances) if instances else None)
        return masks


def prepare_corpus(
    configuration: RootConfiguration,
    net: NetworkSpec,
    pool: Optional[WorkerPool] = None,
) -> PreparedCorpus:
    """
    Load the corpus of a run, apply the part catalog and crop every object of a retained class.

    Args:
        configuration: the run configuration
        net: the network the crops are fed to
        pool: a pool reading and cropping in parallel

    Returns:
        the prepared corpus

    Raises:
        PipelineError: if no corpus is configured
        CorpusError: if the corpus is malformed
    """
    corpus = configuration.corpus
    if corpus is None or not corpus.path:
        raise PipelineError("No corpus directory configured (corpus.path)")
    raw = load_corpus(
        directory=Path(corpus.path),
        pool=pool,
    )
    catalog = filter_catalog(
        images=raw,
        merges=dict(corpus.merges or {}),
        min_samples=corpus.min_samples,
        min_size=corpus.min_size,
        object_classes=list(corpus.object_classes or []),
    )
    images = apply_catalog(
        images=raw,
        catalog=catalog,
    )
    spec = crop_spec(
        configuration=configuration,
        net=net,
    )
    retained_classes = set(catalog.object_classes())
    tasks = [
        (image, index)
        for image in images
        for index, obj in enumerate(image.objects)
        if obj.object_class in retained_classes
    ]

    def _crop(task: Tuple[AnnotatedImage, int]) -> ObjectCrop:
        return crop_object(
            img=task[0],
            object_index=task[1],
            spec=spec,
        )

    crops = pool.map(_crop, tasks) if pool is not None else [_crop(task) for task in tasks]
    return PreparedCorpus(
        images=images,
        catalog=catalog,
        crops=crops,
    )


def class_indices(
    net: NetworkSpec,
    object_classes: List[str],
) -> Dict[str, int]:
    """
    Get the network output of every object class.

    Args:
        net: the network
        object_classes: the object classes

    Returns:
        the output index of each class

    Raises:
        PipelineError: if a class is not an output of the network
    """
    names = list(net.class_names)
    missing = [name for name in object_classes if name not in names]
    if missing:
        raise PipelineError(f"Object classes without a network output: {', '.join(missing)}")
    return {name: names.index(name) for name in object_classes}
