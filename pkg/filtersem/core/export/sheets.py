"""Models and functions used for exporting the top activations of filters as image sheets."""
import math
from dataclasses import dataclass
from pathlib import Path
from typing import (
    Any,
    Dict,
    List,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np
from PIL import (
    Image,
    ImageDraw,
)

from filtersem.core.configuration.root import RootConfiguration
from filtersem.core.corpus.model import to_uint8
from filtersem.core.export.error import ExportError
from filtersem.core.export.listener import (
    ExportEndEvent,
    ExportEvent,
    ExportListener,
    ExportSheetEvent,
    ExportStartEvent,
    ExportWarningEvent,
    NoOpExportListener,
)
from filtersem.core.geometry.receptive_field import receptive_field
from filtersem.core.nn.engine import forward
from filtersem.core.nn.spec import NetworkSpec
from filtersem.core.pipeline.inputs import (
    prepare_corpus,
    prepare_network,
)
from filtersem.core.pipeline.manifest import (
    create_manifest,
    write_manifest,
)
from filtersem.core.pipeline.pipeline import TOP_K_FILE
from filtersem.core.pipeline.results import (
    read_json,
    slug,
)
from filtersem.core.pool import WorkerPool


SHEETS_DIRECTORY = "sheets"
SHEET_GAP = 2
MARKER_RADIUS = 3
MARKER_COLOR = (255, 0, 0)
GAP_COLOR = (255, 255, 255)


@dataclass(frozen=True)
class Panel:
    """A crop and the feature map of the exported filter on it."""

    crop_id: str
    tensor: np.ndarray
    feature_map: np.ndarray
    peak: float
    peak_position: Tuple[int, int]


def upsample(
    feature_map: np.ndarray,
    size: Tuple[int, int],
) -> np.ndarray:
    """
    Resize a feature map to an image size with bilinear interpolation.

    Args:
        feature_map: a (height, width) map
        size: the (width, height) of the image

    Returns:
        the (height, width) resized map
    """
    image = Image.fromarray(np.ascontiguousarray(feature_map, dtype=np.float32))
    return np.asarray(image.resize(size, resample=Image.Resampling.BILINEAR), dtype=np.float64)


def overlay(
    tensor: np.ndarray,
    feature_map: np.ndarray,
    scale: float,
    shade: float = 0.0,
) -> np.ndarray:
    """
    Shade a crop where a filter does not respond.

    Each pixel keeps a fraction t of the crop and takes 1 - t of the shade level, t being the upsampled activation
    divided by `scale` and clipped to [0, 1].

    Args:
        tensor: a (3, height, width) crop
        feature_map: the (h, w) feature map of the filter on the crop
        scale: the activation shown without shade ; the panel is fully shaded when not positive
        shade: the gray level of the shade

    Returns:
        the (3, height, width) panel
    """
    _, height, width = tensor.shape
    if scale <= 0:
        t = np.zeros((height, width), dtype=np.float64)
    else:
        t = np.clip(upsample(feature_map, (width, height)) / scale, 0.0, 1.0)
    return tensor * t[None, :, :] + shade * (1.0 - t[None, :, :])


def mark(
    pixels: np.ndarray,
    center: Tuple[float, float],
) -> np.ndarray:
    """
    Draw a square marker on an image.

    Args:
        pixels: a (height, width, 3) uint8 image
        center: the (x, y) center of the marker

    Returns:
        the marked image
    """
    image = Image.fromarray(pixels)
    x, y = center
    ImageDraw.Draw(image).rectangle(
        (x - MARKER_RADIUS, y - MARKER_RADIUS, x + MARKER_RADIUS, y + MARKER_RADIUS),
        outline=MARKER_COLOR,
    )
    return np.asarray(image)


def compose(
    tiles: Sequence[np.ndarray],
    columns: int,
) -> np.ndarray:
    """
    Arrange same-size tiles in a grid.

    Args:
        tiles: (height, width, 3) uint8 images, in reading order
        columns: the number of columns

    Returns:
        the (height, width, 3) uint8 sheet
    """
    height, width, _ = tiles[0].shape
    columns = min(columns, len(tiles))
    rows = math.ceil(len(tiles) / columns)
    sheet = np.empty(
        (rows * height + (rows - 1) * SHEET_GAP, columns * width + (columns - 1) * SHEET_GAP, 3),
        dtype=np.uint8,
    )
    sheet[...] = GAP_COLOR
    for index, tile in enumerate(tiles):
        top = (index // columns) * (height + SHEET_GAP)
        left = (index % columns) * (width + SHEET_GAP)
        sheet[top : top + height, left : left + width] = tile
    return sheet


def render_sheet(
    net: NetworkSpec,
    layer: str,
    panels: Sequence[Panel],
    columns: int,
    shade: float = 0.0,
) -> np.ndarray:
    """
    Render the panels of a filter, strongest first, on a common activation scale.

    Args:
        net: the network
        layer: the layer of the filter
        panels: the panels
        columns: the number of columns of the sheet
        shade: the gray level shown where the filter does not respond

    Returns:
        the (height, width, 3) uint8 sheet
    """
    scale = max((panel.peak for panel in panels), default=0.0)
    tiles = []
    for panel in sorted(panels, key=lambda p: -p.peak):
        pixels = to_uint8(
            overlay(
                tensor=panel.tensor,
                feature_map=panel.feature_map,
                scale=scale,
                shade=shade,
            )
        )
        c, r = panel.peak_position
        tiles.append(
            mark(
                pixels=pixels,
                center=receptive_field(
                    net=net,
                    layer=layer,
                    c=c,
                    r=r,
                ).center,
            )
        )
    return compose(
        tiles=tiles,
        columns=columns,
    )


def sheet_path(
    directory: Path,
    layer: str,
    object_class: str,
    filter_index: int,
) -> Path:
    """
    Get the file of a sheet.

    Args:
        directory: the sheets directory
        layer: the layer
        object_class: the object class
        filter_index: the filter

    Returns:
        the path
    """
    return directory / slug(layer) / f"{slug(object_class)}__filter_{filter_index}.ppm"


class SheetExporter:
    """A class writing the top activation sheets of a pipeline run."""

    _configuration: RootConfiguration
    _listener: ExportListener

    def __init__(
        self,
        configuration: RootConfiguration,
        listener: Optional[ExportListener] = None,
    ):
        """
        Initialize self.

        Args:
            configuration: the run configuration ; its output directory holds the pipeline results
            listener: an observer receiving the export events
        """
        self._configuration = configuration
        self._listener = listener or NoOpExportListener()

    def run(
        self,
        k: Optional[int] = None,
    ) -> Path:
        """
        Write one sheet per (layer, filter, object class) with the crops where the filter responds the most.

        Args:
            k: the panels per sheet ; `export.top_k` by default

        Returns:
            the sheets directory

        Raises:
            ExportError: if a record names an unknown crop
            DataError: if the pipeline results are missing
        """
        configuration = self._configuration
        output = Path(configuration.require_output())
        records: Dict[str, Any] = read_json(output / TOP_K_FILE)
        k = k or configuration.export.top_k
        directory = output / SHEETS_DIRECTORY
        write_manifest(
            directory=directory,
            manifest=create_manifest(
                command="export-topk",
                configuration=configuration,
                outputs=sorted(slug(layer) for layer in records.get("layers", {})),
            ),
        )
        self._send_event(
            ExportStartEvent(
                layers=len(records.get("layers", {})),
                k=k,
            )
        )
        if k > int(records.get("k", k)):
            self._warn(f"The pipeline kept {records['k']} activations per filter ; {k} were requested")
        sheets = 0
        with WorkerPool(configuration.workers) as pool:
            net = prepare_network(configuration)
            corpus = prepare_corpus(
                configuration=configuration,
                net=net,
                pool=pool,
            )
            crop_indices = {crop_id: index for index, crop_id in enumerate(corpus.crop_ids)}
            for layer, layer_records in records.get("layers", {}).items():
                needed = sorted({entry["crop_id"] for record in layer_records for entry in record["entries"]})
                unknown = [crop_id for crop_id in needed if crop_id not in crop_indices]
                if unknown:
                    raise ExportError(f"Crops {', '.join(unknown)} of layer {repr(layer)} are not in the corpus")

                def _maps(crop_id: str) -> np.ndarray:
                    return forward(
                        net=net,
                        input=corpus.crops[crop_indices[crop_id]].tensor,
                        capture=[layer],
                    ).captured[layer]

                maps = dict(zip(needed, pool.map(_maps, needed)))
                for record in layer_records:
                    entries = record["entries"][:k]
                    if not entries:
                        continue
                    if len(entries) < k:
                        self._warn(
                            f"Layer {layer}, filter {record['filter']}, class {record['object_class']}: "
                            + f"{len(entries)} crops available, {k} requested"
                        )
                    panels = self._panels(
                        entries=entries,
                        filter_index=int(record["filter"]),
                        maps=maps,
                        crop_tensors={
                            entry["crop_id"]: corpus.crops[crop_indices[entry["crop_id"]]].tensor for entry in entries
                        },
                    )
                    path = sheet_path(
                        directory=directory,
                        layer=layer,
                        object_class=record["object_class"],
                        filter_index=int(record["filter"]),
                    )
                    path.parent.mkdir(
                        parents=True,
                        exist_ok=True,
                    )
                    Image.fromarray(
                        render_sheet(
                            net=net,
                            layer=layer,
                            panels=panels,
                            columns=configuration.export.columns,
                            shade=configuration.export.shade,
                        )
                    ).save(path, format="PPM")
                    sheets += 1
                    self._send_event(
                        ExportSheetEvent(
                            layer=layer,
                            filter=int(record["filter"]),
                            object_class=record["object_class"],
                            panels=len(panels),
                            path=path,
                        )
                    )
        self._send_event(
            ExportEndEvent(
                sheets=sheets,
            )
        )
        return directory

    @staticmethod
    def _panels(
        entries: Sequence[Dict[str, Any]],
        filter_index: int,
        maps: Dict[str, np.ndarray],
        crop_tensors: Dict[str, np.ndarray],
    ) -> List[Panel]:
        panels = []
        for entry in entries:
            feature_map = np.asarray(maps[entry["crop_id"]][filter_index], dtype=np.float64)
            r, c = np.unravel_index(int(np.argmax(feature_map)), feature_map.shape)
            panels.append(
                Panel(
                    crop_id=entry["crop_id"],
                    tensor=crop_tensors[entry["crop_id"]],
                    feature_map=feature_map,
                    peak=float(feature_map[r, c]),
                    peak_position=(int(c), int(r)),
                )
            )
        return panels

    def _warn(
        self,
        message: str,
    ) -> None:
        self._send_event(
            ExportWarningEvent(
                message=message,
            )
        )

    def _send_event(
        self,
        event: ExportEvent,
    ) -> None:
        self._listener.on_event(event)
