"""Part catalog: part-label merging and the discard rules for rare or tiny parts."""
import json
from dataclasses import (
    asdict,
    dataclass,
    field,
)
from pathlib import Path
from typing import (
    Dict,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from filtersem.core.corpus.error import CorpusError
from filtersem.core.corpus.model import (
    AnnotatedImage,
    PartAnnotation,
)


@dataclass(frozen=True)
class PartStats:
    """
    Statistics of a part class within an object class.

    `mean_size` is the mean of (width + height) / 2 in source pixels ; `normalized_size` is the mean part area divided
    by the mean area of the objects of the class.
    """

    object_class: str
    part_class: str
    count: int
    mean_size: float
    normalized_size: float
    retained: bool


@dataclass
class PartCatalog:
    """The part classes of every object class, retained or not."""

    min_samples: int
    min_size: float
    merges: Dict[str, str] = field(default_factory=dict)
    entries: List[PartStats] = field(default_factory=list)

    def retained(
        self,
        object_class: Optional[str] = None,
    ) -> List[PartStats]:
        """
        Get the retained part classes.

        Args:
            object_class: restrict to an object class

        Returns:
            the retained entries, in catalog order
        """
        return [
            entry
            for entry in self.entries
            if entry.retained and (object_class is None or entry.object_class == object_class)
        ]

    def object_classes(self) -> List[str]:
        """
        Get the object classes having at least one retained part class.

        Returns:
            the sorted object classes
        """
        return sorted({entry.object_class for entry in self.retained()})

    def is_retained(
        self,
        object_class: str,
        part_class: str,
    ) -> bool:
        """
        Check whether a part class of an object class is retained.

        Args:
            object_class: the object class
            part_class: the part class, after merging

        Returns:
            True if retained
        """
        return any(
            entry.object_class == object_class and entry.part_class == part_class for entry in self.retained()
        )

    def is_empty(self) -> bool:
        """
        Check whether no part class is retained.

        Returns:
            True if empty
        """
        return not self.retained()

    def normalized_sizes(self) -> Dict[str, float]:
        """
        Get the normalized size of every retained part class, keyed as "object/part".

        Returns:
            the sizes
        """
        return {f"{entry.object_class}/{entry.part_class}": entry.normalized_size for entry in self.retained()}

    def to_dict(self) -> Dict[str, object]:
        """
        Convert the catalog to its JSON form.

        Returns:
            the JSON-compatible catalog
        """
        return {
            "min_samples": self.min_samples,
            "min_size": self.min_size,
            "merges": dict(sorted(self.merges.items())),
            "entries": [asdict(entry) for entry in self.entries],
        }

    @classmethod
    def from_dict(
        cls,
        data: Mapping[str, object],
    ) -> "PartCatalog":
        """
        Build a catalog from its JSON form.

        Args:
            data: the JSON-compatible catalog

        Returns:
            the catalog

        Raises:
            CorpusError: if the data is malformed
        """
        try:
            return cls(
                min_samples=int(data["min_samples"]),  # type: ignore
                min_size=float(data["min_size"]),  # type: ignore
                merges={str(key): str(value) for key, value in dict(data.get("merges") or {}).items()},  # type: ignore
                entries=[PartStats(**entry) for entry in data["entries"]],  # type: ignore
            )
        except (KeyError, TypeError, ValueError) as e:
            raise CorpusError("Malformed part catalog") from e


def merged_class(
    part_class: str,
    merges: Mapping[str, str],
) -> str:
    """
    Get the class a part label is merged into.

    Args:
        part_class: a part label
        merges: the merge table

    Returns:
        the merged class, or the label itself
    """
    return merges.get(part_class, part_class)


def filter_catalog(
    images: Sequence[AnnotatedImage],
    merges: Optional[Mapping[str, str]] = None,
    min_samples: int = 10,
    min_size: float = 15.0,
    object_classes: Optional[Sequence[str]] = None,
) -> PartCatalog:
    """
    Count and measure the part classes of a corpus and apply the discard rules.

    A part class is discarded when it has at most `min_samples` instances or when its mean of (width + height) / 2 is
    at most `min_size` pixels.

    Args:
        images: the annotated images
        merges: a table mapping fine-grained part labels to the class they are merged into
        min_samples: the sample count a retained part class must exceed
        min_size: the mean size a retained part class must exceed
        object_classes: restrict the catalog to these object classes

    Returns:
        the catalog, sorted by object class then part class
    """
    merge_table = dict(merges or {})
    wanted = set(object_classes) if object_classes else None
    part_sizes: Dict[Tuple[str, str], List[Tuple[float, float]]] = {}
    object_areas: Dict[str, List[float]] = {}
    for image in images:
        for obj in image.objects:
            if wanted is None or obj.object_class in wanted:
                object_areas.setdefault(obj.object_class, []).append(obj.box.area)
        for part in image.parts:
            object_class = image.objects[part.parent].object_class
            if wanted is not None and object_class not in wanted:
                continue
            key = (object_class, merged_class(part.part_class, merge_table))
            part_sizes.setdefault(key, []).append((part.box.w, part.box.h))
    entries = []
    for (object_class, part_class), sizes in sorted(part_sizes.items()):
        dims = np.asarray(sizes, dtype=np.float64)
        mean_size = float(np.mean((dims[:, 0] + dims[:, 1]) / 2))
        mean_object_area = float(np.mean(object_areas[object_class]))
        entries.append(
            PartStats(
                object_class=object_class,
                part_class=part_class,
                count=len(sizes),
                mean_size=mean_size,
                normalized_size=float(np.mean(dims[:, 0] * dims[:, 1])) / mean_object_area,
                retained=len(sizes) > min_samples and mean_size > min_size,
            )
        )
    return PartCatalog(
        min_samples=min_samples,
        min_size=min_size,
        merges=merge_table,
        entries=entries,
    )


def apply_catalog(
    images: Sequence[AnnotatedImage],
    catalog: PartCatalog,
) -> List[AnnotatedImage]:
    """
    Rename merged parts and drop the parts of discarded classes.

    Filtering the result again with the same rules yields the same catalog.

    Args:
        images: the annotated images
        catalog: the catalog

    Returns:
        new images holding the retained parts only
    """
    filtered = []
    for image in images:
        parts = []
        for part in image.parts:
            part_class = merged_class(part.part_class, catalog.merges)
            if catalog.is_retained(image.objects[part.parent].object_class, part_class):
                parts.append(
                    PartAnnotation(
                        part_class=part_class,
                        parent=part.parent,
                        box=part.box,
                        mask=part.mask,
                    )
                )
        filtered.append(
            AnnotatedImage(
                image_id=image.image_id,
                image=image.image,
                objects=list(image.objects),
                parts=parts,
            )
        )
    return filtered


def save_catalog(
    path: Path,
    catalog: PartCatalog,
) -> Path:
    """
    Write a catalog as JSON.

    Args:
        path: the destination file
        catalog: the catalog

    Returns:
        the path of the written file
    """
    path.parent.mkdir(
        parents=True,
        exist_ok=True,
    )
    path.write_text(
        json.dumps(
            catalog.to_dict(),
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )
    return path


def load_catalog(
    path: Path,
) -> PartCatalog:
    """
    Read a catalog.

    Args:
        path: the JSON file

    Returns:
        the catalog

    Raises:
        CorpusError: if the file cannot be read
    """
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        raise CorpusError(f"Unable to read part catalog {path}") from e
    if not isinstance(data, dict):
        raise CorpusError(f"Part catalog {path} is not a JSON object")
    return PartCatalog.from_dict(data)
