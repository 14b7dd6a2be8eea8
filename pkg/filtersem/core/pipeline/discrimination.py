"""Models and functions used for measuring how discriminative filters and parts are."""
import math
from pathlib import Path
from typing import (
    Any,
    Dict,
    List,
    Mapping,
    Optional,
    Sequence,
    Set,
)

from filtersem.core.configuration.root import RootConfiguration
from filtersem.core.discrim.correlation import (
    SMALL_SAMPLE,
    CorrelationReport,
    ppmcc,
)
from filtersem.core.discrim.error import (
    DiscrimError,
    UndefinedCorrelationError,
)
from filtersem.core.discrim.export import (
    discrim_rows,
    write_correlations,
    write_discrim_table,
)
from filtersem.core.discrim.scores import (
    DiscrimScore,
    layer_discrim,
    object_part_discrims,
)
from filtersem.core.pipeline.error import PipelineError
from filtersem.core.pipeline.inputs import (
    analyzed_layers,
    class_indices,
    prepare_corpus,
    prepare_network,
)
from filtersem.core.pipeline.listener import (
    NoOpPipelineListener,
    PipelineDiscrimEvent,
    PipelineEndEvent,
    PipelineEvent,
    PipelineListener,
    PipelineStartEvent,
    PipelineWarningEvent,
)
from filtersem.core.pipeline.manifest import (
    create_manifest,
    write_manifest,
)
from filtersem.core.pipeline.pipeline import SUMMARY_FILE
from filtersem.core.pipeline.results import (
    SUMMARY_COLUMNS,
    write_json,
)
from filtersem.core.pool import WorkerPool
from filtersem.core.table import (
    Row,
    read_table,
    write_table,
)


DISCRIM_DIRECTORY = "discrim"
FILTERS_FILE = "filters.csv"
PARTS_FILE = "parts.csv"
DISCRIM_SUMMARY_FILE = "summary.json"
CORRELATIONS_FILE = "correlations.json"
PARTS_VS_AP_FILE = "parts_vs_ap.csv"

PARTS_VS_AP_COLUMNS = (
    "object_class",
    "part_class",
    "normalized_size",
    "ap",
    "delta",
)

_CORRELATED_SERIES = (
    ("ap", "size"),
    ("delta", "size"),
    ("delta", "ap"),
)


def _is_blank(value: Any) -> bool:
    return value is None or value == "" or (isinstance(value, float) and math.isnan(value))


def part_aps(
    rows: Sequence[Row],
) -> Dict[str, float]:
    """
    Get the AP of every part class in the deepest analyzed layer of a summary table.

    The AP is the one of the GA combination, or the one of the best single filter when the search was disabled.

    Args:
        rows: the rows of a summary table, in layer order

    Returns:
        the AP of each "object/part" name
    """
    if not rows:
        return {}
    layer = str(rows[-1]["layer"])
    aps = {}
    for row in rows:
        if str(row["layer"]) != layer:
            continue
        key = f"{row['object_class']}/{row['part_class']}"
        aps[key] = float(row["best_ap"] if _is_blank(row["ga_ap"]) else row["ga_ap"])
    return aps


def correlation_reports(
    aps: Mapping[str, float],
    sizes: Mapping[str, float],
    deltas: Mapping[str, float],
) -> List[CorrelationReport]:
    """
    Correlate per-part AP, normalized size and delta two by two over the part classes known to the three series.

    Pairs whose correlation is undefined are left out.

    Args:
        aps: the AP of each part class
        sizes: the normalized size of each part class
        deltas: the delta of each part class

    Returns:
        the defined AP/size, delta/size and delta/AP correlations

    Raises:
        DiscrimError: if no part class is known to the three series
    """
    keys = sorted(set(aps) & set(sizes) & set(deltas))
    if not keys:
        raise DiscrimError("No part class has an AP, a size and a delta")
    series = {
        "ap": [aps[key] for key in keys],
        "size": [sizes[key] for key in keys],
        "delta": [deltas[key] for key in keys],
    }
    reports = []
    for x, y in _CORRELATED_SERIES:
        try:
            value = ppmcc(series[x], series[y])
        except UndefinedCorrelationError:
            continue
        reports.append(
            CorrelationReport(
                x=x,
                y=y,
                value=value,
                n=len(keys),
                small_sample=len(keys) < SMALL_SAMPLE,
            )
        )
    return reports


class DiscriminationStudy:
    """A class measuring filter and part discriminativeness next to the results of a pipeline run."""

    _configuration: RootConfiguration
    _listener: PipelineListener

    def __init__(
        self,
        configuration: RootConfiguration,
        listener: Optional[PipelineListener] = None,
    ):
        """
        Initialize self.

        Args:
            configuration: the run configuration ; its output directory holds the pipeline results
            listener: an observer receiving the study events
        """
        self._configuration = configuration
        self._listener = listener or NoOpPipelineListener()

    def run(self) -> Path:
        """
        Ablate every filter of the studied layers and black out every part, then correlate the results.

        Returns:
            the directory of the discrimination results

        Raises:
            PipelineError: if the pipeline results are missing
            DiscrimError: if no part class can be scored
        """
        configuration = self._configuration
        output = Path(configuration.require_output())
        summary_path = output / SUMMARY_FILE
        if not summary_path.is_file():
            raise PipelineError(f"No pipeline results in {output} ; run the pipeline first")
        directory = output / DISCRIM_DIRECTORY
        write_manifest(
            directory=directory,
            manifest=create_manifest(
                command="discrim",
                configuration=configuration,
                outputs=[
                    FILTERS_FILE,
                    PARTS_FILE,
                    DISCRIM_SUMMARY_FILE,
                    CORRELATIONS_FILE,
                    PARTS_VS_AP_FILE,
                ],
            ),
        )
        self._send_event(
            PipelineStartEvent(
                command="discrim",
                output=directory,
            )
        )
        aps = part_aps(
            read_table(
                path=summary_path,
                columns=SUMMARY_COLUMNS,
            )
        )
        discrim = configuration.discrim
        filter_rows: List[Row] = []
        part_rows: List[Row] = []
        part_deltas: Dict[str, float] = {}
        distinct: Dict[str, Set[int]] = {}
        counts: Dict[str, Dict[str, int]] = {}
        with WorkerPool(configuration.workers) as pool:
            net = prepare_network(configuration)
            corpus = prepare_corpus(
                configuration=configuration,
                net=net,
                pool=pool,
            )
            layers = analyzed_layers(
                net=net,
                layers=list(discrim.layers or configuration.stimulus.layers or []),
            )
            object_classes = corpus.catalog.object_classes()
            indices = class_indices(
                net=net,
                object_classes=object_classes,
            )
            for object_class in object_classes:
                crops = corpus.crops_of(object_class)
                images = [corpus.crops[index].tensor for index in crops]
                discriminative = 0
                for layer in layers:
                    scores = layer_discrim(
                        net=net,
                        images=images,
                        class_index=indices[object_class],
                        layer=layer,
                        score_mode=discrim.score_mode,
                        sigma_factor=discrim.sigma_factor,
                        pool=pool,
                    )
                    filter_rows.extend(discrim_rows(object_class, scores))
                    selected = [
                        int(score.filter) for score in scores if score.is_discriminative and score.filter is not None
                    ]
                    counts.setdefault(layer, {})[object_class] = len(selected)
                    distinct.setdefault(layer, set()).update(selected)
                    discriminative += len(selected)
                parts = object_part_discrims(
                    net=net,
                    images=images,
                    masks_by_part={
                        entry.part_class: corpus.part_masks(
                            object_class=object_class,
                            part_class=entry.part_class,
                        )
                        for entry in corpus.catalog.retained(object_class)
                    },
                    class_index=indices[object_class],
                    score_mode=discrim.score_mode,
                    sigma_factor=discrim.sigma_factor,
                    pool=pool,
                )
                part_rows.extend(discrim_rows(object_class, parts))
                part_deltas.update(self._part_deltas(object_class, parts))
                self._send_event(
                    PipelineDiscrimEvent(
                        object_class=object_class,
                        discriminative_filters=discriminative,
                        parts=len(parts),
                    )
                )
        if not part_deltas:
            raise DiscrimError("No part class to score ; the corpus has no retained part")
        write_discrim_table(
            path=directory / FILTERS_FILE,
            rows=filter_rows,
        )
        write_discrim_table(
            path=directory / PARTS_FILE,
            rows=part_rows,
        )
        write_json(
            path=directory / DISCRIM_SUMMARY_FILE,
            data={
                "score_mode": discrim.score_mode,
                "sigma_factor": discrim.sigma_factor,
                "layers": [
                    {
                        "layer": layer,
                        "discriminative_filters": counts.get(layer, {}),
                        "distinct_filters": sorted(distinct.get(layer, set())),
                    }
                    for layer in layers
                ],
            },
        )
        sizes = corpus.catalog.normalized_sizes()
        reports = correlation_reports(
            aps=aps,
            sizes=sizes,
            deltas=part_deltas,
        )
        self._check_correlations(reports)
        write_correlations(
            path=directory / CORRELATIONS_FILE,
            reports=reports,
        )
        write_table(
            path=directory / PARTS_VS_AP_FILE,
            rows=[
                {
                    "object_class": key.split("/", 1)[0],
                    "part_class": key.split("/", 1)[1],
                    "normalized_size": sizes.get(key, ""),
                    "ap": aps.get(key, ""),
                    "delta": delta,
                }
                for key, delta in sorted(part_deltas.items())
            ],
            columns=PARTS_VS_AP_COLUMNS,
        )
        self._send_event(
            PipelineEndEvent(
                command="discrim",
                output=directory,
            )
        )
        return directory

    @staticmethod
    def _part_deltas(
        object_class: str,
        scores: Sequence[DiscrimScore],
    ) -> Dict[str, float]:
        return {f"{object_class}/{score.part_class}": score.delta for score in scores}

    def _check_correlations(
        self,
        reports: Sequence[CorrelationReport],
    ) -> None:
        found = {(report.x, report.y) for report in reports}
        for x, y in _CORRELATED_SERIES:
            if (x, y) not in found:
                self._warn(f"The {x}/{y} correlation is undefined (a series has no variance)")
        if reports and reports[0].small_sample:
            self._warn(f"Correlations over {reports[0].n} part classes only")

    def _warn(
        self,
        message: str,
    ) -> None:
        self._send_event(
            PipelineWarningEvent(
                message=message,
            )
        )

    def _send_event(
        self,
        event: PipelineEvent,
    ) -> None:
        self._listener.on_event(event)
