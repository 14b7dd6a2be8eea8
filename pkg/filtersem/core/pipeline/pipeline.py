"""Models and functions used for running the part-detector analysis of a network."""
from dataclasses import dataclass
from pathlib import Path
from typing import (
    Any,
    Dict,
    List,
    Optional,
    Sequence,
)

import numpy as np

from filtersem.core.configuration.root import RootConfiguration
from filtersem.core.corpus.catalog import save_catalog
from filtersem.core.evaluation.report import write_curves
from filtersem.core.nn.spec import NetworkSpec
from filtersem.core.pipeline.inputs import (
    PreparedCorpus,
    analyzed_layers,
    prepare_corpus,
    prepare_network,
)
from filtersem.core.pipeline.listener import (
    NoOpPipelineListener,
    PipelineCorpusEvent,
    PipelineEndEvent,
    PipelineEvent,
    PipelineLayerEvent,
    PipelineListener,
    PipelinePartEvent,
    PipelineStartEvent,
    PipelineWarningEvent,
)
from filtersem.core.pipeline.manifest import (
    create_manifest,
    write_manifest,
)
from filtersem.core.pipeline.results import (
    PER_FILTER_COLUMNS,
    SHARING_COLUMNS,
    SUMMARY_COLUMNS,
    TOP_FILTERS_COLUMNS,
    join_filters,
    layer_summary,
    part_stem,
    per_filter_rows,
    sharing_rows,
    slug,
    summary_row,
    write_json,
)
from filtersem.core.pipeline.study import (
    LayerActivations,
    PartDetections,
    PartResult,
    analyze_part,
    extract_activations,
    layer_detections,
    part_detections,
    top_activations,
)
from filtersem.core.pool import WorkerPool
from filtersem.core.regression.bank import save_bank
from filtersem.core.selection.baselines import top_filters
from filtersem.core.selection.export import (
    write_chromosome,
    write_ga_log,
)
from filtersem.core.selection.fitness import CombinationEvaluator
from filtersem.core.selection.ga import GAConfig
from filtersem.core.selection.listener import GAListener
from filtersem.core.stimulus.detection import write_detections
from filtersem.core.table import (
    Row,
    write_table,
)


CATALOG_FILE = "catalog.json"
SUMMARY_FILE = "summary.csv"
SUMMARY_JSON_FILE = "summary.json"
PER_FILTER_FILE = "per_filter.csv"
SHARING_FILE = "sharing.csv"
TOP_K_FILE = "topk.json"
TOP_FILTERS_FILE = "topfilters.csv"
GA_DIRECTORY = "ga"
CURVES_DIRECTORY = "curves"
REGRESSORS_DIRECTORY = "regressors"
DETECTIONS_DIRECTORY = "detections"


@dataclass(frozen=True)
class PartTask:
    """A part class analyzed in a layer ; `index` numbers the tasks of a full run and seeds its search."""

    index: int
    layer: str
    object_class: str
    part_class: str

    @property
    def key(self) -> str:
        """
        Get the "object/part" name of the part class.

        Returns:
            the name
        """
        return f"{self.object_class}/{self.part_class}"


@dataclass
class _Prepared:
    net: NetworkSpec
    corpus: PreparedCorpus
    layers: List[str]
    activations: Dict[str, LayerActivations]


@dataclass
class _PartInputs:
    detections: PartDetections
    gt_images: np.ndarray
    gt_boxes: np.ndarray
    n_filters: int


def search_seed(
    seed: int,
    index: int,
) -> int:
    """
    Derive the seed of the search of a task from the run seed.

    Args:
        seed: the run seed
        index: the task index

    Returns:
        the search seed
    """
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


class Pipeline:
    """A class running the analysis of a network over an annotated corpus."""

    _configuration: RootConfiguration
    _listener: PipelineListener
    _ga_listener: Optional[GAListener]

    def __init__(
        self,
        configuration: RootConfiguration,
        listener: Optional[PipelineListener] = None,
        ga_listener: Optional[GAListener] = None,
    ):
        """
        Initialize self.

        Args:
            configuration: the run configuration
            listener: an observer receiving the run events
            ga_listener: an observer receiving the events of every genetic search
        """
        self._configuration = configuration
        self._listener = listener or NoOpPipelineListener()
        self._ga_listener = ga_listener

    def run(self) -> Path:
        """
        Analyze every part class in every layer and write the results.

        Returns:
            the output directory
        """
        configuration = self._configuration
        output = self._start(
            command="pipeline",
            outputs=[
                CATALOG_FILE,
                SUMMARY_FILE,
                SUMMARY_JSON_FILE,
                PER_FILTER_FILE,
                SHARING_FILE,
                TOP_K_FILE,
                GA_DIRECTORY,
                CURVES_DIRECTORY,
                REGRESSORS_DIRECTORY,
            ]
            + ([DETECTIONS_DIRECTORY] if configuration.evaluation.export_detections else []),
        )
        with WorkerPool(configuration.workers) as pool:
            prepared = self._prepare(
                output=output,
                pool=pool,
            )
            tasks = self._tasks(prepared)
            results_by_layer: Dict[str, List[PartResult]] = {layer: [] for layer in prepared.layers}
            summary_rows: List[Row] = []
            filter_rows: List[Row] = []
            for layer in prepared.layers:
                regressors = []
                skipped = 0
                for task in [task for task in tasks if task.layer == layer]:
                    inputs = self._part_inputs(
                        prepared=prepared,
                        task=task,
                    )
                    result = self._analyze(
                        task=task,
                        inputs=inputs,
                        pool=pool,
                        search=configuration.ga.enabled,
                    )
                    regressors.extend(inputs.detections.regressors)
                    skipped += len(inputs.detections.skipped)
                    results_by_layer[layer].append(result)
                    summary_rows.append(summary_row(result))
                    filter_rows.extend(per_filter_rows(result))
                    self._write_part(
                        output=output,
                        result=result,
                    )
                save_bank(
                    path=output / REGRESSORS_DIRECTORY / f"{slug(layer)}.json",
                    regressors=regressors,
                )
                if skipped and configuration.regression.enabled:
                    self._warn(
                        f"Layer {layer}: {skipped} (filter, part) pairs had fewer than "
                        + f"{configuration.regression.min_pairs} training pairs and keep receptive-field boxes"
                    )
                if configuration.evaluation.export_detections:
                    write_detections(
                        path=output / DETECTIONS_DIRECTORY / f"{slug(layer)}.csv",
                        layer=layer,
                        detections=layer_detections(
                            net=prepared.net,
                            activations=prepared.activations[layer],
                        ),
                        image_ids=prepared.corpus.crop_ids,
                    )
        write_table(
            path=output / SUMMARY_FILE,
            rows=summary_rows,
            columns=SUMMARY_COLUMNS,
        )
        write_table(
            path=output / PER_FILTER_FILE,
            rows=filter_rows,
            columns=PER_FILTER_COLUMNS,
        )
        write_table(
            path=output / SHARING_FILE,
            rows=[row for layer in prepared.layers for row in sharing_rows(layer, results_by_layer[layer])],
            columns=SHARING_COLUMNS,
        )
        write_json(
            path=output / SUMMARY_JSON_FILE,
            data={
                "parts": len(prepared.corpus.catalog.retained()),
                "layers": [layer_summary(layer, results_by_layer[layer]) for layer in prepared.layers],
            },
        )
        write_json(
            path=output / TOP_K_FILE,
            data=self._top_k_records(prepared),
        )
        self._send_event(
            PipelineEndEvent(
                command="pipeline",
                output=output,
            )
        )
        return output

    def run_ga(
        self,
        layers: Sequence[str] = (),
        parts: Sequence[str] = (),
    ) -> Path:
        """
        Run the genetic search only, for some layers and part classes.

        Args:
            layers: the layers ; every analyzed layer when empty
            parts: "object/part" names ; every retained part class when empty

        Returns:
            the output directory
        """
        output = self._start(
            command="ga",
            outputs=[
                CATALOG_FILE,
                SUMMARY_FILE,
                GA_DIRECTORY,
            ],
        )
        rows = []
        with WorkerPool(self._configuration.workers) as pool:
            prepared = self._prepare(
                output=output,
                pool=pool,
            )
            for task in self._tasks(prepared, layers, parts):
                result = self._analyze(
                    task=task,
                    inputs=self._part_inputs(
                        prepared=prepared,
                        task=task,
                    ),
                    pool=pool,
                    search=True,
                )
                rows.append(summary_row(result))
                self._write_search(
                    output=output,
                    result=result,
                )
        write_table(
            path=output / SUMMARY_FILE,
            rows=rows,
            columns=SUMMARY_COLUMNS,
        )
        self._send_event(
            PipelineEndEvent(
                command="ga",
                output=output,
            )
        )
        return output

    def run_top_filters(
        self,
        max_filters: int,
        layers: Sequence[str] = (),
        parts: Sequence[str] = (),
    ) -> Path:
        """
        Score the combinations of the n best single filters, for n from 1 to `max_filters`.

        Args:
            max_filters: the largest combination ; capped by the number of filters of each layer
            layers: the layers ; every analyzed layer when empty
            parts: "object/part" names ; every retained part class when empty

        Returns:
            the output directory
        """
        output = self._start(
            command="topfilters",
            outputs=[
                CATALOG_FILE,
                TOP_FILTERS_FILE,
            ],
        )
        rows = []
        with WorkerPool(self._configuration.workers) as pool:
            prepared = self._prepare(
                output=output,
                pool=pool,
            )
            for task in self._tasks(prepared, layers, parts):
                inputs = self._part_inputs(
                    prepared=prepared,
                    task=task,
                )
                result = self._analyze(
                    task=task,
                    inputs=inputs,
                    pool=pool,
                    search=False,
                )
                evaluator = self._evaluator(
                    task=task,
                    inputs=inputs,
                    pool=pool,
                )
                for n in range(1, min(max_filters, result.per_filter_aps.shape[0]) + 1):
                    chromosome = top_filters(
                        per_filter_aps=result.per_filter_aps.tolist(),
                        n=n,
                    )
                    rows.append(
                        {
                            "layer": task.layer,
                            "object_class": task.object_class,
                            "part_class": task.part_class,
                            "n": n,
                            "filters": join_filters(chromosome.filters),
                            "ap": evaluator.fitness(chromosome.bits),
                        }
                    )
        write_table(
            path=output / TOP_FILTERS_FILE,
            rows=rows,
            columns=TOP_FILTERS_COLUMNS,
        )
        self._send_event(
            PipelineEndEvent(
                command="topfilters",
                output=output,
            )
        )
        return output

    def _start(
        self,
        command: str,
        outputs: List[str],
    ) -> Path:
        output = Path(self._configuration.require_output())
        write_manifest(
            directory=output,
            manifest=create_manifest(
                command=command,
                configuration=self._configuration,
                outputs=outputs,
            ),
        )
        self._send_event(
            PipelineStartEvent(
                command=command,
                output=output,
            )
        )
        return output

    def _prepare(
        self,
        output: Path,
        pool: WorkerPool,
    ) -> _Prepared:
        configuration = self._configuration
        net = prepare_network(configuration)
        corpus = prepare_corpus(
            configuration=configuration,
            net=net,
            pool=pool,
        )
        save_catalog(
            path=output / CATALOG_FILE,
            catalog=corpus.catalog,
        )
        self._send_event(
            PipelineCorpusEvent(
                images=len(corpus.images),
                crops=len(corpus.crops),
                object_classes=len(corpus.catalog.object_classes()),
                part_classes=len(corpus.catalog.retained()),
            )
        )
        if corpus.catalog.is_empty():
            self._warn("No part class passes the catalog rules ; the report is empty")
        layers = analyzed_layers(
            net=net,
            layers=list(configuration.stimulus.layers or []),
        )
        activations = extract_activations(
            net=net,
            crops=corpus.crops,
            layers=layers,
            min_value=configuration.stimulus.min_value,
            pool=pool,
        )
        for layer in layers:
            self._send_event(
                PipelineLayerEvent(
                    layer=layer,
                    filters=activations[layer].n_filters,
                    activations=len(activations[layer].maxima),
                )
            )
        return _Prepared(
            net=net,
            corpus=corpus,
            layers=layers,
            activations=activations,
        )

    def _tasks(
        self,
        prepared: _Prepared,
        layers: Sequence[str] = (),
        parts: Sequence[str] = (),
    ) -> List[PartTask]:
        tasks = []
        for layer in prepared.layers:
            for entry in prepared.corpus.catalog.retained():
                tasks.append(
                    PartTask(
                        index=len(tasks),
                        layer=layer,
                        object_class=entry.object_class,
                        part_class=entry.part_class,
                    )
                )
        unknown_layers = [layer for layer in layers if layer not in prepared.layers]
        unknown_parts = [part for part in parts if part not in {task.key for task in tasks}]
        for name in unknown_layers + unknown_parts:
            self._warn(f"Nothing to analyze for {repr(name)}")
        return [
            task
            for task in tasks
            if (not layers or task.layer in layers) and (not parts or task.key in parts)
        ]

    def _ga_config(
        self,
        task: PartTask,
    ) -> GAConfig:
        ga = self._configuration.ga
        return GAConfig(
            population=ga.population,
            generations=ga.generations,
            crossover_p=ga.crossover_p,
            mutation_p=ga.mutation_p,
            init_p=ga.init_p,
            elitism=ga.elitism,
            crossover=ga.crossover,
            rng_seed=search_seed(
                seed=self._configuration.seed,
                index=task.index,
            ),
        )

    def _part_inputs(
        self,
        prepared: _Prepared,
        task: PartTask,
    ) -> _PartInputs:
        regression = self._configuration.regression
        gt_images, gt_boxes = prepared.corpus.part_instances(
            object_class=task.object_class,
            part_class=task.part_class,
        )
        detections = part_detections(
            net=prepared.net,
            activations=prepared.activations[task.layer],
            crops=prepared.corpus.crops_of(task.object_class),
            gt_images=gt_images,
            gt_boxes=gt_boxes,
            part_key=task.key,
            regression=regression.enabled,
            min_pairs=regression.min_pairs,
            ridge=regression.ridge,
        )
        return _PartInputs(
            detections=detections,
            gt_images=gt_images,
            gt_boxes=gt_boxes,
            n_filters=prepared.activations[task.layer].n_filters,
        )

    def _analyze(
        self,
        task: PartTask,
        inputs: _PartInputs,
        pool: WorkerPool,
        search: bool,
    ) -> PartResult:
        configuration = self._configuration
        result = analyze_part(
            detections=inputs.detections,
            n_filters=inputs.n_filters,
            gt_images=inputs.gt_images,
            gt_boxes=inputs.gt_boxes,
            layer=task.layer,
            object_class=task.object_class,
            part_class=task.part_class,
            iou_threshold=configuration.evaluation.iou_threshold,
            nms_threshold=configuration.stimulus.nms_threshold,
            ga_config=self._ga_config(task) if search else None,
            ap_threshold=configuration.evaluation.ap_threshold,
            recall_threshold=configuration.evaluation.recall_threshold,
            curve_filters=configuration.evaluation.curve_filters,
            pool=pool,
            listener=self._ga_listener,
        )
        self._send_event(
            PipelinePartEvent(
                layer=task.layer,
                object_class=task.object_class,
                part_class=task.part_class,
                best_filter=result.best_filter,
                best_ap=result.best_ap,
                ga_ap=None if result.ga is None else float(result.ga.best.fitness or 0.0),
                ga_filters=None if result.ga is None else len(result.ga_filters),
            )
        )
        return result

    def _evaluator(
        self,
        task: PartTask,
        inputs: _PartInputs,
        pool: WorkerPool,
    ) -> CombinationEvaluator:
        return CombinationEvaluator(
            detections=inputs.detections.regressed,
            n_filters=inputs.n_filters,
            gt_images=inputs.gt_images,
            gt_boxes=inputs.gt_boxes,
            part_class=task.key,
            iou_threshold=self._configuration.evaluation.iou_threshold,
            nms_threshold=self._configuration.stimulus.nms_threshold,
            pool=pool,
        )

    def _write_search(
        self,
        output: Path,
        result: PartResult,
    ) -> None:
        if result.ga is None:
            return
        stem = output / GA_DIRECTORY / slug(result.layer) / part_stem(result.object_class, result.part_class)
        write_ga_log(
            path=stem.with_suffix(".csv"),
            log=result.ga.log,
        )
        write_chromosome(
            path=stem.with_suffix(".json"),
            chromosome=result.ga.best,
            layer=result.layer,
            part_class=result.key,
        )

    def _write_part(
        self,
        output: Path,
        result: PartResult,
    ) -> None:
        self._write_search(
            output=output,
            result=result,
        )
        directory = output / CURVES_DIRECTORY / slug(result.layer) / part_stem(result.object_class, result.part_class)
        for j, report in result.curve_reports.items():
            write_curves(
                path=directory / f"filter_{j}.csv",
                report=report,
            )
        if result.ga_report is not None:
            write_curves(
                path=directory / "ga.csv",
                report=result.ga_report,
            )

    def _top_k_records(
        self,
        prepared: _Prepared,
    ) -> Dict[str, Any]:
        k = self._configuration.export.top_k
        corpus = prepared.corpus
        layers: Dict[str, List[Dict[str, Any]]] = {}
        for layer in prepared.layers:
            activations = prepared.activations[layer]
            records = []
            for object_class in corpus.catalog.object_classes():
                crops = corpus.crops_of(object_class)
                for j in range(activations.n_filters):
                    records.append(
                        {
                            "filter": j,
                            "object_class": object_class,
                            "entries": [
                                {
                                    "crop_id": corpus.crops[top.crop].crop_id,
                                    "value": top.value,
                                    "c": top.c,
                                    "r": top.r,
                                }
                                for top in top_activations(
                                    activations=activations,
                                    crops=crops,
                                    filter_index=j,
                                    k=k,
                                )
                            ],
                        }
                    )
            layers[layer] = records
        return {
            "k": k,
            "layers": layers,
        }

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
