import json
import tempfile
import unittest
from dataclasses import replace
from pathlib import Path
from typing import (
    Any,
    Dict,
    List,
    Optional,
)

import numpy as np

from filtersem.core.corpus.catalog import filter_catalog
from filtersem.core.corpus.model import AnnotatedImage
from filtersem.core.corpus.synthetic import (
    ObjectLayout,
    PartLayout,
    SyntheticLayout,
    generate_synthetic,
)
from filtersem.core.discrim.correlation import correlate_emergence
from filtersem.core.discrim.error import DiscrimError
from filtersem.core.discrim.export import DISCRIM_COLUMNS
from filtersem.core.discrim.scores import part_discrim
from filtersem.core.evaluation.matching import evaluate_arrays
from filtersem.core.nn.inject import inject_matched_filter
from filtersem.core.nn.spec import (
    NetworkSpec,
    network_spec_from_dict,
)
from filtersem.core.nn.weights import random_init
from filtersem.core.pipeline.discrimination import (
    PARTS_VS_AP_COLUMNS,
    DiscriminationStudy,
    correlation_reports,
    part_aps,
)
from filtersem.core.pipeline.error import PipelineError
from filtersem.core.pipeline.manifest import read_manifest
from filtersem.core.pipeline.pipeline import Pipeline
from filtersem.core.table import read_table
from filtersem.tests.runs import (
    RecordingPipelineListener,
    run_configuration,
)


class TestPartAps(unittest.TestCase):
    def test_deepest_layer(self) -> None:
        rows = [
            {"layer": "conv1", "object_class": "car", "part_class": "wheel", "best_ap": 0.1, "ga_ap": 0.2},
            {"layer": "conv2", "object_class": "car", "part_class": "wheel", "best_ap": 0.3, "ga_ap": 0.4},
            {"layer": "conv2", "object_class": "face", "part_class": "eye", "best_ap": 0.5, "ga_ap": float("nan")},
        ]
        self.assertEqual({"car/wheel": 0.4, "face/eye": 0.5}, part_aps(rows))

    def test_empty(self) -> None:
        self.assertEqual({}, part_aps([]))


class TestCorrelationReports(unittest.TestCase):
    def test_common_parts(self) -> None:
        reports = correlation_reports(
            aps={"a": 0.1, "b": 0.5, "c": 0.9, "d": 0.3},
            sizes={"a": 1.0, "b": 2.0, "c": 3.0},
            deltas={"a": 0.3, "b": 0.2, "c": 0.1, "e": 0.0},
        )
        self.assertEqual(3, len(reports))
        self.assertTrue(all(report.n == 3 for report in reports))
        self.assertAlmostEqual(1.0, reports[0].value)

    def test_undefined_pairs_are_skipped(self) -> None:
        reports = correlation_reports(
            aps={"a": 0.1, "b": 0.5, "c": 0.9},
            sizes={"a": 1.0, "b": 2.0, "c": 3.0},
            deltas={"a": 0.2, "b": 0.2, "c": 0.2},
        )
        self.assertEqual([("ap", "size")], [(report.x, report.y) for report in reports])

    def test_no_common_part(self) -> None:
        with self.assertRaises(DiscrimError):
            correlation_reports(
                aps={"a": 0.1},
                sizes={"b": 1.0},
                deltas={"a": 0.3},
            )


class TestDiscriminationStudy(unittest.TestCase):
    def test_requires_pipeline_results(self) -> None:
        with tempfile.TemporaryDirectory() as directory:
            with self.assertRaises(PipelineError):
                DiscriminationStudy(configuration=run_configuration(Path(directory))).run()

    def test_run(self) -> None:
        with tempfile.TemporaryDirectory() as directory:
            configuration = run_configuration(
                Path(directory),
                discrim={"layers": ["conv2"], "sigma_factor": 1.0},
            )
            Pipeline(configuration=configuration).run()
            listener = RecordingPipelineListener()
            output = DiscriminationStudy(
                configuration=configuration,
                listener=listener,
            ).run()
            filters = read_table(
                path=output / "filters.csv",
                columns=DISCRIM_COLUMNS,
            )
            parts = read_table(
                path=output / "parts.csv",
                columns=DISCRIM_COLUMNS,
            )
            versus = read_table(
                path=output / "parts_vs_ap.csv",
                columns=PARTS_VS_AP_COLUMNS,
            )
            summary = json.loads((output / "summary.json").read_text(encoding="utf-8"))
            correlations = json.loads((output / "correlations.json").read_text(encoding="utf-8"))
            manifest = read_manifest(output)
        self.assertEqual("discrim", output.name)
        self.assertEqual("discrim", manifest.command)
        self.assertGreater(len(filters), 0)
        self.assertEqual(0, len(filters) % 8)
        self.assertTrue(all(row["layer"] == "conv2" for row in filters))
        self.assertGreater(len(parts), 0)
        self.assertEqual(len(parts), len(versus))
        self.assertEqual(1.0, summary["sigma_factor"])
        self.assertEqual(["conv2"], [entry["layer"] for entry in summary["layers"]])
        self.assertLessEqual(len(correlations), 3)
        expected_warnings = 3 - len(correlations) + (1 if len(parts) < 3 and correlations else 0)
        self.assertEqual(expected_warnings, len(listener.warnings))


def _network(
    layers: List[Dict[str, Any]],
    class_names: List[str],
) -> NetworkSpec:
    return random_init(
        net=network_spec_from_dict(
            {
                "input_shape": [3, 24, 24],
                "class_names": class_names,
                "layers": layers,
            }
        ),
        seed=0,
    )


def _with_parameters(
    net: NetworkSpec,
    name: str,
    weights: np.ndarray,
    bias: np.ndarray,
) -> NetworkSpec:
    return net.with_layer(
        replace(
            net.layer(name),
            weights=weights.astype(np.float32),
            bias=bias.astype(np.float32),
        )
    )


def _ring_classifier() -> NetworkSpec:
    # the bicycle logit is the strongest ring response of the crop
    net = _network(
        layers=[
            {"name": "conv1", "kind": "conv", "out_channels": 1, "kernel": 5, "stride": 1, "pad": 2},
            {"name": "relu1", "kind": "relu"},
            {"name": "pool1", "kind": "maxpool", "kernel": 24, "stride": 24},
            {"name": "fc", "kind": "fc", "out_units": 2},
        ],
        class_names=["bicycle", "other"],
    )
    net = inject_matched_filter(
        net=net,
        layer_name="conv1",
        filter_index=0,
        pattern="ring",
        channel=2,
    )
    return _with_parameters(
        net=net,
        name="fc",
        weights=np.array([[4.0], [0.0]]),
        bias=np.zeros(2),
    )


def _brightness_classifier() -> NetworkSpec:
    # the plate logit is the mean of the third channel
    net = _network(
        layers=[
            {"name": "conv1", "kind": "conv", "out_channels": 1, "kernel": 1, "stride": 1, "pad": 0},
            {"name": "relu1", "kind": "relu"},
            {"name": "fc", "kind": "fc", "out_units": 2},
        ],
        class_names=["plate", "other"],
    )
    net = _with_parameters(
        net=net,
        name="conv1",
        weights=np.array([0.0, 0.0, 1.0]).reshape(1, 3, 1, 1),
        bias=np.zeros(1),
    )
    return _with_parameters(
        net=net,
        name="fc",
        weights=np.stack([np.full(24 * 24, 1 / (24 * 24)), np.zeros(24 * 24)]),
        bias=np.zeros(2),
    )


def _masks(
    images: List[AnnotatedImage],
    part_class: str,
) -> List[Optional[np.ndarray]]:
    masks: List[Optional[np.ndarray]] = []
    for image in images:
        instances = [part.mask for part in image.parts if part.part_class == part_class]
        masks.append(np.logical_or.reduce(instances) if instances else None)
    return masks


class TestPartDiscriminativeness(unittest.TestCase):
    def test_planted_part_beats_decoy(self) -> None:
        layout = SyntheticLayout(
            objects={
                "bicycle": ObjectLayout(
                    parts={
                        "wheel": PartLayout(pattern="ring", channel=2, x=0.3, y=0.7, size=0.21),
                        "saddle": PartLayout(pattern="bar", channel=1, x=0.5, y=0.25, size=0.21),
                    },
                    min_size=1.0,
                    max_size=1.0,
                ),
            },
            image_size=24,
        )
        net = _ring_classifier()
        runs = 20
        wins = 0
        for seed in range(runs):
            images = generate_synthetic(
                seed=seed,
                n_images=8,
                layout=layout,
            )
            tensors = [image.image for image in images]
            wheel, saddle = (
                part_discrim(
                    net=net,
                    images=tensors,
                    masks=_masks(images, part_class),
                    class_index=0,
                    part_class=part_class,
                    score_mode="logit",
                )
                for part_class in ("wheel", "saddle")
            )
            if wheel.delta > saddle.delta:
                wins += 1
        self.assertGreaterEqual(wins / runs, 0.95)

    def test_correlations_positive_on_monotone_parts(self) -> None:
        # square parts from 5 to 12 px ; detections are shifted by 2 px so only large parts are found
        layout = SyntheticLayout(
            objects={
                "plate": ObjectLayout(
                    parts={
                        "a": PartLayout(pattern="square", channel=2, x=0.15, y=0.15, size=0.2, jitter=0.0),
                        "b": PartLayout(pattern="square", channel=2, x=0.8, y=0.2, size=0.3, jitter=0.0),
                        "c": PartLayout(pattern="square", channel=2, x=0.25, y=0.75, size=0.4, jitter=0.0),
                        "d": PartLayout(pattern="square", channel=2, x=0.72, y=0.72, size=0.5, jitter=0.0),
                    },
                    min_size=1.0,
                    max_size=1.0,
                ),
            },
            image_size=24,
        )
        images = generate_synthetic(
            seed=3,
            n_images=6,
            layout=layout,
        )
        catalog = filter_catalog(
            images=images,
            min_samples=1,
            min_size=0.0,
        )
        net = _brightness_classifier()
        reports = {}
        discrims = {}
        for part_class in ("a", "b", "c", "d"):
            key = f"plate/{part_class}"
            gt_images = np.array(
                [index for index, image in enumerate(images) for part in image.parts if part.part_class == part_class]
            )
            gt_boxes = np.array(
                [part.box.as_list() for image in images for part in image.parts if part.part_class == part_class]
            )
            reports[key] = evaluate_arrays(
                images=gt_images,
                boxes=gt_boxes + np.array([2.0, 2.0, 0.0, 0.0]),
                scores=np.ones(len(gt_images)),
                gt_images=gt_images,
                gt_boxes=gt_boxes,
                part_class=key,
            )
            discrims[key] = part_discrim(
                net=net,
                images=[image.image for image in images],
                masks=_masks(images, part_class),
                class_index=0,
                part_class=key,
                score_mode="logit",
            )
        correlations = correlate_emergence(
            eval_reports=reports,
            part_sizes=catalog.normalized_sizes(),
            part_discrims=discrims,
        )
        self.assertEqual([("ap", "size"), ("delta", "size"), ("delta", "ap")], [(c.x, c.y) for c in correlations])
        for correlation in correlations:
            self.assertGreater(correlation.value, 0.0, (correlation.x, correlation.y))
            self.assertEqual(4, correlation.n)
