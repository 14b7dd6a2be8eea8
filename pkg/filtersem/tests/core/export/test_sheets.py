import tempfile
import unittest
from pathlib import Path
from typing import List

import numpy as np
from PIL import Image

from filtersem.core.exceptions import DataError
from filtersem.core.export.listener import (
    ExportEndEvent,
    ExportEvent,
    ExportListener,
    ExportSheetEvent,
    ExportWarningEvent,
)
from filtersem.core.export.sheets import (
    GAP_COLOR,
    MARKER_COLOR,
    SHEET_GAP,
    Panel,
    SheetExporter,
    compose,
    mark,
    overlay,
    render_sheet,
    sheet_path,
    upsample,
)
from filtersem.core.pipeline.manifest import read_manifest
from filtersem.core.pipeline.pipeline import Pipeline
from filtersem.tests.networks import toy_network
from filtersem.tests.runs import run_configuration


class RecordingListener(ExportListener):
    events: List[ExportEvent]

    def __init__(self) -> None:
        self.events = []

    def on_event(
        self,
        event: ExportEvent,
    ) -> None:
        self.events.append(event)


class TestOverlay(unittest.TestCase):
    def test_zero_activation_is_fully_shaded(self) -> None:
        tensor = np.random.default_rng(0).random((3, 8, 8))
        panel = overlay(
            tensor=tensor,
            feature_map=np.zeros((4, 4)),
            scale=0.0,
            shade=0.25,
        )
        np.testing.assert_allclose(np.full((3, 8, 8), 0.25), panel)

    def test_peak_is_unshaded(self) -> None:
        tensor = np.random.default_rng(0).random((3, 4, 4))
        panel = overlay(
            tensor=tensor,
            feature_map=np.full((4, 4), 2.0),
            scale=2.0,
            shade=0.5,
        )
        np.testing.assert_allclose(tensor, panel, atol=1e-6)

    def test_upsample(self) -> None:
        resized = upsample(np.ones((3, 3)), (12, 6))
        self.assertEqual((6, 12), resized.shape)
        np.testing.assert_allclose(np.ones((6, 12)), resized, atol=1e-6)


class TestCompose(unittest.TestCase):
    def test_dimensions(self) -> None:
        tiles = [np.full((4, 6, 3), index, dtype=np.uint8) for index in range(5)]
        sheet = compose(
            tiles=tiles,
            columns=2,
        )
        self.assertEqual((3 * 4 + 2 * SHEET_GAP, 2 * 6 + SHEET_GAP, 3), sheet.shape)
        self.assertEqual(4, int(sheet[2 * (4 + SHEET_GAP), 0, 0]))
        self.assertEqual(list(GAP_COLOR), sheet[4, 0].tolist())
        self.assertEqual(list(GAP_COLOR), sheet[-1, -1].tolist())

    def test_fewer_tiles_than_columns(self) -> None:
        sheet = compose(
            tiles=[np.zeros((4, 6, 3), dtype=np.uint8)] * 2,
            columns=5,
        )
        self.assertEqual((4, 2 * 6 + SHEET_GAP, 3), sheet.shape)

    def test_mark(self) -> None:
        marked = mark(
            pixels=np.zeros((16, 16, 3), dtype=np.uint8),
            center=(8.0, 8.0),
        )
        self.assertEqual(list(MARKER_COLOR), marked[5, 8].tolist())
        self.assertEqual([0, 0, 0], marked[8, 8].tolist())

    def test_render_sheet(self) -> None:
        rng = np.random.default_rng(2)
        panels = [
            Panel(
                crop_id=f"00000{index}#0",
                tensor=rng.random((3, 24, 24)),
                feature_map=rng.random((12, 12)) * (index + 1),
                peak=float(index + 1),
                peak_position=(3, 4),
            )
            for index in range(3)
        ]
        sheet = render_sheet(
            net=toy_network(),
            layer="conv2",
            panels=panels,
            columns=3,
        )
        self.assertEqual((24, 3 * 24 + 2 * SHEET_GAP, 3), sheet.shape)
        self.assertEqual(np.uint8, sheet.dtype)

    def test_sheet_path(self) -> None:
        self.assertEqual(
            Path("/out/sheets/conv2/car__filter_7.ppm"),
            sheet_path(Path("/out/sheets"), "conv2", "car", 7),
        )


class TestSheetExporter(unittest.TestCase):
    def test_requires_pipeline_results(self) -> None:
        with tempfile.TemporaryDirectory() as directory:
            with self.assertRaises(DataError):
                SheetExporter(configuration=run_configuration(Path(directory))).run()

    def test_run(self) -> None:
        with tempfile.TemporaryDirectory() as directory:
            configuration = run_configuration(Path(directory))
            Pipeline(configuration=configuration).run()
            listener = RecordingListener()
            output = SheetExporter(
                configuration=configuration,
                listener=listener,
            ).run(k=5)
            sheets = [event for event in listener.events if isinstance(event, ExportSheetEvent)]
            self.assertGreater(len(sheets), 0)
            for event in sheets:
                self.assertTrue(event.path.is_file())
                self.assertLessEqual(event.panels, 3)
            with Image.open(sheets[0].path) as image:
                self.assertEqual("RGB", image.mode)
            self.assertEqual("export-topk", read_manifest(output).command)
        self.assertEqual("sheets", output.name)
        end = listener.events[-1]
        self.assertIsInstance(end, ExportEndEvent)
        assert isinstance(end, ExportEndEvent)
        self.assertEqual(len(sheets), end.sheets)
        warnings = [event for event in listener.events if isinstance(event, ExportWarningEvent)]
        self.assertIn("The pipeline kept 3 activations per filter ; 5 were requested", [w.message for w in warnings])
