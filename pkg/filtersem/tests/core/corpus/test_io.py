import json
import tempfile
import unittest
from pathlib import Path

import numpy as np

from filtersem.core.corpus.error import CorpusError
from filtersem.core.corpus.io import (
    load_annotated,
    load_corpus,
    load_image,
    save_corpus,
    save_image,
)
from filtersem.core.corpus.rle import (
    decode_mask,
    encode_mask,
)
from filtersem.core.corpus.synthetic import generate_synthetic
from filtersem.core.pool import WorkerPool


class TestRle(unittest.TestCase):
    def test_encode(self) -> None:
        self.assertEqual([1, 3], encode_mask(np.array([[False, True], [True, True]])))
        self.assertEqual([0, 1, 3], encode_mask(np.array([[True, False], [False, False]])))
        self.assertEqual([], encode_mask(np.zeros((0, 0), dtype=bool)))

    def test_decode(self) -> None:
        np.testing.assert_array_equal(
            np.array([[False, True, True], [False, False, True]]),
            decode_mask([1, 2, 2, 1], (2, 3)),
        )

    def test_decode_errors(self) -> None:
        with self.assertRaises(CorpusError):
            decode_mask([1, 2], (2, 3))
        with self.assertRaises(CorpusError):
            decode_mask([7, -1], (2, 3))


class TestCorpusFiles(unittest.TestCase):
    def test_image(self) -> None:
        image = np.random.default_rng(0).random((3, 5, 7)).astype(np.float32)
        with tempfile.TemporaryDirectory() as directory:
            path = save_image(
                path=Path(directory) / "image.ppm",
                image=image,
            )
            loaded = load_image(path)
        self.assertEqual((3, 5, 7), loaded.shape)
        np.testing.assert_allclose(image, loaded, atol=0.5 / 255 + 1e-6)

    def test_reload_is_identical(self) -> None:
        images = generate_synthetic(
            seed=9,
            n_images=3,
        )
        with tempfile.TemporaryDirectory() as directory:
            save_corpus(
                directory=Path(directory) / "corpus",
                images=images,
            )
            (Path(directory) / "corpus" / "manifest.json").write_text("{}", encoding="utf-8")
            with WorkerPool(workers=2) as pool:
                loaded = load_corpus(
                    directory=Path(directory) / "corpus",
                    pool=pool,
                )
        self.assertEqual([image.image_id for image in images], [image.image_id for image in loaded])
        for original, reloaded in zip(images, loaded):
            np.testing.assert_array_equal(original.image, reloaded.image)
            self.assertEqual(original.objects, reloaded.objects)
            self.assertEqual(len(original.parts), len(reloaded.parts))
            for a, b in zip(original.parts, reloaded.parts):
                self.assertEqual((a.part_class, a.parent, a.box), (b.part_class, b.parent, b.box))
                np.testing.assert_array_equal(a.mask, b.mask)

    def test_missing_directory(self) -> None:
        with tempfile.TemporaryDirectory() as directory:
            with self.assertRaises(CorpusError):
                load_corpus(Path(directory) / "nowhere")

    def test_missing_image(self) -> None:
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / "000001.json"
            path.write_text(json.dumps({"objects": [], "parts": []}), encoding="utf-8")
            with self.assertRaises(CorpusError):
                load_annotated(path)

    def test_malformed_annotations(self) -> None:
        images = generate_synthetic(
            seed=9,
            n_images=1,
        )
        with tempfile.TemporaryDirectory() as directory:
            save_corpus(
                directory=Path(directory),
                images=images,
            )
            path = Path(directory) / "000000.json"
            data = json.loads(path.read_text(encoding="utf-8"))
            data["parts"][0]["parent"] = 5
            path.write_text(json.dumps(data), encoding="utf-8")
            with self.assertRaises(CorpusError):
                load_annotated(path)
            del data["objects"][0]["box"]
            path.write_text(json.dumps(data), encoding="utf-8")
            with self.assertRaises(CorpusError):
                load_annotated(path)
