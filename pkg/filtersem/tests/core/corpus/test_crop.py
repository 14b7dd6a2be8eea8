import unittest

import numpy as np

from filtersem.core.corpus.crop import (
    CropSpec,
    CropTransform,
    crop_and_warp,
    crop_object,
    padded_region,
)
from filtersem.core.corpus.error import CorpusError
from filtersem.core.corpus.model import AnnotatedImage
from filtersem.core.geometry.box import Box
from filtersem.tests.corpora import annotated_image


def _image() -> AnnotatedImage:
    return annotated_image(
        image_id="000007",
        objects=[("car", (8, 8, 16, 16)), ("face", (0, 0, 6, 6))],
        parts=[("door", 0, (10, 10, 4, 4)), ("eye", 1, (1, 1, 2, 2)), ("wheel", 0, (18, 18, 10, 10))],
    )


class TestCropSpec(unittest.TestCase):
    def test_defaults(self) -> None:
        spec = CropSpec()
        self.assertEqual(0.1, spec.context_pad)
        self.assertEqual((227, 227), spec.target_size)
        self.assertIsNone(spec.absolute_pad)

    def test_invalid(self) -> None:
        with self.assertRaises(CorpusError):
            CropSpec(context_pad=-0.1)
        with self.assertRaises(CorpusError):
            CropSpec(absolute_pad=-1.0)
        with self.assertRaises(CorpusError):
            CropSpec(target_size=(0, 10))

    def test_padded_region(self) -> None:
        box = Box(10, 20, 40, 20)
        self.assertEqual(Box(6, 18, 48, 24), padded_region(box, CropSpec(context_pad=0.1)))
        self.assertEqual(Box(7, 17, 46, 26), padded_region(box, CropSpec(absolute_pad=3.0)))


class TestCropTransform(unittest.TestCase):
    def test_inverse(self) -> None:
        transform = CropTransform(sx=2.0, sy=0.5, tx=-3.0, ty=4.0)
        x, y = transform.inverse().map_point(*transform.map_point(7.0, -2.0))
        self.assertAlmostEqual(7.0, x)
        self.assertAlmostEqual(-2.0, y)

    def test_then(self) -> None:
        first = CropTransform(sx=2.0, sy=3.0, tx=1.0, ty=-1.0)
        second = CropTransform(sx=0.5, sy=2.0, tx=4.0, ty=0.0)
        composed = first.then(second)
        self.assertEqual(second.map_point(*first.map_point(5.0, 6.0)), composed.map_point(5.0, 6.0))

    def test_map_box(self) -> None:
        transform = CropTransform(sx=2.0, sy=2.0, tx=-16.0, ty=-16.0)
        self.assertEqual(Box(4, 4, 8, 8), transform.map_box(Box(10, 10, 4, 4)))


class TestCropObject(unittest.TestCase):
    def test_crop_without_context(self) -> None:
        crop = crop_object(
            img=_image(),
            object_index=0,
            spec=CropSpec(
                context_pad=0.0,
                target_size=(32, 32),
            ),
        )
        self.assertEqual("000007#0", crop.crop_id)
        self.assertEqual("car", crop.object_class)
        self.assertEqual((3, 32, 32), crop.tensor.shape)
        self.assertEqual(np.float32, crop.tensor.dtype)
        self.assertEqual(["door", "wheel"], [part.part_class for part in crop.parts])
        self.assertEqual(Box(4, 4, 8, 8), crop.parts[0].box)
        self.assertEqual(Box(20, 20, 12, 12), crop.parts[1].box)
        self.assertEqual(64, int(crop.parts[0].mask.sum()))
        self.assertEqual((32, 32), crop.parts[0].mask.shape)

    def test_warp_is_bilinear(self) -> None:
        image = _image()
        crop, transform = crop_and_warp(
            img=image,
            object_index=0,
            spec=CropSpec(
                context_pad=0.0,
                target_size=(16, 16),
            ),
        )
        self.assertEqual(1.0, transform.sx)
        np.testing.assert_allclose(image.image[:, 8:24, 8:24], crop, atol=1e-6)

    def test_context_outside_the_image_is_black(self) -> None:
        crop = crop_object(
            img=_image(),
            object_index=1,
            spec=CropSpec(
                absolute_pad=6.0,
                target_size=(18, 18),
            ),
        )
        self.assertEqual(0.0, float(np.abs(crop.tensor[:, :5, :5]).max()))
        self.assertEqual(Box(7, 7, 2, 2), crop.parts[0].box)

    def test_clipped_part(self) -> None:
        crop = crop_object(
            img=_image(),
            object_index=0,
            spec=CropSpec(
                context_pad=0.0,
                target_size=(16, 16),
            ),
        )
        self.assertEqual(Box(10, 10, 6, 6), crop.parts[1].box)

    def test_missing_object(self) -> None:
        with self.assertRaises(CorpusError):
            crop_object(
                img=_image(),
                object_index=2,
                spec=CropSpec(),
            )
