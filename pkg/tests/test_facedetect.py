import numpy as np
import pytest

from moodpipe.errors import ImageTooSmall, InvalidChannelCount
from moodpipe.facedetect import (
    DetectConfig,
    SkinThresholds,
    detect_faces,
    eliminate_nonskin,
    face_confidence,
    rgb_to_hsv,
    segment_skin_regions,
    skin_mask,
)
from moodpipe.imgcore import Circle, Rect, ideal_perimeter_votes
from moodpipe.synthface import expression_preset, render_face

SKIN = (219, 172, 152)


def _iou(a: Rect, b: Rect) -> float:
    ix1, iy1 = max(a.x1, b.x1), max(a.y1, b.y1)
    ix2, iy2 = min(a.x2, b.x2), min(a.y2, b.y2)
    if ix1 > ix2 or iy1 > iy2:
        return 0.0
    inter = (ix2 - ix1 + 1) * (iy2 - iy1 + 1)
    return inter / (a.area + b.area - inter)


class TestRgbToHsv:
    def test_pure_red(self):
        assert rgb_to_hsv(255, 0, 0) == (0.0, 1.0, 1.0)

    def test_mid_gray_is_achromatic(self):
        h, s, v = rgb_to_hsv(128, 128, 128)
        assert h == 0.0 and s == 0.0
        assert abs(v - 0.502) < 1e-3

    def test_pure_green(self):
        h, s, v = rgb_to_hsv(0, 255, 0)
        assert abs(h - 120.0) < 1e-9 and s == 1.0 and v == 1.0


class TestSkinMask:
    def test_skin_tone_accepted(self):
        h, s, _ = rgb_to_hsv(*SKIN)
        assert abs(h - 17.9) < 0.5 and abs(s - 0.306) < 0.01
        img = np.full((2, 2, 3), SKIN, dtype=np.uint8)
        assert skin_mask(img).all()

    def test_pure_blue_rejected(self):
        img = np.zeros((2, 2, 3), dtype=np.uint8)
        img[..., 2] = 255
        assert not skin_mask(img).any()

    def test_achromatic_rejected_by_saturation_floor(self):
        img = np.full((2, 2, 3), 200, dtype=np.uint8)
        assert not skin_mask(img).any()

    def test_wrapping_hue_range(self):
        t = SkinThresholds(hue_min=340.0, hue_max=20.0, sat_min=0.1, sat_max=1.0)
        red = np.zeros((1, 1, 3), dtype=np.uint8)
        red[0, 0] = (255, 0, 0)  # hue 0, inside the wrapped range
        green = np.zeros((1, 1, 3), dtype=np.uint8)
        green[0, 0] = (0, 255, 0)
        assert skin_mask(red, t).all()
        assert not skin_mask(green, t).any()

    def test_grayscale_input_rejected(self):
        with pytest.raises(InvalidChannelCount):
            skin_mask(np.zeros((4, 4), dtype=np.uint8))


class TestEliminateNonskin:
    def test_all_blue_becomes_white(self):
        img = np.zeros((3, 3, 3), dtype=np.uint8)
        img[..., 2] = 255
        assert np.all(eliminate_nonskin(img) == 255)

    def test_skin_pixels_unchanged(self):
        img = np.full((3, 3, 3), SKIN, dtype=np.uint8)
        assert np.array_equal(eliminate_nonskin(img), img)

    def test_nonwhite_output_equals_skin_mask(self):
        rng = np.random.default_rng(21)
        for _ in range(5):
            img = rng.integers(0, 255, size=(16, 16, 3), dtype=np.uint8)
            out = eliminate_nonskin(img)
            nonwhite = ~np.all(out == 255, axis=2)
            assert np.array_equal(nonwhite, skin_mask(img))


class TestSegmentSkinRegions:
    def test_empty_mask(self):
        assert segment_skin_regions(np.zeros((10, 10), dtype=bool), 5) == []

    def test_solid_block(self):
        mask = np.zeros((60, 60), dtype=bool)
        mask[10:50, 10:50] = True
        regions = segment_skin_regions(mask, 100)
        assert len(regions) == 1
        assert regions[0].area >= 1600

    def test_small_region_filtered(self):
        mask = np.zeros((60, 60), dtype=bool)
        mask[5:35, 5:35] = True  # area 900
        mask[45:52, 45:52] = True  # area 49 < 100
        regions = segment_skin_regions(mask, 100)
        assert len(regions) == 1
        assert regions[0].area >= 900


class TestFaceConfidence:
    def test_perfect_circle_in_solid_skin(self):
        img = np.full((64, 64, 3), SKIN, dtype=np.uint8)
        mask = np.ones((64, 64), dtype=bool)
        c = Circle(32, 32, 10, score=ideal_perimeter_votes(10))
        assert face_confidence(img, mask, c) == pytest.approx(1.0)

    def test_zero_skin(self):
        img = np.full((64, 64, 3), 255, dtype=np.uint8)
        mask = np.zeros((64, 64), dtype=bool)
        c = Circle(32, 32, 10, score=ideal_perimeter_votes(10))
        assert face_confidence(img, mask, c) == 0.0

    def test_half_coverage(self):
        img = np.full((64, 64, 3), SKIN, dtype=np.uint8)
        mask = np.zeros((64, 64), dtype=bool)
        mask[:, :32] = True  # half plane ending exactly at the circle center
        c = Circle(32, 32, 12, score=ideal_perimeter_votes(12))
        assert face_confidence(img, mask, c) == pytest.approx(0.5, abs=0.05)


class TestDetectFaces:
    def test_synthetic_face_found_with_iou(self):
        img, truth = render_face(expression_preset("Joy", 0.1, 3), "Joy")
        detections = detect_faces(img)
        assert len(detections) == 1
        assert _iou(detections[0].bbox, truth.bbox) >= 0.5

    def test_blank_image_gives_no_detections(self):
        img = np.full((128, 128, 3), 255, dtype=np.uint8)
        assert detect_faces(img) == []

    def test_two_faces(self):
        left, t1 = render_face(expression_preset("Anger", 0.0, 0), "Anger")
        right, t2 = render_face(expression_preset("Surprise", 0.0, 0), "Surprise")
        img = np.full((256, 512, 3), 255, dtype=np.uint8)
        img[:, :256] = left
        img[:, 256:] = right
        detections = detect_faces(img)
        assert len(detections) == 2
        shifted = Rect(t2.bbox.x1 + 256, t2.bbox.y1, t2.bbox.x2 + 256, t2.bbox.y2)
        ious = sorted(
            max(_iou(d.bbox, t1.bbox), _iou(d.bbox, shifted)) for d in detections
        )
        assert all(v >= 0.5 for v in ious)

    def test_too_small_image_rejected(self):
        with pytest.raises(ImageTooSmall):
            detect_faces(np.zeros((16, 16, 3), dtype=np.uint8))

    def test_sorted_by_confidence_and_above_floor(self):
        img, _ = render_face(expression_preset("Fear", 0.1, 5), "Fear")
        cfg = DetectConfig()
        detections = detect_faces(img, cfg)
        confidences = [d.confidence for d in detections]
        assert confidences == sorted(confidences, reverse=True)
        assert all(c >= cfg.confidence_floor for c in confidences)

    def test_deterministic(self):
        img, _ = render_face(expression_preset("Sadness", 0.1, 9), "Sadness")
        assert detect_faces(img) == detect_faces(img)

    def test_translation_covariance(self):
        params = expression_preset("Disgust", 0.0, 0)
        from dataclasses import replace

        dx, dy = 9, -7
        moved = replace(params, head_cx=params.head_cx + dx, head_cy=params.head_cy + dy)
        d1 = detect_faces(render_face(params)[0])[0]
        d2 = detect_faces(render_face(moved)[0])[0]
        assert abs((d2.circle.cx - d1.circle.cx) - dx) <= 2
        assert abs((d2.circle.cy - d1.circle.cy) - dy) <= 2

    def test_circle_stays_near_its_skin_region(self):
        img, _ = render_face(expression_preset("Joy", 0.1, 4), "Joy")
        for d in detect_faces(img):
            bb = d.skin_region.bbox
            grown = Rect(bb.x1 - d.circle.r, bb.y1 - d.circle.r,
                         bb.x2 + d.circle.r, bb.y2 + d.circle.r)
            assert grown.contains_point(d.circle.cx, d.circle.cy)
