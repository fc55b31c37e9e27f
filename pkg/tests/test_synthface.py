from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from moodpipe.errors import InvalidParams
from moodpipe.facedetect import skin_mask
from moodpipe.svm import EXPRESSIONS
from moodpipe.synthface import (
    FaceParams,
    expression_preset,
    generate_corpus,
    generate_faces,
    read_truth_sidecar,
    render_face,
)


class TestRenderFace:
    def test_neutral_face_is_mostly_skin(self):
        params = FaceParams()
        img, truth = render_face(params)
        ys, xs = np.mgrid[0 : params.size, 0 : params.size]
        head = (xs - params.head_cx) ** 2 + (ys - params.head_cy) ** 2 <= params.head_r**2
        covered = skin_mask(img)[head].mean()
        assert covered >= 0.90

    def test_rendering_is_deterministic(self):
        params = expression_preset("Fear", 0.2, 9)
        img1, _ = render_face(params)
        img2, _ = render_face(params)
        assert np.array_equal(img1, img2)

    def test_truth_masks_match_image_ink(self):
        img, truth = render_face(FaceParams(), "Joy")
        ink = np.all(img == (60, 60, 60), axis=2)
        union = np.zeros_like(ink)
        for mask in truth.masks.values():
            union |= mask
        assert np.array_equal(ink, union)

    def test_out_of_range_params_rejected(self):
        with pytest.raises(InvalidParams):
            render_face(replace(FaceParams(), mouth_openness=0.9))
        with pytest.raises(InvalidParams):
            render_face(replace(FaceParams(), head_r=200))  # pokes outside
        with pytest.raises(InvalidParams):
            render_face(replace(FaceParams(), skin=(0, 0, 255)))

    def test_bbox_is_head_square(self):
        params = FaceParams()
        _, truth = render_face(params)
        assert truth.bbox.x1 == params.head_cx - params.head_r
        assert truth.bbox.y2 == params.head_cy + params.head_r


class TestExpressionPreset:
    def test_zero_jitter_ignores_seed(self):
        for label in EXPRESSIONS:
            assert expression_preset(label, 0.0, 1) == expression_preset(label, 0.0, 999)

    def test_surprise_opens_mouth_more_than_joy(self):
        surprise = expression_preset("Surprise", 0.0, 0)
        joy = expression_preset("Joy", 0.0, 0)
        assert surprise.mouth_openness > joy.mouth_openness

    def test_same_seed_same_params_different_seed_differs(self):
        a = expression_preset("Anger", 0.2, 5)
        b = expression_preset("Anger", 0.2, 5)
        c = expression_preset("Anger", 0.2, 6)
        assert a == b
        assert a != c

    def test_jittered_params_stay_in_range(self):
        from moodpipe.synthface import RANGES

        for seed in range(30):
            params = expression_preset("Sadness", 0.5, seed)
            params.validate()
            for name, (lo, hi) in RANGES.items():
                assert lo <= getattr(params, name) <= hi

    def test_bad_jitter_rejected(self):
        with pytest.raises(InvalidParams):
            expression_preset("Joy", 0.9, 0)


class TestGenerateCorpus:
    def test_counts_and_manifest(self, tmp_path):
        manifest = generate_corpus(2, 0.1, 5, tmp_path / "c")
        rows = manifest.read_text().splitlines()
        assert rows[0] == "path,label"
        assert len(rows) == 13  # header + 6 classes x 2
        labels = [row.split(",")[1] for row in rows[1:]]
        for cls in EXPRESSIONS:
            assert labels.count(cls) == 2
        images = sorted(p.name for p in (tmp_path / "c").glob("*.ppm"))
        assert len(images) == 12

    def test_byte_identical_reruns(self, tmp_path):
        m1 = generate_corpus(1, 0.15, 11, tmp_path / "a")
        m2 = generate_corpus(1, 0.15, 11, tmp_path / "b")
        for p1 in sorted(Path(m1).parent.iterdir()):
            p2 = Path(m2).parent / p1.name
            assert p1.read_bytes() == p2.read_bytes()

    def test_truth_sidecars_parse(self, tmp_path):
        generate_corpus(1, 0.1, 2, tmp_path / "c")
        sidecars = sorted((tmp_path / "c").glob("*.truth.txt"))
        assert len(sidecars) == 6
        truth = read_truth_sidecar(sidecars[0])
        assert truth["label"] in EXPRESSIONS
        x1, y1, x2, y2 = (int(v) for v in truth["bbox"].split(","))
        assert x1 < x2 and y1 < y2
        assert "param.head_r" in truth

    def test_in_memory_faces_match_disk(self, tmp_path):
        from moodpipe.imgcore import load_image

        generate_corpus(1, 0.1, 7, tmp_path / "c")
        faces = generate_faces(1, 0.1, 7)
        by_label = {truth.label: img for img, truth in faces}
        for path in (tmp_path / "c").glob("*.ppm"):
            label = path.stem.rsplit("_", 1)[0].capitalize()
            assert np.array_equal(load_image(path), by_label[label])

    def test_invalid_count_rejected(self, tmp_path):
        with pytest.raises(InvalidParams):
            generate_corpus(0, 0.1, 0, tmp_path / "c")
