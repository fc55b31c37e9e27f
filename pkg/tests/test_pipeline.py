import numpy as np
import pytest

from moodpipe.errors import FeatureNotFound
from moodpipe.facedetect import detect_faces
from moodpipe.imgcore import Rect, to_grayscale
from moodpipe.pipeline import (
    FaceFeatureExtractor,
    NoFaceFound,
    extract_feature_vector,
    face_crop,
)
from moodpipe.synthface import expression_preset, render_face


def test_face_crop_flattens_outside_circle():
    img, _ = render_face(expression_preset("Joy", 0.0, 0), "Joy")
    det = detect_faces(img)[0]
    crop = face_crop(to_grayscale(img), det)
    assert crop.shape == (det.bbox.height, det.bbox.width)
    # corners lie outside the circle and must match the interior fill value
    assert crop[0, 0] == crop[0, -1] == crop[-1, 0] == crop[-1, -1]
    assert crop[0, 0] != 255  # the white background is gone


def test_extract_feature_vector_end_to_end():
    img, _ = render_face(expression_preset("Surprise", 0.1, 4), "Surprise")
    result = extract_feature_vector(img)
    assert result.detection is not None
    assert np.all(np.isfinite(result.vector.as_array()))


def test_no_face_raises():
    blank = np.full((96, 96, 3), 255, dtype=np.uint8)
    with pytest.raises(NoFaceFound):
        extract_feature_vector(blank)


def test_explicit_bbox_skips_detection():
    uniform = np.full((160, 160, 3), 120, dtype=np.uint8)
    with pytest.raises(FeatureNotFound):
        extract_feature_vector(uniform, bbox=Rect(10, 10, 130, 130))


def test_transformer_aligns_output_with_input():
    good, _ = render_face(expression_preset("Anger", 0.1, 2), "Anger")
    blank = np.full((96, 96, 3), 255, dtype=np.uint8)
    extractor = FaceFeatureExtractor()
    X = extractor.fit([good, blank]).transform([good, blank])
    assert X.shape == (2, 7)
    assert np.all(np.isfinite(X[0]))
    assert np.all(np.isnan(X[1]))


def test_transformer_is_sklearn_compatible():
    from sklearn.base import clone

    extractor = FaceFeatureExtractor()
    assert clone(extractor).get_params() == extractor.get_params()
