"""End-to-end glue: image -> detection -> feature vector.

Also provides sklearn-style wrappers so the whole pipeline composes as a
transformer (images to feature matrix).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .errors import FeatureNotFound, MoodpipeError
from .facedetect import DetectConfig, FaceDetection, detect_faces
from .featextract import AnthropometricModel, BandParams, FeatureMasks, extract_all
from .featvec import FeatureVector, compute_feature_vector
from .imgcore import Rect, to_grayscale


class NoFaceFound(MoodpipeError):
    """The detector returned no candidate above the confidence floor."""


def face_crop(gray: np.ndarray, det: FaceDetection) -> np.ndarray:
    """Crop the face bbox and flatten everything outside the face circle.

    Pixels outside the detected circle are replaced with the median interior
    intensity so the head boundary leaves no edges inside the crop.
    """
    crop = gray[det.bbox.slices()].astype(np.uint8).copy()
    h, w = crop.shape
    cy = det.circle.cy - det.bbox.y1
    cx = det.circle.cx - det.bbox.x1
    ys, xs = np.mgrid[0:h, 0:w]
    inside = (xs - cx) ** 2 + (ys - cy) ** 2 <= det.circle.r**2
    if inside.any():
        crop[~inside] = np.median(crop[inside]).astype(np.uint8)
    return crop


@dataclass
class ExtractionResult:
    detection: FaceDetection | None
    vector: FeatureVector
    crop_bbox: Rect
    masks: FeatureMasks


def extract_feature_vector(
    img: np.ndarray,
    detect_cfg: DetectConfig | None = None,
    model: AnthropometricModel | None = None,
    band: BandParams | None = None,
    bbox: Rect | None = None,
    diagnostics: dict | None = None,
) -> ExtractionResult:
    """Detect the best face and compute its feature vector.

    ``bbox`` skips detection and extracts from the given face box directly.
    Raises :class:`NoFaceFound` when no face clears the confidence floor and
    :class:`~moodpipe.errors.FeatureNotFound` when a feature cannot be
    segmented.
    """
    gray = to_grayscale(img)
    if bbox is not None:
        crop = gray[bbox.slices()]
        detection = None
    else:
        detections = detect_faces(img, detect_cfg)
        if not detections:
            raise NoFaceFound("no face detected")
        detection = detections[0]
        bbox = detection.bbox
        crop = face_crop(gray, detection)
    masks = extract_all(crop, model, band, diagnostics=diagnostics)
    local = Rect(0, 0, bbox.width - 1, bbox.height - 1)
    vector = compute_feature_vector(masks, local)
    return ExtractionResult(detection, vector, bbox, masks)


class FaceFeatureExtractor(BaseEstimator, TransformerMixin):
    """Transformer: list of RGB images -> (n, 7) feature matrix.

    Images where detection or extraction fails produce NaN rows, keeping the
    output aligned with the input.
    """

    def __init__(self, detect_cfg: DetectConfig | None = None,
                 model: AnthropometricModel | None = None,
                 band: BandParams | None = None):
        self.detect_cfg = detect_cfg
        self.model = model
        self.band = band

    def fit(self, X, y=None):
        return self

    def transform(self, X, y=None) -> np.ndarray:
        out = np.full((len(X), 7), np.nan)
        for i, img in enumerate(X):
            try:
                result = extract_feature_vector(img, self.detect_cfg, self.model, self.band)
            except (NoFaceFound, FeatureNotFound):
                continue
            out[i] = result.vector.as_array()
        return out
