"""moodpipe: facial expression recognition from a single RGB image.

The pipeline detects a face via skin filtering and Hough circle search,
extracts eyebrow/lip/nose geometry via edge-projection analysis, builds a
seven-parameter feature vector and classifies it into one of six basic
expressions with a from-scratch maximum-margin SVM. A deterministic synthetic
face generator provides labeled training corpora and exact ground truth.
"""

from . import cli, config, facedetect, featextract, featvec, imgcore, pipeline, svm, synthface
from .errors import MoodpipeError
from .pipeline import FaceFeatureExtractor, NoFaceFound, extract_feature_vector
from .svm import EXPRESSIONS, BinarySvc, ExpressionClassifier

__version__ = "0.1.0"

__all__ = [
    "BinarySvc",
    "EXPRESSIONS",
    "ExpressionClassifier",
    "FaceFeatureExtractor",
    "MoodpipeError",
    "NoFaceFound",
    "cli",
    "config",
    "extract_feature_vector",
    "facedetect",
    "featextract",
    "featvec",
    "imgcore",
    "pipeline",
    "svm",
    "synthface",
]
