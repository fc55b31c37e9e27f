"""Exception types raised across the pipeline.

Every error is a subclass of :class:`MoodpipeError` so callers can catch the
whole family; most are also ValueError subclasses because they signal bad
arguments rather than runtime faults.
"""


class MoodpipeError(Exception):
    """Base class for all moodpipe errors."""


class InvalidChannelCount(MoodpipeError, ValueError):
    """Image has the wrong number of channels for the operation."""


class InvalidWindow(MoodpipeError, ValueError):
    """Filter window is even or too small."""


class InvalidSigma(MoodpipeError, ValueError):
    """Gaussian sigma is not strictly positive."""


class InvalidRect(MoodpipeError, ValueError):
    """Rectangle is malformed or outside the host image."""


class InvalidRadiusRange(MoodpipeError, ValueError):
    """Hough search radii are empty or non-positive."""


class ImageTooSmall(MoodpipeError, ValueError):
    """Input image is below the minimum size the detector supports."""


class FaceTooSmall(MoodpipeError, ValueError):
    """Face bounding box is too small to run feature extraction on."""


class NoFeatureEvidence(MoodpipeError):
    """Projection profiles carry no edge mass inside the search rectangle."""


class FeatureNotFound(MoodpipeError):
    """A facial feature could not be segmented.

    Carries the feature identifier (``left_eyebrow``, ``right_eyebrow``,
    ``lip`` or ``nose``) in :attr:`feature`.
    """

    def __init__(self, feature: str, message: str = ""):
        self.feature = feature
        super().__init__(message or f"feature not found: {feature}")


class MissingFeature(MoodpipeError, ValueError):
    """Feature mask required by the feature vector is empty."""


class DegenerateCurvature(MoodpipeError):
    """Too few boundary points to fit a lip curvature parabola."""


class DimensionError(MoodpipeError, ValueError):
    """Vector dimensions do not match."""


class DegenerateLabels(MoodpipeError, ValueError):
    """Training data does not contain at least two classes."""


class EmptyDataset(MoodpipeError, ValueError):
    """Evaluation was asked to run on an empty sample set."""


class InvalidParams(MoodpipeError, ValueError):
    """Synthetic face parameters are out of their documented ranges."""


class InvalidConfig(MoodpipeError, ValueError):
    """Configuration file contains unknown keys or unparsable values."""


class ModelFormatError(MoodpipeError, ValueError):
    """Persisted SVM model file does not parse."""
