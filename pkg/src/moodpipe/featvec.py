"""Seven-parameter geometric feature vector from extracted feature masks.

Components (all scale-normalized by the face bbox):

* ``He`` eyebrow elevation above the nose reference row
* ``We`` distance between the inner eyebrow endpoints
* ``Hm`` mouth height, ``Wm`` mouth width
* ``Rul`` / ``Rll`` signed upper/lower lip curvature (positive = corners up)
* ``NL`` nose-to-upper-lip distance
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCurvature, MissingFeature
from .featextract import FeatureMasks
from .imgcore import Rect

COMPONENT_NAMES = ("He", "We", "Hm", "Wm", "Rul", "Rll", "NL")


@dataclass(frozen=True)
class FeatureVector:
    He: float
    We: float
    Hm: float
    Wm: float
    Rul: float
    Rll: float
    NL: float

    def as_array(self) -> np.ndarray:
        return np.array([self.He, self.We, self.Hm, self.Wm, self.Rul, self.Rll, self.NL])

    @classmethod
    def from_array(cls, arr) -> "FeatureVector":
        vals = [float(v) for v in np.asarray(arr).ravel()]
        if len(vals) != 7:
            raise ValueError(f"feature vector needs 7 components, got {len(vals)}")
        return cls(*vals)


def _centroid(mask: np.ndarray, name: str) -> tuple[float, float]:
    ys, xs = np.nonzero(mask)
    if ys.size == 0:
        raise MissingFeature(f"empty mask: {name}")
    return float(xs.mean()), float(ys.mean())


def _inner_endpoint(mask: np.ndarray, side: str) -> tuple[float, float]:
    """Innermost-x point of an eyebrow mask (toward the face midline)."""
    ys, xs = np.nonzero(mask)
    inner_x = xs.max() if side == "left" else xs.min()
    return float(inner_x), float(ys[xs == inner_x].mean())


def _boundary_curvature(mask: np.ndarray, edge: str, norm_width: float) -> float:
    """Signed curvature of the top or bottom lip boundary.

    Fits y = a u^2 + b u + c (least squares) to the per-column extreme
    boundary pixels, u centered on the mask midline, and returns -2 a W so
    that corners curving upward (smaller y at large |u|) give a positive
    value.
    """
    ys, xs = np.nonzero(mask)
    cols = np.unique(xs)
    if cols.size < 3:
        raise DegenerateCurvature(f"{edge} lip boundary has {cols.size} columns, need >= 3")
    if edge == "top":
        boundary = np.array([ys[xs == c].min() for c in cols], dtype=np.float64)
    else:
        boundary = np.array([ys[xs == c].max() for c in cols], dtype=np.float64)
    midline = (cols.min() + cols.max()) / 2.0
    u = cols.astype(np.float64) - midline
    # anchor at the first boundary row (an exact integer subtraction) so the
    # fit, and with it F, is bit-identical under whole-crop translation
    coeffs = np.polyfit(u, boundary - boundary[0], 2)
    return float(-2.0 * coeffs[0] * norm_width)


def compute_feature_vector(masks: FeatureMasks, face_bbox: Rect) -> FeatureVector:
    """Build the feature vector from masks in face-crop coordinates."""
    bw = float(face_bbox.width)
    bh = float(face_bbox.height)
    if bw <= 0 or bh <= 0:
        raise MissingFeature("degenerate face bbox")

    lx, ly = _centroid(masks.left_eyebrow, "left_eyebrow")
    rx, ry = _centroid(masks.right_eyebrow, "right_eyebrow")
    _centroid(masks.lip, "lip")

    brow_mid = ((lx + rx) / 2.0, (ly + ry) / 2.0)
    he = abs(float(masks.nose_y) - brow_mid[1]) / bh

    left_inner = _inner_endpoint(masks.left_eyebrow, "left")
    right_inner = _inner_endpoint(masks.right_eyebrow, "right")
    we = float(np.hypot(right_inner[0] - left_inner[0], right_inner[1] - left_inner[1])) / bw

    (clx, cly), (crx, cry) = masks.lip_corners
    wm = float(np.hypot(crx - clx, cry - cly)) / bw
    tmx, tmy = masks.lip_top_mid
    bmx, bmy = masks.lip_bottom_mid
    hm = float(np.hypot(bmx - tmx, bmy - tmy)) / bh

    rul = _boundary_curvature(masks.lip, "top", bw)
    rll = _boundary_curvature(masks.lip, "bottom", bw)

    nl = abs(tmy - float(masks.nose_y)) / bh
    return FeatureVector(he, we, hm, wm, rul, rll, nl)
