"""Face detection: skin filtering, region segmentation and Hough circle search.

The detector eliminates non-skin colors, segments skin regions, traces edges
inside each region and keeps the best circle per region, then confirms
candidates with whole-face color information and heuristic filters.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ImageTooSmall
from .imgcore import (
    Circle,
    Rect,
    Region,
    connected_components,
    hough_circles,
    ideal_perimeter_votes,
    median_filter,
    morph,
    otsu_threshold,
    require_rgb,
    sobel_edges,
    to_grayscale,
)


@dataclass(frozen=True)
class SkinThresholds:
    """Hue/saturation box marking skin pixels; the hue range may wrap past 0."""

    hue_min: float = 0.0
    hue_max: float = 50.0
    sat_min: float = 0.15
    sat_max: float = 0.68

    def __post_init__(self):
        if not 0.0 <= self.sat_min <= self.sat_max <= 1.0:
            raise ValueError(f"bad saturation range [{self.sat_min}, {self.sat_max}]")


@dataclass(frozen=True)
class DetectConfig:
    """Tunables of the face detector."""

    thresholds: SkinThresholds = field(default_factory=SkinThresholds)
    min_region_area: float = 0.01  # fraction of image area
    r_min_frac: float = 0.10  # of min(image dims)
    r_max_frac: float = 0.45
    confidence_floor: float = 0.35
    max_faces: int = 4
    median_window: int = 3
    vote_fraction: float = 0.3
    max_bbox_aspect: float = 1.6

    def __post_init__(self):
        if not 0.0 < self.r_min_frac < self.r_max_frac <= 0.5:
            raise ValueError(f"bad radius fractions [{self.r_min_frac}, {self.r_max_frac}]")
        if not 0.0 <= self.confidence_floor <= 1.0:
            raise ValueError(f"confidence floor must be in [0, 1], got {self.confidence_floor}")


@dataclass(frozen=True)
class FaceDetection:
    """A confirmed face: circle, circumscribing bbox and confidence."""

    circle: Circle
    bbox: Rect
    confidence: float
    skin_region: Region


def rgb_to_hsv(r: int, g: int, b: int) -> tuple[float, float, float]:
    """Hexcone HSV of one 8-bit RGB pixel: hue in degrees, S and V in [0, 1].

    Achromatic pixels get hue 0 with saturation 0.
    """
    rf, gf, bf = r / 255.0, g / 255.0, b / 255.0
    v = max(rf, gf, bf)
    delta = v - min(rf, gf, bf)
    s = 0.0 if v == 0 else delta / v
    if delta == 0:
        h = 0.0
    elif v == rf:
        h = 60.0 * (((gf - bf) / delta) % 6.0)
    elif v == gf:
        h = 60.0 * ((bf - rf) / delta + 2.0)
    else:
        h = 60.0 * ((rf - gf) / delta + 4.0)
    return h, s, v


def _hsv_planes(img: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized hue/saturation/value planes of an RGB image."""
    arr = require_rgb(img).astype(np.float64) / 255.0
    v = arr.max(axis=2)
    delta = v - arr.min(axis=2)
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.where(v > 0, delta / v, 0.0)
        rc = (v - arr[..., 0]) / delta
        gc = (v - arr[..., 1]) / delta
        bc = (v - arr[..., 2]) / delta
    h = np.zeros_like(v)
    chrom = delta > 0
    is_r = chrom & (arr[..., 0] == v)
    is_g = chrom & (arr[..., 1] == v) & ~is_r
    is_b = chrom & ~is_r & ~is_g
    h[is_r] = bc[is_r] - gc[is_r]
    h[is_g] = 2.0 + rc[is_g] - bc[is_g]
    h[is_b] = 4.0 + gc[is_b] - rc[is_b]
    h = (h * 60.0) % 360.0
    h[~chrom] = 0.0
    return h, s, v


def skin_mask(img: np.ndarray, t: SkinThresholds | None = None) -> np.ndarray:
    """Boolean mask of pixels whose hue and saturation fall in the skin box."""
    t = t or SkinThresholds()
    h, s, _ = _hsv_planes(img)
    if t.hue_min <= t.hue_max:
        hue_ok = (h >= t.hue_min) & (h <= t.hue_max)
    else:  # wrapping range, e.g. [340, 20]
        hue_ok = (h >= t.hue_min) | (h <= t.hue_max)
    return hue_ok & (s >= t.sat_min) & (s <= t.sat_max)


def eliminate_nonskin(img: np.ndarray, t: SkinThresholds | None = None) -> np.ndarray:
    """Replace every non-skin pixel with white; skin pixels pass through."""
    arr = require_rgb(img).copy()
    arr[~skin_mask(arr, t)] = (255, 255, 255)
    return arr


def segment_skin_regions(mask: np.ndarray, min_area: int) -> list[Region]:
    """8-connected skin regions of at least ``min_area`` pixels.

    One morphological close with a small elliptic element bridges speckle
    before labeling; the result is sorted by area descending.
    """
    closed = morph(mask, "close", a=2, b=2)
    return [r for r in connected_components(closed, connectivity=8) if r.area >= min_area]


def face_confidence(img: np.ndarray, mask: np.ndarray, c: Circle) -> float:
    """Confidence in [0, 1]: skin fill inside the circle times accumulator fit."""
    h, w = mask.shape
    x1, x2 = max(0, c.cx - c.r), min(w - 1, c.cx + c.r)
    y1, y2 = max(0, c.cy - c.r), min(h - 1, c.cy + c.r)
    if x1 > x2 or y1 > y2:
        return 0.0
    ys, xs = np.mgrid[y1 : y2 + 1, x1 : x2 + 1]
    inside = (xs - c.cx) ** 2 + (ys - c.cy) ** 2 <= c.r * c.r
    total = int(inside.sum())
    if total == 0:
        return 0.0
    skin_fill = float(mask[y1 : y2 + 1, x1 : x2 + 1][inside].sum()) / total
    fit = min(1.0, c.score / ideal_perimeter_votes(c.r))
    return min(1.0, skin_fill) * fit


def circle_bbox(c: Circle, width: int, height: int) -> Rect:
    """Square circumscribing the circle, clipped to the image."""
    return Rect(c.cx - c.r, c.cy - c.r, c.cx + c.r, c.cy + c.r).clip(width, height)


def detect_faces(img: np.ndarray, cfg: DetectConfig | None = None) -> list[FaceDetection]:
    """Run the full detection pipeline; detections sorted by confidence.

    Returns an empty list (not an error) when nothing clears the confidence
    floor. Raises :class:`ImageTooSmall` below 32x32.
    """
    cfg = cfg or DetectConfig()
    arr = require_rgb(img)
    height, width = arr.shape[:2]
    if width < 32 or height < 32:
        raise ImageTooSmall(f"need at least 32x32, got {width}x{height}")

    whitened = eliminate_nonskin(arr, cfg.thresholds)
    gray = median_filter(to_grayscale(whitened), cfg.median_window)
    mask = skin_mask(arr, cfg.thresholds)
    min_area = int(cfg.min_region_area * width * height)
    regions = segment_skin_regions(mask, min_area)

    min_dim = min(width, height)
    r_min = max(1, int(cfg.r_min_frac * min_dim))
    r_max = max(r_min, int(cfg.r_max_frac * min_dim))

    detections: list[FaceDetection] = []
    for region in regions:
        bb = region.bbox
        if max(bb.width, bb.height) < 2 * r_min:
            continue  # cannot host a circle of the minimum face radius
        pad = max(2, r_max // 10)
        search = Rect(bb.x1 - pad, bb.y1 - pad, bb.x2 + pad, bb.y2 + pad).clip(width, height)
        crop = gray[search.slices()]
        edges = sobel_edges(crop, "magnitude")
        nonzero = edges[edges > 0]
        if nonzero.size == 0:
            continue
        threshold = otsu_threshold(nonzero)
        region_r_max = min(r_max, int(0.75 * max(bb.width, bb.height)))
        if region_r_max < r_min:
            continue
        circles = hough_circles(edges, r_min, region_r_max, threshold, cfg.vote_fraction)
        if not circles:
            continue
        best = max(circles, key=lambda c: (c.score / ideal_perimeter_votes(c.r), -c.r))
        circle = Circle(best.cx + search.x1, best.cy + search.y1, best.r, best.score)
        confidence = face_confidence(arr, mask, circle)
        if confidence < cfg.confidence_floor:
            continue
        bbox = circle_bbox(circle, width, height)
        aspect = max(bbox.width, bbox.height) / min(bbox.width, bbox.height)
        if aspect > cfg.max_bbox_aspect:
            continue
        detections.append(FaceDetection(circle, bbox, confidence, region))

    detections.sort(key=lambda d: (-d.confidence, d.circle.cy, d.circle.cx))
    return detections[: cfg.max_faces]
