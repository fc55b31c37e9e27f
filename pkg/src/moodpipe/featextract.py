"""Facial feature extraction on a grayscale face crop.

Each feature follows the same recipe: an anthropometric search box narrows
the region, integral projections of an edge map locate the vertical band with
the most evidence, and the band is refined into an exact binary mask.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import FaceTooSmall, FeatureNotFound, NoFeatureEvidence
from .imgcore import (
    Rect,
    fill_contours,
    gaussian_smooth_1d,
    integral_projections,
    label_mask,
    log_zero_contours,
    median_filter,
    morph,
    otsu_threshold,
    require_gray,
    sobel_edges,
)

FEATURES = ("left_eyebrow", "right_eyebrow", "lip", "nose")


@dataclass(frozen=True)
class FractionalBox:
    """Search box as fractions of the face bbox, plus a vertical prior."""

    x1f: float
    y1f: float
    x2f: float
    y2f: float
    prior_yf: float = 0.5  # fraction of the box height

    def __post_init__(self):
        if not (0.0 <= self.x1f < self.x2f <= 1.0 and 0.0 <= self.y1f < self.y2f <= 1.0):
            raise ValueError(f"fractional box out of the unit square: {self}")


@dataclass(frozen=True)
class AnthropometricModel:
    """Per-feature fractional search boxes inside the face bounding box."""

    left_eyebrow: FractionalBox = field(
        default_factory=lambda: FractionalBox(0.10, 0.15, 0.50, 0.45, prior_yf=0.45)
    )
    right_eyebrow: FractionalBox = field(
        default_factory=lambda: FractionalBox(0.50, 0.15, 0.90, 0.45, prior_yf=0.45)
    )
    nose: FractionalBox = field(
        default_factory=lambda: FractionalBox(0.30, 0.45, 0.70, 0.70, prior_yf=0.5)
    )
    lip: FractionalBox = field(
        default_factory=lambda: FractionalBox(0.20, 0.65, 0.80, 0.95, prior_yf=0.45)
    )

    def __post_init__(self):
        for side in (self.left_eyebrow, self.right_eyebrow):
            if side.y2f > 0.5:
                raise ValueError("eyebrow boxes must lie in the upper half of the face")
        brow_mid = (self.left_eyebrow.y1f + self.left_eyebrow.y2f) / 2
        nose_mid = (self.nose.y1f + self.nose.y2f) / 2
        lip_mid = (self.lip.y1f + self.lip.y2f) / 2
        if not brow_mid <= nose_mid <= lip_mid:
            raise ValueError("nose box must sit between the eyebrow and lip boxes")

    def box(self, feature: str) -> FractionalBox:
        return getattr(self, feature)


@dataclass(frozen=True)
class BandParams:
    """Parameters of the projection-band search."""

    n_regions: int = 5
    weight: str = "uniform"  # or "gaussian"
    median_window: int = 3
    sigma: float = 2.0

    def __post_init__(self):
        if self.n_regions < 2:
            raise ValueError(f"need at least 2 bands, got {self.n_regions}")
        if self.weight not in ("uniform", "gaussian"):
            raise ValueError(f"unknown weight {self.weight!r}")


@dataclass(frozen=True)
class RegionScore:
    """Relative evidence that band ``index`` contains the feature."""

    index: int
    score: float
    band: Rect


@dataclass
class FeatureMasks:
    """Masks and reference points in face-crop coordinates."""

    left_eyebrow: np.ndarray
    right_eyebrow: np.ndarray
    lip: np.ndarray
    nose_y: int
    lip_corners: tuple[tuple[float, float], tuple[float, float]]  # (left, right)
    lip_top_mid: tuple[float, float]
    lip_bottom_mid: tuple[float, float]


def anthropometric_box(face_bbox: Rect, feature: str, model: AnthropometricModel | None = None) -> Rect:
    """Pixel search rect for a feature; fractions scale into the face bbox."""
    model = model or AnthropometricModel()
    if face_bbox.width < 32 or face_bbox.height < 32:
        raise FaceTooSmall(f"face bbox {face_bbox.width}x{face_bbox.height} below 32x32")
    fb = model.box(feature)
    w, h = face_bbox.width, face_bbox.height
    return Rect(
        face_bbox.x1 + int(np.floor(fb.x1f * w)),
        face_bbox.y1 + int(np.floor(fb.y1f * h)),
        face_bbox.x1 + int(np.ceil(fb.x2f * w)) - 1,
        face_bbox.y1 + int(np.ceil(fb.y2f * h)) - 1,
    )


def _band_edges(y1: int, y2: int, n: int) -> list[tuple[int, int]]:
    """Split rows [y1, y2] into n near-equal bands (inclusive row ranges)."""
    total = y2 - y1 + 1
    bounds = [y1 + (total * i) // n for i in range(n + 1)]
    return [(bounds[i], bounds[i + 1] - 1) for i in range(n)]


def smoothed_row_profile(
    edge: np.ndarray, search: Rect, params: BandParams | None = None
) -> np.ndarray:
    """Row-sum profile H(y) over the search rect, median filtered and smoothed."""
    params = params or BandParams()
    _, h_profile = integral_projections(edge, search)
    h_profile = np.asarray(h_profile, dtype=np.float64)
    if h_profile.sum() <= 0:
        raise NoFeatureEvidence(f"no edge mass in {search}")
    if h_profile.size >= params.median_window:
        h_profile = median_filter(h_profile, params.median_window)
    return gaussian_smooth_1d(h_profile, params.sigma)


def locate_feature_band(
    edge: np.ndarray,
    search: Rect,
    n_regions: int | None = None,
    weight: np.ndarray | str | None = None,
    prior_yf: float = 0.5,
    params: BandParams | None = None,
) -> tuple[RegionScore, list[RegionScore]]:
    """Score horizontal bands of the search rect and pick the winner.

    Band scores are the weighted smoothed row sums, normalized so they add to
    one. Ties go to the band whose center is nearest ``prior_yf`` (a fraction
    of the rect height), then to the lowest index.
    """
    params = params or BandParams()
    if n_regions is not None:
        params = replace(params, n_regions=n_regions)
    if params.n_regions > search.height >= 2:  # never split below 1 row per band
        params = replace(params, n_regions=search.height)
    profile = smoothed_row_profile(edge, search, params)

    if weight is None or (isinstance(weight, str) and weight == "uniform"):
        if params.weight == "gaussian" and weight is None:
            weight = "gaussian"
        else:
            weight = np.ones_like(profile)
    if isinstance(weight, str):
        if weight == "gaussian":
            prior_row = prior_yf * (search.height - 1)
            sigma = max(1.0, search.height / params.n_regions)
            weight = np.exp(-0.5 * ((np.arange(search.height) - prior_row) / sigma) ** 2)
        else:
            raise ValueError(f"unknown weight {weight!r}")
    weight = np.asarray(weight, dtype=np.float64)
    if weight.shape != profile.shape:
        raise ValueError("weight vector length must match the search rect height")

    weighted = profile * weight
    total = weighted.sum()
    if total <= 0:
        raise NoFeatureEvidence(f"no weighted edge mass in {search}")

    scores: list[RegionScore] = []
    for i, (b1, b2) in enumerate(_band_edges(search.y1, search.y2, params.n_regions)):
        mass = weighted[b1 - search.y1 : b2 - search.y1 + 1].sum() / total
        scores.append(RegionScore(i, float(mass), Rect(search.x1, b1, search.x2, b2)))

    best = max(s.score for s in scores)
    tied = [s for s in scores if s.score >= best - 1e-12]
    prior_row = search.y1 + prior_yf * (search.height - 1)
    winner = min(tied, key=lambda s: (abs((s.band.y1 + s.band.y2) / 2 - prior_row), s.index))
    return winner, scores


def _pad_band(band: Rect, search: Rect, pad_bands: float, n_regions: int) -> Rect:
    """Expand a winning band vertically by pad_bands band heights, inside the box."""
    pad = int(round(pad_bands * search.height / n_regions))
    return Rect(
        band.x1, max(search.y1, band.y1 - pad), band.x2, min(search.y2, band.y2 + pad)
    )


def extract_eyebrow(
    face_crop: np.ndarray,
    side: str,
    model: AnthropometricModel | None = None,
    params: BandParams | None = None,
    pad_bands: float = 1.0,
    diagnostics: dict | None = None,
) -> np.ndarray:
    """Segment one eyebrow; returns a mask in face-crop coordinates.

    The band around the strongest horizontal-edge evidence is refined with
    Laplacian-of-Gaussian zero contours, contour filling and a horizontally
    stretched morphological close. Of the two largest filled regions the one
    with the higher centroid (smaller y) is the eyebrow; the lower one is the
    eye.
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    feature = f"{side}_eyebrow"
    crop = require_gray(face_crop)
    model = model or AnthropometricModel()
    params = params or BandParams()
    h, w = crop.shape
    box = anthropometric_box(Rect(0, 0, w - 1, h - 1), feature, model)

    edges = sobel_edges(crop, "horizontal")
    try:
        winner, scores = locate_feature_band(
            edges, box, prior_yf=model.box(feature).prior_yf, params=params
        )
    except NoFeatureEvidence:
        raise FeatureNotFound(feature, "no edge evidence in the eyebrow box")
    if diagnostics is not None:
        diagnostics[feature] = scores

    band = _pad_band(winner.band, box, pad_bands, params.n_regions)
    sub = crop[band.slices()]
    contours = log_zero_contours(sub, sigma=1.5)
    filled = fill_contours(contours)
    filled = morph(filled, "close", a=4, b=1)
    labels, regions = label_mask(filled, connectivity=8)
    if not regions:
        raise FeatureNotFound(feature, "no filled regions in the eyebrow band")
    # the runner-up competes only when comparable in size; tiny fragments
    # (head-boundary slivers and the like) must not outrank the real feature
    top_two = [r for r in regions[:2] if r.area >= 0.3 * regions[0].area]
    chosen = min(top_two, key=lambda r: (r.centroid[1], r.centroid[0]))

    component = labels == chosen.label
    # the filled zero-crossing contour plus the horizontal close ring the brow
    # 1-2 px outside its ink; shrink by the same reach so the mask does not
    # carry a fixed-pixel halo
    eroded = morph(component, "erode", a=4, b=2)
    if eroded.any():
        component = eroded
    out = np.zeros(crop.shape, dtype=bool)
    ys, xs = np.nonzero(component)
    out[ys + band.y1, xs + band.x1] = True
    return out


def extract_lip(
    face_crop: np.ndarray,
    model: AnthropometricModel | None = None,
    params: BandParams | None = None,
    pad_bands: float = 4.0,
    diagnostics: dict | None = None,
) -> tuple[np.ndarray, tuple, tuple, tuple]:
    """Segment the lip; returns (mask, corners, top_mid, bottom_mid).

    Lip edges occur in both directions, so the band search runs on the
    elementwise max of the horizontal and vertical Sobel maps. Corners are the
    extreme-x mask pixels; the midpoints average the top and bottom boundary
    over the middle fifth of the mask width.
    """
    crop = require_gray(face_crop)
    model = model or AnthropometricModel()
    params = params or BandParams()
    h, w = crop.shape
    box = anthropometric_box(Rect(0, 0, w - 1, h - 1), "lip", model)

    edges = np.maximum(sobel_edges(crop, "horizontal"), sobel_edges(crop, "vertical"))
    try:
        winner, scores = locate_feature_band(
            edges, box, prior_yf=model.lip.prior_yf, params=params
        )
    except NoFeatureEvidence:
        raise FeatureNotFound("lip", "no edge evidence in the lip box")
    if diagnostics is not None:
        diagnostics["lip"] = scores

    band = _pad_band(winner.band, box, pad_bands, params.n_regions)
    sub = edges[band.slices()]
    if not (sub > 0).any():
        raise FeatureNotFound("lip", "empty lip band")
    # threshold over the full band (zeros included) so uniform-strength lip
    # edges land entirely in the upper class
    binary = sub > otsu_threshold(sub)
    binary = fill_contours(morph(binary, "close", a=3, b=2))
    # the edge response extends ~1 px beyond the lip on every side; shrink the
    # filled mask back so measurements do not carry a fixed-pixel halo
    binary = morph(binary, "erode", a=2, b=2)
    labels, regions = label_mask(binary, connectivity=8)
    if not regions:
        raise FeatureNotFound("lip", "no lip component after morphology")

    mask = np.zeros(crop.shape, dtype=bool)
    ys, xs = np.nonzero(labels == regions[0].label)
    ys = ys + band.y1
    xs = xs + band.x1
    mask[ys, xs] = True

    left_x, right_x = int(xs.min()), int(xs.max())
    left_y = int(ys[xs == left_x].max())  # ties resolved to the lower pixel
    right_y = int(ys[xs == right_x].max())
    corners = ((float(left_x), float(left_y)), (float(right_x), float(right_y)))

    mid_lo = left_x + 0.4 * (right_x - left_x)
    mid_hi = left_x + 0.6 * (right_x - left_x)
    center_cols = np.unique(xs[(xs >= mid_lo) & (xs <= mid_hi)])
    if center_cols.size == 0:
        center_cols = np.unique(xs)
    tops = [(c, ys[xs == c].min()) for c in center_cols]
    bottoms = [(c, ys[xs == c].max()) for c in center_cols]
    top_mid = _snap_to_mask(mask, np.mean([c for c, _ in tops]), np.mean([y for _, y in tops]))
    bottom_mid = _snap_to_mask(
        mask, np.mean([c for c, _ in bottoms]), np.mean([y for _, y in bottoms])
    )
    return mask, corners, top_mid, bottom_mid


def _snap_to_mask(mask: np.ndarray, x: float, y: float) -> tuple[float, float]:
    """Nearest mask pixel to (x, y), so reported points always lie on the mask."""
    xi, yi = int(round(x)), int(round(y))
    if 0 <= yi < mask.shape[0] and 0 <= xi < mask.shape[1] and mask[yi, xi]:
        return float(xi), float(yi)
    ys, xs = np.nonzero(mask)
    k = np.argmin((xs - x) ** 2 + (ys - y) ** 2)
    return float(xs[k]), float(ys[k])


def extract_nose_ref(
    face_crop: np.ndarray,
    model: AnthropometricModel | None = None,
    params: BandParams | None = None,
    diagnostics: dict | None = None,
) -> int:
    """Vertical nose reference row from vertical Sobel edges in the nose box."""
    crop = require_gray(face_crop)
    model = model or AnthropometricModel()
    params = params or BandParams()
    h, w = crop.shape
    box = anthropometric_box(Rect(0, 0, w - 1, h - 1), "nose", model)

    edges = sobel_edges(crop, "vertical")
    try:
        profile = smoothed_row_profile(edges, box, params)
        if diagnostics is not None:
            _, scores = locate_feature_band(edges, box, prior_yf=model.nose.prior_yf, params=params)
            diagnostics["nose"] = scores
    except NoFeatureEvidence:
        raise FeatureNotFound("nose", "no edge evidence in the nose box")

    best = profile.max()
    rows = np.nonzero(profile >= best - 1e-12)[0]
    prior_row = model.nose.prior_yf * (box.height - 1)
    winner = rows[np.argmin(np.abs(rows - prior_row))]
    return int(box.y1 + winner)


def extract_all(
    face_crop: np.ndarray,
    model: AnthropometricModel | None = None,
    params: BandParams | None = None,
    diagnostics: dict | None = None,
) -> FeatureMasks:
    """Run all four extractions; raises FeatureNotFound naming the first failure."""
    left = extract_eyebrow(face_crop, "left", model, params, diagnostics=diagnostics)
    right = extract_eyebrow(face_crop, "right", model, params, diagnostics=diagnostics)
    lip_mask, corners, top_mid, bottom_mid = extract_lip(
        face_crop, model, params, diagnostics=diagnostics
    )
    nose_y = extract_nose_ref(face_crop, model, params, diagnostics=diagnostics)
    return FeatureMasks(left, right, lip_mask, nose_y, corners, top_mid, bottom_mid)
