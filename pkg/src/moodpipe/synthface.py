"""Deterministic parametric face renderer with exact ground truth.

Faces are hard-edged (no anti-aliasing) so edge maps and Hough votes are
exactly analyzable. All geometry is parameterized in units of the head radius
and recorded in the returned truth object, which doubles as the oracle for
detection and extraction tests and as the training-corpus source.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .errors import InvalidParams
from .facedetect import SkinThresholds, rgb_to_hsv
from .imgcore import Rect, save_image
from .svm.multiclass import EXPRESSIONS

INK = (60, 60, 60)  # achromatic, so features punch holes in the skin mask

# documented ranges of the fractional parameters (units of head radius)
RANGES = {
    "brow_elevation": (0.38, 0.58),  # brow row above the face center
    "brow_arch": (-0.05, 0.05),
    "brow_gap": (0.22, 0.42),
    "eye_size": (0.09, 0.13),
    "mouth_width": (0.34, 0.64),
    "mouth_openness": (0.02, 0.40),
    "corner_lift": (-0.22, 0.30),
    "nose_offset": (-0.06, 0.06),
}
HEAD_RANGES = {"cx": (0.40, 0.60), "cy": (0.42, 0.58), "r": (0.28, 0.40)}

# fixed proportions (units of head radius)
_EYE_LINE = 0.14  # eye row above center; brows are anchored independently
_EYE_OFFSET_X = 0.58  # wide-set eyes stay clear of the nose search box
_BROW_LENGTH = 0.44
_BROW_THICKNESS = 0.07
_NOSE_ROW = 0.12  # below center, before nose_offset
_NOSE_HALF_WIDTH = 0.11
_NOSE_THICKNESS = 0.08
_MOUTH_ROW = 0.66
_LIP_THICKNESS = 0.05


@dataclass(frozen=True)
class FaceParams:
    """Everything needed to render one synthetic face."""

    size: int = 256
    head_cx: int = 128
    head_cy: int = 128
    head_r: int = 87
    skin: tuple[int, int, int] = (219, 172, 152)
    background: tuple[int, int, int] = (255, 255, 255)
    brow_elevation: float = 0.46
    brow_arch: float = 0.03
    brow_gap: float = 0.30
    eye_size: float = 0.11
    mouth_width: float = 0.50
    mouth_openness: float = 0.08
    corner_lift: float = 0.02
    nose_offset: float = 0.0

    def validate(self) -> None:
        if self.size < 32:
            raise InvalidParams(f"image size {self.size} too small")
        if not (
            self.head_r >= 16
            and self.head_cx - self.head_r >= 0
            and self.head_cy - self.head_r >= 0
            and self.head_cx + self.head_r < self.size
            and self.head_cy + self.head_r < self.size
        ):
            raise InvalidParams("head circle must lie inside the image")
        for name, (lo, hi) in RANGES.items():
            value = getattr(self, name)
            if not lo <= value <= hi:
                raise InvalidParams(f"{name}={value} outside [{lo}, {hi}]")
        h, s, _ = rgb_to_hsv(*self.skin)
        t = SkinThresholds()
        if not (t.hue_min <= h <= t.hue_max and t.sat_min <= s <= t.sat_max):
            raise InvalidParams(f"skin color {self.skin} outside the default skin thresholds")


@dataclass
class SynthFaceTruth:
    """Ground-truth geometry of a rendered face, in image coordinates."""

    bbox: Rect
    label: str
    params: FaceParams
    masks: dict[str, np.ndarray] = field(default_factory=dict)
    centroids: dict[str, tuple[float, float]] = field(default_factory=dict)
    nose_row: int = 0
    lip_corners: tuple[tuple[float, float], tuple[float, float]] = ((0, 0), (0, 0))
    lip_top_mid: tuple[float, float] = (0, 0)
    lip_bottom_mid: tuple[float, float] = (0, 0)


def _paint(img: np.ndarray, mask: np.ndarray, color) -> None:
    img[mask] = color


def _disk_mask(size: int, cx: float, cy: float, r: float) -> np.ndarray:
    ys, xs = np.mgrid[0:size, 0:size]
    return (xs - cx) ** 2 + (ys - cy) ** 2 <= r * r


def _ellipse_mask(size: int, cx: float, cy: float, ax: float, ay: float) -> np.ndarray:
    ys, xs = np.mgrid[0:size, 0:size]
    return ((xs - cx) / ax) ** 2 + ((ys - cy) / ay) ** 2 <= 1.0


def _column_band(size: int, x0: int, x1: int, center_of, half_height) -> np.ndarray:
    """Region between center(x) +- hh(x) over columns [x0, x1].

    ``half_height`` may be a constant or a per-column callable.
    """
    mask = np.zeros((size, size), dtype=bool)
    hh = half_height if callable(half_height) else (lambda _x: half_height)
    for x in range(max(0, x0), min(size - 1, x1) + 1):
        c = center_of(x)
        h = hh(x)
        y1 = max(0, int(round(c - h)))
        y2 = min(size - 1, int(round(c + h)))
        if y1 <= y2:
            mask[y1 : y2 + 1, x] = True
    return mask


def render_face(p: FaceParams, label: str = "") -> tuple[np.ndarray, SynthFaceTruth]:
    """Render a face and its exact ground truth. Deterministic, no RNG."""
    p.validate()
    size, cx, cy, r = p.size, p.head_cx, p.head_cy, p.head_r
    img = np.empty((size, size, 3), dtype=np.uint8)
    img[:] = p.background
    head = _disk_mask(size, cx, cy, r)
    _paint(img, head, p.skin)

    masks: dict[str, np.ndarray] = {}
    eye_y = cy - _EYE_LINE * r
    brow_y = cy - p.brow_elevation * r
    arch = p.brow_arch * r
    half_gap = p.brow_gap * r / 2.0
    brow_len = _BROW_LENGTH * r
    brow_half_th = max(1.0, _BROW_THICKNESS * r / 2.0)

    for side, sign in (("left", -1), ("right", +1)):
        inner = cx + sign * half_gap
        outer = cx + sign * (half_gap + brow_len)
        x0, x1 = (int(round(min(inner, outer))), int(round(max(inner, outer))))

        def brow_center(x, inner=inner, outer=outer):
            t = (x - inner) / (outer - inner)
            return brow_y - arch * 4.0 * t * (1.0 - t)

        masks[f"{side}_eyebrow"] = _column_band(size, x0, x1, brow_center, brow_half_th)

        eye_ax = p.eye_size * r
        eye_ay = 0.6 * eye_ax
        masks[f"{side}_eye"] = _ellipse_mask(size, cx + sign * _EYE_OFFSET_X * r, eye_y, eye_ax, eye_ay)

    nose_y = cy + (_NOSE_ROW + p.nose_offset) * r
    nose_mask = np.zeros((size, size), dtype=bool)
    ny1 = int(round(nose_y - max(1.0, _NOSE_THICKNESS * r / 2.0)))
    ny2 = int(round(nose_y + max(1.0, _NOSE_THICKNESS * r / 2.0)))
    nx1 = int(round(cx - _NOSE_HALF_WIDTH * r))
    nx2 = int(round(cx + _NOSE_HALF_WIDTH * r))
    nose_mask[max(0, ny1) : ny2 + 1, max(0, nx1) : nx2 + 1] = True
    masks["nose"] = nose_mask

    mouth_y = cy + _MOUTH_ROW * r
    half_w = p.mouth_width * r / 2.0
    lift = p.corner_lift * r
    half_h = (p.mouth_openness * r + max(2.0, _LIP_THICKNESS * r)) / 2.0
    mx0, mx1 = int(round(cx - half_w)), int(round(cx + half_w))

    def lip_center(x):
        u = (x - cx) / half_w
        return mouth_y - lift * u * u

    def lip_half_height(x):
        # lens taper: the mouth closes to a point at the corners
        u = (x - cx) / half_w
        return max(1.0, half_h * np.sqrt(max(0.0, 1.0 - u * u)))

    masks["lip"] = _column_band(size, mx0, mx1, lip_center, lip_half_height)

    for name in ("left_eyebrow", "right_eyebrow", "left_eye", "right_eye", "nose", "lip"):
        _paint(img, masks[name], INK)

    bbox = Rect(cx - r, cy - r, cx + r, cy + r).clip(size, size)
    truth = SynthFaceTruth(bbox=bbox, label=label, params=p, masks=masks)
    for name, mask in masks.items():
        ys, xs = np.nonzero(mask)
        truth.centroids[name] = (float(xs.mean()), float(ys.mean()))
    truth.nose_row = int(round(nose_y))
    truth.lip_corners = (
        (float(mx0), float(lip_center(mx0))),
        (float(mx1), float(lip_center(mx1))),
    )
    truth.lip_top_mid = (float(cx), float(mouth_y - half_h))
    truth.lip_bottom_mid = (float(cx), float(mouth_y + half_h))
    return img, truth


# base presets: the six expression prototypes
_PRESETS: dict[str, dict[str, float]] = {
    "Anger": dict(brow_elevation=0.40, brow_arch=-0.05, brow_gap=0.26, eye_size=0.11,
                  mouth_width=0.50, mouth_openness=0.04, corner_lift=-0.06, nose_offset=0.0),
    "Disgust": dict(brow_elevation=0.41, brow_arch=-0.02, brow_gap=0.30, eye_size=0.10,
                    mouth_width=0.46, mouth_openness=0.10, corner_lift=-0.14, nose_offset=-0.045),
    "Fear": dict(brow_elevation=0.53, brow_arch=0.03, brow_gap=0.34, eye_size=0.12,
                 mouth_width=0.38, mouth_openness=0.16, corner_lift=0.00, nose_offset=0.0),
    "Joy": dict(brow_elevation=0.47, brow_arch=0.03, brow_gap=0.30, eye_size=0.11,
                mouth_width=0.62, mouth_openness=0.10, corner_lift=0.14, nose_offset=0.0),
    "Sadness": dict(brow_elevation=0.43, brow_arch=-0.04, brow_gap=0.28, eye_size=0.10,
                    mouth_width=0.44, mouth_openness=0.06, corner_lift=-0.16, nose_offset=0.0),
    "Surprise": dict(brow_elevation=0.56, brow_arch=0.04, brow_gap=0.32, eye_size=0.13,
                     mouth_width=0.36, mouth_openness=0.38, corner_lift=0.02, nose_offset=0.0),
}
_HEAD_BASE = {"cx": 0.50, "cy": 0.50, "r": 0.34}


def expression_preset(expression: str, jitter: float = 0.0, seed: int = 0, size: int = 256) -> FaceParams:
    """Parameters for one expression, optionally jittered.

    Each fractional parameter is perturbed by a seeded uniform draw of up to
    ``jitter`` times its documented range width, then clamped to the range.
    ``jitter`` 0 returns the base preset regardless of seed.
    """
    if expression not in _PRESETS:
        raise ValueError(f"unknown expression {expression!r}")
    if not 0.0 <= jitter <= 0.5:
        raise InvalidParams(f"jitter must be in [0, 0.5], got {jitter}")
    rng = np.random.default_rng([seed, EXPRESSIONS.index(expression)])

    values = dict(_PRESETS[expression])
    for name in sorted(RANGES):  # fixed draw order keeps results reproducible
        lo, hi = RANGES[name]
        delta = rng.uniform(-jitter, jitter) * (hi - lo)
        values[name] = float(np.clip(values[name] + delta, lo, hi))

    head = {}
    for name in sorted(HEAD_RANGES):
        lo, hi = HEAD_RANGES[name]
        base = _HEAD_BASE[name]
        delta = rng.uniform(-jitter, jitter) * (hi - lo)
        head[name] = float(np.clip(base + delta, lo, hi))

    r = int(round(head["r"] * size))
    cx = int(round(np.clip(head["cx"] * size, r + 1, size - r - 2)))
    cy = int(round(np.clip(head["cy"] * size, r + 1, size - r - 2)))
    return FaceParams(size=size, head_cx=cx, head_cy=cy, head_r=r, **values)


def _child_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def generate_faces(
    n_per_class: int, jitter: float, seed: int, size: int = 256
) -> list[tuple[np.ndarray, SynthFaceTruth]]:
    """Render 6 * n_per_class faces in memory, deterministic in (n, jitter, seed)."""
    if n_per_class < 1:
        raise InvalidParams(f"n_per_class must be >= 1, got {n_per_class}")
    out = []
    index = 0
    for label in EXPRESSIONS:
        for _ in range(n_per_class):
            params = expression_preset(label, jitter, _child_seed(seed, index), size)
            out.append(render_face(params, label))
            index += 1
    return out


def _truth_sidecar_lines(truth: SynthFaceTruth) -> list[str]:
    b = truth.bbox
    lines = [
        f"label={truth.label}",
        f"bbox={b.x1},{b.y1},{b.x2},{b.y2}",
        f"nose_row={truth.nose_row}",
        "lip_corner_left=%.3f,%.3f" % truth.lip_corners[0],
        "lip_corner_right=%.3f,%.3f" % truth.lip_corners[1],
        "lip_top_mid=%.3f,%.3f" % truth.lip_top_mid,
        "lip_bottom_mid=%.3f,%.3f" % truth.lip_bottom_mid,
    ]
    for name in sorted(truth.centroids):
        lines.append("centroid.%s=%.3f,%.3f" % (name, *truth.centroids[name]))
    for f in fields(FaceParams):
        value = getattr(truth.params, f.name)
        lines.append(f"param.{f.name}={value}")
    return lines


def read_truth_sidecar(path: str | os.PathLike) -> dict[str, str]:
    out = {}
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            key, _, value = line.rstrip("\n").partition("=")
            out[key] = value
    return out


def generate_corpus(
    n_per_class: int, jitter: float, seed: int, out_dir: str | os.PathLike, size: int = 256
) -> Path:
    """Write images, truth sidecars and a manifest; returns the manifest path.

    Repeated runs with the same arguments produce byte-identical files.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    faces = generate_faces(n_per_class, jitter, seed, size)
    manifest_path = out / "manifest.csv"
    rows = []
    for i, (img, truth) in enumerate(faces):
        stem = f"{truth.label.lower()}_{i % n_per_class:03d}"
        image_name = stem + ".ppm"
        save_image(out / image_name, img)
        with open(out / (stem + ".truth.txt"), "w", encoding="ascii") as fh:
            fh.write("\n".join(_truth_sidecar_lines(truth)) + "\n")
        rows.append((image_name, truth.label))
    with open(manifest_path, "w", encoding="ascii", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["path", "label"])
        writer.writerows(rows)
    return manifest_path
