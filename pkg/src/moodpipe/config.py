"""One flat-key configuration file for every pipeline tunable.

Format: ``key = value`` lines with ``#`` comments. Keys are dotted, values
are scalars except the anthropometric boxes, which are five comma-separated
fractions (x1, y1, x2, y2, prior_y). Unknown keys are rejected so typos fail
loudly. ``save_config`` then ``load_config`` reproduces the identical
effective configuration.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace

from .errors import InvalidConfig
from .facedetect import DetectConfig, SkinThresholds
from .featextract import AnthropometricModel, BandParams, FractionalBox
from .svm import KernelSpec, TrainConfig


@dataclass(frozen=True)
class PipelineConfig:
    """Aggregated settings for detection, extraction and training."""

    seed: int = 0
    skin: SkinThresholds = field(default_factory=SkinThresholds)
    min_region_area: float = 0.01
    r_min_frac: float = 0.10
    r_max_frac: float = 0.45
    confidence_floor: float = 0.35
    max_faces: int = 4
    median_window: int = 3
    vote_fraction: float = 0.3
    max_bbox_aspect: float = 1.6
    anthro: AnthropometricModel = field(default_factory=AnthropometricModel)
    band: BandParams = field(default_factory=BandParams)
    kernel: str = "rbf"
    gamma: float = 1.0 / 7.0
    degree: int = 3
    coef0: float = 1.0
    C: float = 10.0
    kkt_tol: float = 1e-3
    max_passes: int = 200

    def detect_config(self) -> DetectConfig:
        return DetectConfig(
            thresholds=self.skin,
            min_region_area=self.min_region_area,
            r_min_frac=self.r_min_frac,
            r_max_frac=self.r_max_frac,
            confidence_floor=self.confidence_floor,
            max_faces=self.max_faces,
            median_window=self.median_window,
            vote_fraction=self.vote_fraction,
            max_bbox_aspect=self.max_bbox_aspect,
        )

    def kernel_spec(self) -> KernelSpec:
        return KernelSpec(kind=self.kernel, degree=self.degree, coef0=self.coef0, gamma=self.gamma)

    def train_config(self) -> TrainConfig:
        return TrainConfig(C=self.C, kkt_tol=self.kkt_tol, max_passes=self.max_passes, seed=self.seed)


def _fmt_box(box: FractionalBox) -> str:
    return ",".join(repr(v) for v in (box.x1f, box.y1f, box.x2f, box.y2f, box.prior_yf))


def _parse_box(text: str) -> FractionalBox:
    parts = text.split(",")
    if len(parts) != 5:
        raise InvalidConfig(f"expected 5 comma-separated fractions, got {text!r}")
    return FractionalBox(*(float(p) for p in parts))


# key -> (getter, setter-parser, formatter); setters build kwargs trees
_SCALARS = {
    "seed": ("seed", int),
    "skin.hue_min": ("skin.hue_min", float),
    "skin.hue_max": ("skin.hue_max", float),
    "skin.sat_min": ("skin.sat_min", float),
    "skin.sat_max": ("skin.sat_max", float),
    "detect.min_region_area": ("min_region_area", float),
    "detect.r_min_frac": ("r_min_frac", float),
    "detect.r_max_frac": ("r_max_frac", float),
    "detect.confidence_floor": ("confidence_floor", float),
    "detect.max_faces": ("max_faces", int),
    "detect.median_window": ("median_window", int),
    "detect.vote_fraction": ("vote_fraction", float),
    "detect.max_bbox_aspect": ("max_bbox_aspect", float),
    "band.n_regions": ("band.n_regions", int),
    "band.weight": ("band.weight", str),
    "band.median_window": ("band.median_window", int),
    "band.sigma": ("band.sigma", float),
    "svm.kernel": ("kernel", str),
    "svm.gamma": ("gamma", float),
    "svm.degree": ("degree", int),
    "svm.coef0": ("coef0", float),
    "svm.C": ("C", float),
    "svm.kkt_tol": ("kkt_tol", float),
    "svm.max_passes": ("max_passes", int),
}
_BOXES = {
    "anthro.left_eyebrow": "left_eyebrow",
    "anthro.right_eyebrow": "right_eyebrow",
    "anthro.nose": "nose",
    "anthro.lip": "lip",
}


def _get_path(cfg: PipelineConfig, path: str):
    obj = cfg
    for part in path.split("."):
        obj = getattr(obj, part)
    return obj


def config_to_items(cfg: PipelineConfig) -> list[tuple[str, str]]:
    """Flat (key, value-string) pairs in stable order."""
    items = []
    for key, (path, typ) in _SCALARS.items():
        value = _get_path(cfg, path)
        items.append((key, repr(value) if typ is float else str(value)))
    for key, attr in _BOXES.items():
        items.append((key, _fmt_box(getattr(cfg.anthro, attr))))
    return items


def apply_overrides(cfg: PipelineConfig, overrides: dict[str, str]) -> PipelineConfig:
    """Apply flat key=value overrides; unknown keys raise InvalidConfig."""
    top: dict = {}
    skin: dict = {}
    band: dict = {}
    boxes: dict = {}
    for key, raw in overrides.items():
        if key in _SCALARS:
            path, typ = _SCALARS[key]
            try:
                value = typ(raw)
            except ValueError as exc:
                raise InvalidConfig(f"cannot parse {key}={raw!r}: {exc}") from None
            if path.startswith("skin."):
                skin[path.split(".", 1)[1]] = value
            elif path.startswith("band."):
                band[path.split(".", 1)[1]] = value
            else:
                top[path] = value
        elif key in _BOXES:
            boxes[_BOXES[key]] = _parse_box(raw)
        else:
            raise InvalidConfig(f"unknown configuration key {key!r}")
    try:
        if skin:
            top["skin"] = replace(cfg.skin, **skin)
        if band:
            top["band"] = replace(cfg.band, **band)
        if boxes:
            top["anthro"] = replace(cfg.anthro, **boxes)
        cfg = replace(cfg, **top)
        cfg.detect_config()  # trip field validation early
        cfg.kernel_spec()
        cfg.train_config()
    except (ValueError, TypeError) as exc:
        raise InvalidConfig(str(exc)) from None
    return cfg


def save_config(cfg: PipelineConfig, path: str | os.PathLike) -> None:
    lines = [f"{key} = {value}" for key, value in config_to_items(cfg)]
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_config(path: str | os.PathLike) -> PipelineConfig:
    overrides: dict[str, str] = {}
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise InvalidConfig(f"line {lineno}: expected key = value, got {line.rstrip()!r}")
            key, value = (part.strip() for part in text.split("=", 1))
            overrides[key] = value
    return apply_overrides(PipelineConfig(), overrides)
