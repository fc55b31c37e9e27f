"""Shared geometric types and array conventions.

Images are plain numpy arrays:

* color image  -- ``uint8`` array of shape ``(height, width, 3)``, RGB order
* gray image   -- ``uint8`` array of shape ``(height, width)``
* edge map     -- ``float64`` array of shape ``(height, width)``, values >= 0
* binary mask  -- ``bool`` array of shape ``(height, width)``

Pixel coordinates are ``(x, y)`` with x = column and y = row; rectangles are
inclusive on both ends.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidChannelCount, InvalidRect


@dataclass(frozen=True)
class Rect:
    """Inclusive pixel rectangle [x1, x2] x [y1, y2]."""

    x1: int
    y1: int
    x2: int
    y2: int

    def __post_init__(self):
        if self.x1 > self.x2 or self.y1 > self.y2:
            raise InvalidRect(f"degenerate rect {self}")

    @property
    def width(self) -> int:
        return self.x2 - self.x1 + 1

    @property
    def height(self) -> int:
        return self.y2 - self.y1 + 1

    @property
    def area(self) -> int:
        return self.width * self.height

    def clip(self, width: int, height: int) -> "Rect":
        """Clip to an image of the given dimensions."""
        return Rect(
            max(0, min(self.x1, width - 1)),
            max(0, min(self.y1, height - 1)),
            max(0, min(self.x2, width - 1)),
            max(0, min(self.y2, height - 1)),
        )

    def contains_point(self, x: float, y: float) -> bool:
        return self.x1 <= x <= self.x2 and self.y1 <= y <= self.y2

    def slices(self) -> tuple[slice, slice]:
        """(row slice, column slice) for numpy indexing."""
        return slice(self.y1, self.y2 + 1), slice(self.x1, self.x2 + 1)


@dataclass(frozen=True)
class Circle:
    """Circle candidate with its accumulator score."""

    cx: int
    cy: int
    r: int
    score: int = 0

    def __post_init__(self):
        if self.r <= 0:
            raise InvalidRect(f"circle radius must be positive, got {self.r}")


@dataclass(frozen=True)
class Region:
    """Connected component of a binary mask."""

    label: int
    area: int
    centroid: tuple[float, float]  # (x, y)
    bbox: Rect


def require_rgb(img: np.ndarray) -> np.ndarray:
    """Validate a 3-channel uint8 image and return it as a contiguous array."""
    arr = np.asarray(img)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise InvalidChannelCount(
            f"expected 3-channel image, got shape {arr.shape}"
        )
    return np.ascontiguousarray(arr)


def require_gray(img: np.ndarray) -> np.ndarray:
    """Validate a single-channel image (uint8 or float edge map)."""
    arr = np.asarray(img)
    if arr.ndim != 2:
        raise InvalidChannelCount(
            f"expected single-channel image, got shape {arr.shape}"
        )
    return arr


def require_mask(mask: np.ndarray) -> np.ndarray:
    """Validate a boolean mask."""
    arr = np.asarray(mask)
    if arr.ndim != 2:
        raise InvalidChannelCount(f"expected 2-d mask, got shape {arr.shape}")
    return arr.astype(bool, copy=False)


def require_rect_inside(rect: Rect, img: np.ndarray) -> Rect:
    """Check that a rect lies inside the image bounds."""
    h, w = img.shape[:2]
    if rect.x1 < 0 or rect.y1 < 0 or rect.x2 >= w or rect.y2 >= h:
        raise InvalidRect(f"rect {rect} outside image {w}x{h}")
    return rect
