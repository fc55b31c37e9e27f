"""Minimal drawing helpers for annotated output."""

from __future__ import annotations

import numpy as np

from .hough import circle_points
from .types import Circle, Rect


def draw_circle(img: np.ndarray, circle: Circle, color=(255, 0, 0)) -> None:
    """Draw a 1-px circle outline in place, clipped to the image."""
    h, w = img.shape[:2]
    ys, xs = circle_points(circle.cx, circle.cy, circle.r)
    ok = (ys >= 0) & (ys < h) & (xs >= 0) & (xs < w)
    img[ys[ok], xs[ok]] = color


def draw_rect(img: np.ndarray, rect: Rect, color=(255, 0, 0)) -> None:
    """Draw a 1-px rectangle border in place, clipped to the image."""
    h, w = img.shape[:2]
    r = rect.clip(w, h)
    img[r.y1, r.x1 : r.x2 + 1] = color
    img[r.y2, r.x1 : r.x2 + 1] = color
    img[r.y1 : r.y2 + 1, r.x1] = color
    img[r.y1 : r.y2 + 1, r.x2] = color
