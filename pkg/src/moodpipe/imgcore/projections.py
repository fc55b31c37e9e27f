"""Integral projections of an edge map over a rectangle."""

from __future__ import annotations

import numpy as np

from .types import Rect, require_gray, require_rect_inside


def integral_projections(edge: np.ndarray, rect: Rect) -> tuple[np.ndarray, np.ndarray]:
    """Column and row sums over ``rect``.

    Returns ``(V, H)`` where ``V[x - rect.x1]`` sums column x over the rect's
    rows and ``H[y - rect.y1]`` sums row y over the rect's columns. Integer
    inputs are summed in int64 so mass conservation is exact.
    """
    arr = require_gray(edge)
    require_rect_inside(rect, arr)
    crop = arr[rect.slices()]
    dtype = np.int64 if np.issubdtype(arr.dtype, np.integer) else np.float64
    v = crop.sum(axis=0, dtype=dtype)
    h = crop.sum(axis=1, dtype=dtype)
    return v, h
