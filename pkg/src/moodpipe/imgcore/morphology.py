"""Binary morphology, contour filling and connected components."""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from .types import Rect, Region, require_mask

_STRUCT_4 = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)
_STRUCT_8 = np.ones((3, 3), dtype=bool)


def elliptic_element(a: int, b: int) -> list[tuple[int, int]]:
    """Offsets (dx, dy) of an elliptic structuring element.

    ``a`` and ``b`` are the full horizontal and vertical axis lengths, so the
    element spans about a pixels across and b pixels down: (a=2, b=1) is the
    3-pixel horizontal segment, (a=2, b=2) the 4-neighborhood plus center.
    """
    a = max(1, int(a))
    b = max(1, int(b))
    offsets = []
    for dy in range(-b, b + 1):
        for dx in range(-a, a + 1):
            if (2 * dx / a) ** 2 + (2 * dy / b) ** 2 <= 1.0:
                offsets.append((dx, dy))
    return offsets


def _shift(mask: np.ndarray, dx: int, dy: int, fill: bool) -> np.ndarray:
    """Shift a mask by (dx, dy); vacated cells take the fill value."""
    out = np.full_like(mask, fill)
    h, w = mask.shape
    ys = slice(max(dy, 0), min(h + dy, h))
    xs = slice(max(dx, 0), min(w + dx, w))
    ys_src = slice(max(-dy, 0), min(h - dy, h))
    xs_src = slice(max(-dx, 0), min(w - dx, w))
    out[ys, xs] = mask[ys_src, xs_src]
    return out


def morph(mask: np.ndarray, op: str, a: int = 1, b: int = 1) -> np.ndarray:
    """Morphological dilate/erode/open/close with an elliptic element.

    Border convention: dilation collects votes only from in-frame pixels,
    erosion treats out-of-bounds neighbors as foreground. This keeps closing
    extensive and opening anti-extensive for masks touching the border.
    """
    m = require_mask(mask)
    offsets = elliptic_element(a, b)
    if op == "dilate":
        out = np.zeros_like(m)
        for dx, dy in offsets:
            out |= _shift(m, dx, dy, fill=False)
        return out
    if op == "erode":
        out = np.ones_like(m)
        for dx, dy in offsets:
            out &= _shift(m, -dx, -dy, fill=True)
        return out
    if op == "open":
        return morph(morph(m, "erode", a, b), "dilate", a, b)
    if op == "close":
        return morph(morph(m, "dilate", a, b), "erode", a, b)
    raise ValueError(f"unknown morphology op {op!r}")


def fill_contours(mask: np.ndarray) -> np.ndarray:
    """Fill everything not reachable from the border through background.

    Background is flood-filled 4-connected from every border pixel; the output
    marks contour pixels plus any enclosed interior.
    """
    m = require_mask(mask)
    h, w = m.shape
    free = ~m
    reached = np.zeros_like(m)
    frontier = np.zeros_like(m)
    frontier[0, :] = free[0, :]
    frontier[-1, :] = free[-1, :]
    frontier[:, 0] = free[:, 0]
    frontier[:, -1] = free[:, -1]
    reached |= frontier
    while frontier.any():
        grown = np.zeros_like(m)
        grown[1:, :] |= frontier[:-1, :]
        grown[:-1, :] |= frontier[1:, :]
        grown[:, 1:] |= frontier[:, :-1]
        grown[:, :-1] |= frontier[:, 1:]
        frontier = grown & free & ~reached
        reached |= frontier
    return ~reached


def label_mask(mask: np.ndarray, connectivity: int = 8) -> tuple[np.ndarray, list[Region]]:
    """Label a mask; returns the label array and regions sorted by area descending.

    ``labels == region.label`` selects exactly that region's pixels. Area ties
    are broken by raster order of the region's bbox so the result is
    deterministic.
    """
    m = require_mask(mask)
    if connectivity == 4:
        structure = _STRUCT_4
    elif connectivity == 8:
        structure = _STRUCT_8
    else:
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")
    labels, count = ndimage.label(m, structure=structure)
    if count == 0:
        return labels, []
    idx = np.arange(1, count + 1)
    areas = ndimage.sum_labels(np.ones_like(m, dtype=np.int64), labels, idx)
    regions = []
    for label, sl in zip(idx, ndimage.find_objects(labels)):
        ys, xs = np.nonzero(labels[sl] == label)
        ys = ys + sl[0].start
        xs = xs + sl[1].start
        bbox = Rect(int(xs.min()), int(ys.min()), int(xs.max()), int(ys.max()))
        centroid = (float(xs.mean()), float(ys.mean()))
        regions.append(Region(int(label), int(areas[label - 1]), centroid, bbox))
    regions.sort(key=lambda r: (-r.area, r.bbox.y1, r.bbox.x1, r.label))
    return labels, regions


def connected_components(mask: np.ndarray, connectivity: int = 8) -> list[Region]:
    """Connected regions of a mask, sorted by area descending."""
    return label_mask(mask, connectivity)[1]
