"""Circle detection by Hough voting in (cx, cy, r) space."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..errors import InvalidRadiusRange
from .types import Circle, require_gray


@lru_cache(maxsize=512)
def circle_perimeter_offsets(r: int) -> tuple[np.ndarray, np.ndarray]:
    """Midpoint-circle perimeter offsets for radius r, as (dy, dx) arrays.

    The same rasterization is used for drawing circles and for Hough voting so
    a rendered circle votes its full perimeter into the true center cell.
    """
    if r <= 0:
        raise InvalidRadiusRange(f"radius must be positive, got {r}")
    pts = set()
    x, y, err = r, 0, 1 - r
    while x >= y:
        for dx, dy in ((x, y), (y, x), (-y, x), (-x, y), (-x, -y), (-y, -x), (y, -x), (x, -y)):
            pts.add((dy, dx))
        y += 1
        if err < 0:
            err += 2 * y + 1
        else:
            x -= 1
            err += 2 * (y - x) + 1
    pts = sorted(pts)
    arr = np.array(pts, dtype=np.int64)
    return arr[:, 0].copy(), arr[:, 1].copy()


def ideal_perimeter_votes(r: int) -> int:
    """Number of accumulator votes a perfect rasterized circle casts at its center."""
    return circle_perimeter_offsets(r)[0].size


def circle_points(cx: int, cy: int, r: int) -> tuple[np.ndarray, np.ndarray]:
    """Absolute (ys, xs) of the rasterized circle perimeter."""
    dys, dxs = circle_perimeter_offsets(r)
    return dys + cy, dxs + cx


def hough_circles(
    edge: np.ndarray,
    r_min: int,
    r_max: int,
    edge_threshold: float = 0.0,
    vote_fraction: float = 0.3,
) -> list[Circle]:
    """Find circles; 1-pixel accumulator resolution in center and radius.

    Pixels with edge value above ``edge_threshold`` vote along circles of each
    candidate radius. A candidate must be a local maximum of its radius slice
    and collect at least ``vote_fraction`` of the ideal perimeter votes for
    that radius. Near-duplicates are suppressed: a candidate is dropped when
    its center lies within ``max(r_kept, r_cand) / 2`` of an already accepted
    circle. The result is sorted by raw vote count descending.
    """
    if r_min <= 0 or r_min > r_max:
        raise InvalidRadiusRange(f"invalid radius range [{r_min}, {r_max}]")
    if not 0.0 < vote_fraction <= 1.0:
        raise ValueError(f"vote_fraction must be in (0, 1], got {vote_fraction}")
    arr = require_gray(edge)
    h, w = arr.shape
    ys, xs = np.nonzero(arr > edge_threshold)
    if ys.size == 0:
        return []

    # votes land in a frame padded by r_max so no per-vote bounds check is needed
    pad = r_max
    w2, h2 = w + 2 * pad, h + 2 * pad
    base = ((ys + pad) * w2 + (xs + pad)).astype(np.int64)

    candidates: list[tuple[float, int, int, int, int]] = []
    neighbor_shifts = np.array(
        [-w2 - 1, -w2, -w2 + 1, -1, 1, w2 - 1, w2, w2 + 1], dtype=np.int64
    )
    for r in range(r_min, r_max + 1):
        dys, dxs = circle_perimeter_offsets(r)
        ideal = dys.size
        shifts = -dys * w2 - dxs
        acc = np.bincount((base[:, None] + shifts[None, :]).ravel(), minlength=h2 * w2)
        strong = np.nonzero(acc >= vote_fraction * ideal)[0]
        if strong.size == 0:
            continue
        py = strong // w2 - pad
        px = strong % w2 - pad
        in_image = (py >= 0) & (py < h) & (px >= 0) & (px < w)
        strong = strong[in_image]
        if strong.size == 0:
            continue
        # local maxima of this radius slice (8-neighborhood)
        local_max = np.all(
            acc[strong[:, None]] >= acc[strong[:, None] + neighbor_shifts[None, :]], axis=1
        )
        for flat in strong[local_max]:
            votes = int(acc[flat])
            candidates.append(
                (votes / ideal, votes, r, int(flat // w2 - pad), int(flat % w2 - pad))
            )

    # suppress near-duplicates, strongest (by normalized fit) first
    candidates.sort(key=lambda c: (-c[0], -c[1], c[2], c[3], c[4]))
    kept: list[Circle] = []
    for fit, votes, r, py, px in candidates:
        clash = False
        for other in kept:
            limit = max(other.r, r) / 2.0
            if (other.cx - px) ** 2 + (other.cy - py) ** 2 < limit * limit:
                clash = True
                break
        if not clash:
            kept.append(Circle(px, py, r, votes))
    kept.sort(key=lambda c: (-c.score, c.r, c.cy, c.cx))
    return kept
