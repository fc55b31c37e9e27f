from collections import deque

import numpy as np
import pytest

from moodpipe.imgcore import (
    connected_components,
    elliptic_element,
    fill_contours,
    label_mask,
    morph,
)


def _random_masks(n, shape=(12, 16), seed=0):
    rng = np.random.default_rng(seed)
    return [rng.random(shape) < rng.uniform(0.2, 0.6) for _ in range(n)]


class TestMorph:
    def test_closing_is_extensive(self):
        for mask in _random_masks(25, seed=1):
            closed = morph(mask, "close", a=3, b=2)
            assert np.all(closed[mask])

    def test_opening_is_anti_extensive(self):
        for mask in _random_masks(25, seed=2):
            opened = morph(mask, "open", a=3, b=2)
            assert np.all(mask[opened])

    def test_close_fills_one_pixel_gap(self):
        # hand-derived on a 3x7 grid with the 3-px horizontal element
        mask = np.zeros((3, 7), dtype=bool)
        mask[1, :] = True
        mask[1, 3] = False
        closed = morph(mask, "close", a=2, b=1)
        assert closed[1, 3]
        assert np.all(closed[mask])

    def test_dilate_erode_duality_in_interior(self):
        for mask in _random_masks(15, shape=(14, 14), seed=3):
            er = morph(mask, "erode", a=2, b=2)
            dual = ~morph(~mask, "dilate", a=2, b=2)
            interior = (slice(3, -3), slice(3, -3))
            assert np.array_equal(er[interior], dual[interior])

    def test_elliptic_element_shapes(self):
        assert set(elliptic_element(2, 1)) == {(-1, 0), (0, 0), (1, 0)}
        assert set(elliptic_element(2, 2)) == {(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)}
        assert (2, 0) in elliptic_element(4, 1)

    def test_unknown_op_rejected(self):
        with pytest.raises(ValueError):
            morph(np.zeros((3, 3), dtype=bool), "sharpen")


def _flood_fill_oracle(mask: np.ndarray) -> np.ndarray:
    """(Test oracle) plain BFS flood fill from the border through background."""
    h, w = mask.shape
    free = ~mask
    seen = np.zeros_like(free)
    queue = deque()
    for y in range(h):
        for x in range(w):
            if (y in (0, h - 1) or x in (0, w - 1)) and free[y, x]:
                seen[y, x] = True
                queue.append((y, x))
    while queue:
        y, x = queue.popleft()
        for ny, nx in ((y - 1, x), (y + 1, x), (y, x - 1), (y, x + 1)):
            if 0 <= ny < h and 0 <= nx < w and free[ny, nx] and not seen[ny, nx]:
                seen[ny, nx] = True
                queue.append((ny, nx))
    return ~seen


class TestFillContours:
    def test_empty_mask(self):
        mask = np.zeros((6, 6), dtype=bool)
        assert not fill_contours(mask).any()

    def test_ring_becomes_disk(self):
        mask = np.zeros((9, 9), dtype=bool)
        mask[2, 2:7] = mask[6, 2:7] = True
        mask[2:7, 2] = mask[2:7, 6] = True
        filled = fill_contours(mask)
        assert np.array_equal(filled, _flood_fill_oracle(mask))
        assert filled[4, 4]

    def test_single_pixel_unchanged(self):
        mask = np.zeros((5, 5), dtype=bool)
        mask[2, 2] = True
        assert np.array_equal(fill_contours(mask), mask)

    def test_idempotent(self):
        for mask in _random_masks(15, seed=4):
            once = fill_contours(mask)
            assert np.array_equal(fill_contours(once), once)

    def test_matches_bfs_oracle_on_random_masks(self):
        for mask in _random_masks(15, seed=5):
            assert np.array_equal(fill_contours(mask), _flood_fill_oracle(mask))


def _is_connected(points: set, connectivity: int) -> bool:
    """(Test oracle) BFS connectivity check over a pixel set."""
    if not points:
        return False
    steps = [(-1, 0), (1, 0), (0, -1), (0, 1)]
    if connectivity == 8:
        steps += [(-1, -1), (-1, 1), (1, -1), (1, 1)]
    start = next(iter(points))
    seen = {start}
    queue = deque([start])
    while queue:
        y, x = queue.popleft()
        for dy, dx in steps:
            p = (y + dy, x + dx)
            if p in points and p not in seen:
                seen.add(p)
                queue.append(p)
    return seen == points


class TestConnectedComponents:
    def test_empty_mask(self):
        assert connected_components(np.zeros((4, 4), dtype=bool)) == []

    def test_two_blocks_4_connectivity(self):
        mask = np.zeros((4, 5), dtype=bool)
        mask[0:2, 0:2] = True
        mask[2:4, 3:5] = True
        regions = connected_components(mask, 4)
        assert len(regions) == 2
        assert all(r.area == 4 for r in regions)

    def test_diagonal_pair_connectivity(self):
        mask = np.zeros((3, 3), dtype=bool)
        mask[0, 0] = mask[1, 1] = True
        assert len(connected_components(mask, 4)) == 2
        assert len(connected_components(mask, 8)) == 1

    def test_areas_sum_to_popcount_and_sorted(self):
        for mask in _random_masks(20, seed=6):
            regions = connected_components(mask, 8)
            assert sum(r.area for r in regions) == int(mask.sum())
            areas = [r.area for r in regions]
            assert areas == sorted(areas, reverse=True)

    def test_each_region_is_connected(self):
        for connectivity in (4, 8):
            for mask in _random_masks(8, shape=(10, 12), seed=7):
                labels, regions = label_mask(mask, connectivity)
                for region in regions:
                    ys, xs = np.nonzero(labels == region.label)
                    assert _is_connected(set(zip(ys.tolist(), xs.tolist())), connectivity)

    def test_centroid_inside_bbox(self):
        for mask in _random_masks(10, seed=8):
            for region in connected_components(mask, 8):
                cx, cy = region.centroid
                assert region.bbox.x1 <= cx <= region.bbox.x2
                assert region.bbox.y1 <= cy <= region.bbox.y2
