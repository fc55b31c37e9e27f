"""Pixel-level primitives shared by every pipeline stage.

All operations are pure functions of their inputs and safe to call
concurrently on read-only arrays.
"""

from .draw import draw_circle, draw_rect
from .filters import (
    gaussian_kernel_1d,
    gaussian_smooth_1d,
    gaussian_smooth_image,
    log_zero_contours,
    median_filter,
    otsu_threshold,
    sobel_edges,
    to_grayscale,
)
from .hough import (
    circle_perimeter_offsets,
    circle_points,
    hough_circles,
    ideal_perimeter_votes,
)
from .io import load_image, save_image
from .morphology import (
    connected_components,
    elliptic_element,
    fill_contours,
    label_mask,
    morph,
)
from .projections import integral_projections
from .types import Circle, Rect, Region, require_gray, require_mask, require_rgb

__all__ = [
    "Circle",
    "Rect",
    "Region",
    "circle_perimeter_offsets",
    "circle_points",
    "connected_components",
    "draw_circle",
    "draw_rect",
    "elliptic_element",
    "fill_contours",
    "gaussian_kernel_1d",
    "gaussian_smooth_1d",
    "gaussian_smooth_image",
    "hough_circles",
    "ideal_perimeter_votes",
    "integral_projections",
    "label_mask",
    "load_image",
    "log_zero_contours",
    "median_filter",
    "morph",
    "otsu_threshold",
    "require_gray",
    "require_mask",
    "require_rgb",
    "save_image",
    "sobel_edges",
    "to_grayscale",
]
