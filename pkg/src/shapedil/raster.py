"""Low-level raster helpers: cropping, padding, and bilinear inverse-map warps.

Shared by the mask and transform layers so that area normalization and the
anisotropic warps go through one resampling code path.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import ndimage

# Guard against runaway canvases from misconfigured transforms.
MAX_CANVAS = 8192


class CanvasLimitError(ValueError):
    """Requested output canvas exceeds the configured maximum."""


def foreground_bbox(pixels: np.ndarray) -> tuple[int, int, int, int]:
    """Tight bounding box (y0, y1, x0, x1), inclusive, of the true pixels."""
    ys, xs = np.nonzero(pixels)
    if ys.size == 0:
        raise ValueError("empty foreground has no bounding box")
    return int(ys.min()), int(ys.max()), int(xs.min()), int(xs.max())


def centroid(pixels: np.ndarray) -> tuple[float, float]:
    """Foreground centroid (cx, cy) in pixel-center coordinates."""
    ys, xs = np.nonzero(pixels)
    if ys.size == 0:
        raise ValueError("empty foreground has no centroid")
    return float(xs.mean()), float(ys.mean())


def crop_to_foreground(pixels: np.ndarray, margin: int) -> np.ndarray:
    """Crop to the foreground bounding box and re-pad with `margin` background."""
    y0, y1, x0, x1 = foreground_bbox(pixels)
    core = pixels[y0 : y1 + 1, x0 : x1 + 1]
    out = np.zeros((core.shape[0] + 2 * margin, core.shape[1] + 2 * margin), dtype=bool)
    out[margin : margin + core.shape[0], margin : margin + core.shape[1]] = core
    return out


def border_margin(pixels: np.ndarray) -> int:
    """Thickness of the all-background frame around the foreground."""
    h, w = pixels.shape
    y0, y1, x0, x1 = foreground_bbox(pixels)
    return min(y0, x0, h - 1 - y1, w - 1 - x1)


def warp_mask(
    pixels: np.ndarray,
    matrix: np.ndarray,
    margin: int,
    max_canvas: int = MAX_CANVAS,
) -> np.ndarray:
    """Apply an invertible 2x2 linear map about the foreground centroid.

    Output pixels are pulled back through the inverse map and sampled with
    bilinear interpolation; values >= 0.5 become foreground.  The output
    canvas is the transformed bounding box plus `margin` background on every
    side.  The identity map reproduces the input foreground exactly (the
    sampling offsets stay integral).
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    det = matrix[0, 0] * matrix[1, 1] - matrix[0, 1] * matrix[1, 0]
    if abs(det) < 1e-12:
        raise ValueError("matrix is not invertible")

    cx, cy = centroid(pixels)
    y0, y1, x0, x1 = foreground_bbox(pixels)
    corners = np.array(
        [[x0 - cx, y0 - cy], [x0 - cx, y1 - cy], [x1 - cx, y0 - cy], [x1 - cx, y1 - cy]]
    )
    tc = corners @ matrix.T
    txmin, tymin = tc.min(axis=0)
    txmax, tymax = tc.max(axis=0)

    # Pixel support extends half a pixel beyond the centers; after the map that
    # reaches up to 0.5 * ||matrix|| further, so widen the frame to keep the
    # requested background margin intact.
    margin = margin + int(math.ceil(0.5 * np.linalg.norm(matrix, 2))) + 1
    out_w = int(math.ceil(txmax - txmin)) + 2 * margin + 2
    out_h = int(math.ceil(tymax - tymin)) + 2 * margin + 2
    if out_w > max_canvas or out_h > max_canvas:
        raise CanvasLimitError(
            f"warped canvas {out_w}x{out_h} exceeds limit {max_canvas}"
        )

    # Transformed centroid lands at (ox, oy).  Phase-locking the offsets to the
    # centroid's fractional part keeps identity sampling on the input pixel
    # grid and makes mirrored/rotated inputs sample on mirrored/rotated grids,
    # which is what makes the equivariance checks tight.
    fx = cx - math.floor(cx)
    fy = cy - math.floor(cy)
    ox = math.ceil(margin - txmin - fx) + fx
    oy = math.ceil(margin - tymin - fy) + fy

    jj, ii = np.meshgrid(np.arange(out_w), np.arange(out_h))
    inv = np.linalg.inv(matrix)
    field = pixels.astype(np.float64)

    # 2x2 subpixel supersampling: averages bilinear taps at the pixel's
    # quarter points before thresholding, which roughly halves the boundary
    # placement jitter of a single center tap.  Offsets are symmetric, so the
    # identity map still reproduces the input exactly.
    vals = np.zeros((out_h, out_w))
    for dy in (-0.25, 0.25):
        for dx in (-0.25, 0.25):
            vx = jj + dx - ox
            vy = ii + dy - oy
            sx = cx + inv[0, 0] * vx + inv[0, 1] * vy
            sy = cy + inv[1, 0] * vx + inv[1, 1] * vy
            vals += ndimage.map_coordinates(
                field, [sy, sx], order=1, mode="constant", cval=0.0
            )
    return vals >= 2.0
