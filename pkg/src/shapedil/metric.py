"""Quotient metric between descriptor grids, plus a Hausdorff diagnostic.

Rotations of the silhouette shift the descriptor's theta axis circularly and
reflections reverse it, so the residual group acts on a uniform theta grid by
2*N permutations.  The metric is the minimum over those alignments of the
exp(-kappa*beta)-weighted L2 distance between the grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .config import MetricConfig
from .descriptor import DescriptorGrid
from .mask import BinaryMask, fill_holes, normalize_area
from .raster import centroid, warp_mask


class GridMismatchError(ValueError):
    """Descriptors were computed with different grids or parameters."""


@dataclass(frozen=True)
class OrbitAlignment:
    """The theta-shift / reflection achieving the metric minimum."""

    shift: int
    reflected: bool


def _theta_lookup(thetas: tuple[float, ...]) -> dict[int, int]:
    """Map quantized theta (mod pi) to grid index."""
    lookup = {}
    for i, t in enumerate(thetas):
        lookup[round((t % math.pi) / 1e-7)] = i
    return lookup


def _alignment_permutation(
    thetas: tuple[float, ...], shift: int, reflected: bool
) -> np.ndarray:
    """Row permutation realizing theta -> (+-theta + shift*step) on the grid."""
    n = len(thetas)
    step = math.pi / n
    lookup = _theta_lookup(thetas)
    perm = np.empty(n, dtype=int)
    for i, t in enumerate(thetas):
        src = (-t if reflected else t) + shift * step
        key = round((src % math.pi) / 1e-7)
        if key not in lookup:
            # Absorb quantization at the period boundary.
            key = min(lookup, key=lambda k: min(abs(k - key), abs(abs(k - key) - round(math.pi / 1e-7))))
        perm[i] = lookup[key]
    return perm


def align_values(grid: DescriptorGrid, alignment: OrbitAlignment) -> np.ndarray:
    """Descriptor values with the alignment applied to the theta axis."""
    perm = _alignment_permutation(grid.thetas, alignment.shift, alignment.reflected)
    return grid.values[perm, :]


def descriptor_distance(
    d1: DescriptorGrid, d2: DescriptorGrid, config: MetricConfig
) -> tuple[float, OrbitAlignment]:
    """Minimum weighted-L2 distance over all 2*N theta alignments of d2.

    Ties break deterministically: smallest shift first, unreflected before
    reflected.
    """
    if not d1.same_grid(d2):
        raise GridMismatchError("descriptors computed with different grids")
    weights = np.exp(-config.kappa * np.asarray(d2.betas))
    best_val = math.inf
    best = OrbitAlignment(0, False)
    for shift in range(len(d1.thetas)):
        for reflected in (False, True):
            candidate = OrbitAlignment(shift, reflected)
            aligned = align_values(d2, candidate)
            val = math.sqrt(float((weights * (d1.values - aligned) ** 2).sum()))
            if val < best_val:
                best_val = val
                best = candidate
    return best_val, best


def _place_centered(pixels: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    """Paste with the foreground centroid at the canvas center (rounded)."""
    cx, cy = centroid(pixels)
    h, w = pixels.shape
    oy = int(round(shape[0] / 2 - cy))
    ox = int(round(shape[1] / 2 - cx))
    out = np.zeros(shape, dtype=bool)
    out[oy : oy + h, ox : ox + w] = pixels
    return out


def _pixel_hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    """Two-sided Hausdorff distance between foreground pixel sets via EDTs."""
    da = ndimage.distance_transform_edt(~a)
    db = ndimage.distance_transform_edt(~b)
    return float(max(db[a].max(), da[b].max()))


def rotation_orbit(mask: BinaryMask, rotation_samples: int, margin: int = 4):
    """The sampled rotation orbit of a mask (unreflected), as raw pixel grids."""
    for k in range(rotation_samples):
        phi = 2 * math.pi * k / rotation_samples
        if k == 0:
            yield mask.pixels
        else:
            rot = np.array(
                [[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]]
            )
            yield warp_mask(mask.pixels, rot, margin)


def hausdorff_orbit_distance(
    a: BinaryMask,
    b: BinaryMask,
    rotation_samples: int = 64,
    target_area: int = 4096,
) -> float:
    """Upper-bound approximation of the pre-quotient Hausdorff metric.

    Both masks are normalized to `target_area` and centroid-aligned; the
    minimum is over `rotation_samples` rotations of b, with and without
    reflection.  Translation is restricted to centroid alignment and rotation
    is sampled, so the value upper-bounds the true infimum.  Diagnostic only.
    """
    if rotation_samples < 4:
        raise ValueError("need at least 4 rotation samples")
    na = normalize_area(fill_holes(a), target_area, margin=4).pixels
    nb = normalize_area(fill_holes(b), target_area, margin=4)

    best = math.inf
    for reflected in (False, True):
        base = BinaryMask(np.flipud(nb.pixels)) if reflected else nb
        for rotated in rotation_orbit(base, rotation_samples):
            side = max(na.shape + rotated.shape) + 8
            pa = _place_centered(na, (side, side))
            pb = _place_centered(rotated, (side, side))
            best = min(best, _pixel_hausdorff(pa, pb))
    return best
