"""The volume-preserving directional expansion family and its raster action.

Each map expands by beta along direction theta and contracts by 1/beta
orthogonally, so the determinant is exactly 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .mask import BinaryMask
from .raster import warp_mask

_HALF_PI = math.pi / 2


@dataclass(frozen=True)
class TransformParams:
    theta: float
    beta: float

    def __post_init__(self) -> None:
        if not (-_HALF_PI - 1e-12 <= self.theta <= _HALF_PI + 1e-12):
            raise ValueError(f"theta {self.theta} outside [-pi/2, pi/2]")
        if self.beta < 1.0:
            raise ValueError(f"beta {self.beta} must be >= 1")


@dataclass(frozen=True)
class AffineMap:
    """Symmetric 2x2 map with unit determinant."""

    m11: float
    m12: float
    m21: float
    m22: float

    def __post_init__(self) -> None:
        if abs(self.m12 - self.m21) > 1e-12:
            raise ValueError("map must be symmetric")
        if abs(self.det - 1.0) > 1e-9:
            raise ValueError(f"determinant {self.det} is not 1")

    @property
    def det(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m21

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])


def make_transform(theta: float, beta: float) -> AffineMap:
    """Build the expansion-by-beta map along direction theta."""
    TransformParams(theta, beta)  # validates ranges
    if beta == 1.0:
        return AffineMap(1.0, 0.0, 0.0, 1.0)
    c, s = math.cos(theta), math.sin(theta)
    ib = 1.0 / beta
    return AffineMap(
        m11=beta * c * c + ib * s * s,
        m12=(beta - ib) * s * c,
        m21=(beta - ib) * s * c,
        m22=beta * s * s + ib * c * c,
    )


def inverse_transform(theta: float, beta: float) -> AffineMap:
    """The inverse map: expansion by beta along the orthogonal direction."""
    ortho = theta + _HALF_PI if theta <= 0 else theta - _HALF_PI
    return make_transform(ortho, beta)


def apply_transform(mask: BinaryMask, amap: AffineMap, margin: int) -> BinaryMask:
    """Warp the mask through `amap` about its centroid.

    Inverse-mapped bilinear sampling thresholded at 0.5; the output canvas is
    the transformed bounding box plus `margin` background on every side.
    """
    return BinaryMask(warp_mask(mask.pixels, amap.matrix, margin))
