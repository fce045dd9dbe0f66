"""The dilation-ratio feature and its sampled surface over the (theta, beta) grid.

For a silhouette `a`, the scalar feature at radius eps is
vol(eps-neighborhood of a, minus a) / vol(a).  The descriptor evaluates that
feature after each directional expansion in the configured grid, always
dividing by the area of the normalized (undeformed) shape: the expansions
preserve volume, so the fixed divisor only removes rasterization jitter.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .config import MetricConfig
from .mask import BinaryMask, area, fill_holes, normalize_area
from .raster import border_margin
from .transform import apply_transform, make_transform


class MarginError(ValueError):
    """Canvas has too little background margin for the requested radius."""


class RecordFormatError(ValueError):
    """Malformed serialized descriptor record."""


@dataclass(frozen=True)
class DistanceField:
    """Per-pixel exact Euclidean distance to the nearest foreground pixel."""

    dist: np.ndarray

    @property
    def height(self) -> int:
        return self.dist.shape[0]

    @property
    def width(self) -> int:
        return self.dist.shape[1]


@dataclass(frozen=True)
class DescriptorGrid:
    """Sampled feature surface: values[i, j] for (thetas[i], betas[j])."""

    thetas: tuple[float, ...]
    betas: tuple[float, ...]
    values: np.ndarray
    epsilon: float
    area: int

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (len(self.thetas), len(self.betas)):
            raise ValueError("value matrix does not match the sample grids")
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            raise ValueError("descriptor values must be finite and >= 0")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "thetas", tuple(float(t) for t in self.thetas))
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))

    def same_grid(self, other: "DescriptorGrid", tol: float = 1e-9) -> bool:
        return (
            len(self.thetas) == len(other.thetas)
            and len(self.betas) == len(other.betas)
            and all(abs(a - b) <= tol for a, b in zip(self.thetas, other.thetas))
            and all(abs(a - b) <= tol for a, b in zip(self.betas, other.betas))
            and abs(self.epsilon - other.epsilon) <= tol
            and self.area == other.area
        )


def distance_transform(mask: BinaryMask) -> DistanceField:
    """Exact Euclidean distance to the nearest foreground pixel (0 on foreground)."""
    if area(mask) == 0:
        raise ValueError("distance transform of an empty mask")
    return DistanceField(ndimage.distance_transform_edt(~mask.pixels))


def compute_P(mask: BinaryMask, epsilon: float, denominator: float | None = None) -> float:
    """Ratio of the eps-neighborhood's extra pixels to the shape's pixels.

    The canvas needs ceil(eps)+1 background margin on all sides so the
    neighborhood is never clipped.
    """
    a = area(mask)
    if a == 0:
        raise ValueError("feature undefined for empty masks")
    need = int(math.ceil(epsilon)) + 1
    have = border_margin(mask.pixels)
    if have < need:
        raise MarginError(f"background margin {have} < required {need}")
    dist = distance_transform(mask).dist
    ring = int(np.count_nonzero((dist > 0) & (dist <= epsilon)))
    return ring / (denominator if denominator is not None else a)


def descriptor_margin(epsilon: float) -> int:
    """Warp margin guaranteeing compute_P never sees a clipped neighborhood."""
    return int(math.ceil(epsilon)) + 2


def compute_descriptor(mask: BinaryMask, config: MetricConfig) -> DescriptorGrid:
    """Normalize once (hole repair, fixed area), then sample the feature after
    each directional expansion in the grid."""
    margin = descriptor_margin(config.epsilon)
    base = normalize_area(fill_holes(mask), config.area, margin=margin)
    denom = float(area(base))
    values = np.empty((len(config.thetas), len(config.betas)))
    for i, theta in enumerate(config.thetas):
        for j, beta in enumerate(config.betas):
            warped = apply_transform(base, make_transform(theta, beta), margin)
            values[i, j] = compute_P(warped, config.epsilon, denominator=denom)
    return DescriptorGrid(config.thetas, config.betas, values, config.epsilon, config.area)


def rotate_mask_quarter(mask: BinaryMask, quarters: int) -> BinaryMask:
    """Lossless rotation by quarters * 90 degrees (counterclockwise)."""
    return BinaryMask(np.rot90(mask.pixels, k=quarters % 4))


def reflect_mask_x(mask: BinaryMask) -> BinaryMask:
    """Lossless reflection across the horizontal axis (vertical flip)."""
    return BinaryMask(np.flipud(mask.pixels))


def format_record(grid: DescriptorGrid) -> str:
    """Self-describing text record, 9 significant digits, stable for diffing."""
    out = io.StringIO()
    out.write("shapedil-descriptor v1\n")
    out.write(f"area {grid.area}\n")
    out.write(f"epsilon {grid.epsilon:.9g}\n")
    # Grids at full precision so a parsed record compares equal; values at 9
    # significant digits.
    out.write("thetas " + " ".join(f"{t:.17g}" for t in grid.thetas) + "\n")
    out.write("betas " + " ".join(f"{b:.17g}" for b in grid.betas) + "\n")
    out.write("values\n")
    for row in grid.values:
        out.write(" ".join(f"{v:.9g}" for v in row) + "\n")
    out.write("end\n")
    return out.getvalue()


def parse_record(text: str) -> DescriptorGrid:
    lines = [ln.strip() for ln in text.strip().splitlines()]
    if not lines or lines[0] != "shapedil-descriptor v1":
        raise RecordFormatError("missing descriptor record header")
    fields: dict[str, str] = {}
    idx = 1
    while idx < len(lines) and lines[idx] != "values":
        key, _, rest = lines[idx].partition(" ")
        fields[key] = rest
        idx += 1
    try:
        target_area = int(fields["area"])
        epsilon = float(fields["epsilon"])
        thetas = tuple(float(t) for t in fields["thetas"].split())
        betas = tuple(float(b) for b in fields["betas"].split())
    except (KeyError, ValueError) as exc:
        raise RecordFormatError(f"bad descriptor record fields: {exc}") from exc
    if idx >= len(lines) or lines[idx] != "values":
        raise RecordFormatError("missing values block")
    rows = lines[idx + 1 : idx + 1 + len(thetas)]
    if len(rows) != len(thetas) or lines[idx + 1 + len(thetas)] != "end":
        raise RecordFormatError("truncated values block")
    values = np.array([[float(v) for v in row.split()] for row in rows])
    return DescriptorGrid(thetas, betas, values, epsilon, target_area)


def dense_surface(
    mask: BinaryMask, config: MetricConfig, n_theta: int, n_beta: int
) -> list[tuple[float, float, float]]:
    """Fine (theta, beta, value) samples for plotting; not part of the metric path."""
    thetas = tuple(
        -math.pi / 2 + math.pi * k / n_theta for k in range(n_theta)
    )
    beta_max = max(config.betas)
    betas = tuple(1.0 + (beta_max - 1.0) * k / max(n_beta - 1, 1) for k in range(n_beta))
    fine = MetricConfig(
        epsilon=config.epsilon,
        area=config.area,
        thetas=thetas,
        betas=betas,
        kappa=config.kappa,
    )
    grid = compute_descriptor(mask, fine)
    return [
        (t, b, float(grid.values[i, j]))
        for i, t in enumerate(grid.thetas)
        for j, b in enumerate(grid.betas)
    ]
