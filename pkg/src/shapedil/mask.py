"""Binary silhouette masks: loading, validation, hole repair, area normalization.

A usable silhouette is a single 8-connected foreground component with no
interior holes and strictly positive area.  Holes are repaired automatically;
disconnected inputs are reported and rejected at the benchmark layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import ndimage

from .raster import border_margin, crop_to_foreground, warp_mask

# Connectivity structures: 8-connected foreground, 4-connected background.
_STRUCT_FG = np.ones((3, 3), dtype=bool)
_STRUCT_BG = ndimage.generate_binary_structure(2, 1)

# Area normalization rejects results smaller than this as degenerate.
_MIN_NORMALIZED_AREA = 16


class MaskError(ValueError):
    """Base class for silhouette loading/processing failures."""


class MaskFormatError(MaskError):
    """Unreadable or unsupported raster file."""


class EmptyForegroundError(MaskError):
    """Thresholding produced no foreground pixels."""


class DegenerateShapeError(MaskError):
    """Shape too small to carry a meaningful descriptor."""


@dataclass(frozen=True)
class BinaryMask:
    """Row-major boolean grid; True pixels are foreground."""

    pixels: np.ndarray

    def __post_init__(self) -> None:
        px = np.asarray(self.pixels, dtype=bool)
        if px.ndim != 2 or px.shape[0] == 0 or px.shape[1] == 0:
            raise MaskError("mask must be a non-empty 2D grid")
        px = px.copy()
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


@dataclass(frozen=True)
class ShapeValidation:
    """Connectivity / hole report for one mask."""

    connected: bool
    hole_free: bool
    component_count: int
    hole_count: int


def area(mask: BinaryMask) -> int:
    """Number of foreground pixels."""
    return int(np.count_nonzero(mask.pixels))


def _read_pgm(data: bytes) -> np.ndarray:
    """Parse P2 (ASCII) or P5 (binary) PGM into a uint8 gray array."""
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise MaskFormatError("not a P2/P5 PGM file")

    # Tokenize the header, skipping '#' comments.
    tokens: list[bytes] = []
    pos = 2
    while len(tokens) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos] not in (10, 13):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise MaskFormatError("truncated PGM header")
        tokens.append(data[start:pos])
    width, height, maxval = (int(t) for t in tokens)
    if width <= 0 or height <= 0:
        raise MaskFormatError("invalid PGM dimensions")
    if maxval <= 0 or maxval > 255:
        raise MaskFormatError("only 8-bit PGM is supported")

    if magic == b"P5":
        pos += 1  # single whitespace byte after maxval
        raster = data[pos : pos + width * height]
        if len(raster) < width * height:
            raise MaskFormatError("truncated PGM raster")
        gray = np.frombuffer(raster, dtype=np.uint8, count=width * height)
    else:
        values = data[pos:].split()
        if len(values) < width * height:
            raise MaskFormatError("truncated PGM raster")
        gray = np.array([int(v) for v in values[: width * height]], dtype=np.uint8)
    if maxval != 255:
        gray = (gray.astype(np.uint16) * 255 // maxval).astype(np.uint8)
    return gray.reshape(height, width)


def _read_gray(path: Path) -> np.ndarray:
    data = path.read_bytes()
    if data[:2] in (b"P2", b"P5"):
        return _read_pgm(data)
    try:
        from PIL import Image

        with Image.open(path) as img:
            return np.asarray(img.convert("L"), dtype=np.uint8)
    except MaskError:
        raise
    except Exception as exc:
        raise MaskFormatError(f"cannot read raster file {path}: {exc}") from exc


def load_mask(path: str | Path, threshold: int = 128, invert: bool = False) -> BinaryMask:
    """Load a PGM/PNG silhouette; pixels with gray >= threshold are foreground.

    `invert` flips polarity for corpora drawn dark-on-light.
    """
    path = Path(path)
    if not path.is_file():
        raise MaskFormatError(f"no such file: {path}")
    gray = _read_gray(path)
    if invert:
        gray = 255 - gray
    pixels = gray >= threshold
    if not pixels.any():
        raise EmptyForegroundError(f"no foreground pixels in {path} at threshold {threshold}")
    return BinaryMask(pixels)


def save_mask_pgm(mask: BinaryMask, path: str | Path) -> None:
    """Write the mask as binary PGM (P5) with 0/255 values."""
    path = Path(path)
    header = f"P5\n{mask.width} {mask.height}\n255\n".encode("ascii")
    raster = np.where(mask.pixels, 255, 0).astype(np.uint8).tobytes()
    path.write_bytes(header + raster)


def validate_shape(mask: BinaryMask) -> ShapeValidation:
    """Report connectivity (8-connected foreground) and interior holes
    (4-connected background components not touching the border)."""
    if area(mask) == 0:
        raise MaskError("cannot validate an empty mask")
    _, n_components = ndimage.label(mask.pixels, structure=_STRUCT_FG)
    bg_labels, n_bg = ndimage.label(~mask.pixels, structure=_STRUCT_BG)
    border = np.unique(
        np.concatenate(
            [bg_labels[0, :], bg_labels[-1, :], bg_labels[:, 0], bg_labels[:, -1]]
        )
    )
    border = set(int(b) for b in border if b != 0)
    hole_count = n_bg - len(border)
    return ShapeValidation(
        connected=n_components == 1,
        hole_free=hole_count == 0,
        component_count=int(n_components),
        hole_count=int(hole_count),
    )


def fill_holes(mask: BinaryMask) -> BinaryMask:
    """Convert every background component not touching the border to foreground."""
    if area(mask) == 0:
        raise MaskError("cannot fill holes of an empty mask")
    bg_labels, _ = ndimage.label(~mask.pixels, structure=_STRUCT_BG)
    border = np.unique(
        np.concatenate(
            [bg_labels[0, :], bg_labels[-1, :], bg_labels[:, 0], bg_labels[:, -1]]
        )
    )
    keep_bg = np.isin(bg_labels, [b for b in border if b != 0])
    return BinaryMask(mask.pixels | ~(mask.pixels | keep_bg))


def dilate_mask(mask: BinaryMask, radius: float) -> BinaryMask:
    """Euclidean dilation by `radius` pixels (canvas grows to fit)."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    pad = int(math.ceil(radius)) + 1
    grown = crop_to_foreground(mask.pixels, border_margin(mask.pixels) + pad)
    dist = ndimage.distance_transform_edt(~grown)
    return BinaryMask(dist <= radius)


def normalize_area(mask: BinaryMask, target_area: int, margin: int = 10) -> BinaryMask:
    """Uniformly rescale the mask so its pixel count lands within 2% of
    `target_area`; the canvas is cropped/grown to the shape plus `margin`.

    Bilinear sampling with a 0.5 threshold; one corrective rescale pass
    absorbs most of the rasterization error.
    """
    a = area(mask)
    if a == 0:
        raise MaskError("cannot normalize an empty mask")
    if target_area <= 0:
        raise ValueError("target area must be positive")

    scale = math.sqrt(target_area / a)
    out = warp_mask(mask.pixels, np.diag([scale, scale]), margin)
    got = int(np.count_nonzero(out))
    if got > 0 and abs(got - target_area) / target_area > 0.005:
        scale *= math.sqrt(target_area / got)
        out = warp_mask(mask.pixels, np.diag([scale, scale]), margin)
        got = int(np.count_nonzero(out))
    if got < _MIN_NORMALIZED_AREA:
        raise DegenerateShapeError(
            f"normalized area {got} below {_MIN_NORMALIZED_AREA} pixels"
        )
    return BinaryMask(out)
