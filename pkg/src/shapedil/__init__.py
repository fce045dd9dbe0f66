"""Directional dilation-ratio shape descriptors and a quotient metric for
silhouette retrieval."""

from .config import MetricConfig
from .descriptor import (
    DescriptorGrid,
    DistanceField,
    compute_descriptor,
    compute_P,
    distance_transform,
    reflect_mask_x,
    rotate_mask_quarter,
)
from .mask import (
    BinaryMask,
    ShapeValidation,
    area,
    fill_holes,
    load_mask,
    normalize_area,
    save_mask_pgm,
    validate_shape,
)
from .metric import OrbitAlignment, descriptor_distance, hausdorff_orbit_distance
from .transform import AffineMap, TransformParams, apply_transform, make_transform

__all__ = [
    "AffineMap",
    "BinaryMask",
    "DescriptorGrid",
    "DistanceField",
    "MetricConfig",
    "OrbitAlignment",
    "ShapeValidation",
    "TransformParams",
    "apply_transform",
    "area",
    "compute_P",
    "compute_descriptor",
    "descriptor_distance",
    "distance_transform",
    "fill_holes",
    "hausdorff_orbit_distance",
    "load_mask",
    "make_transform",
    "normalize_area",
    "reflect_mask_x",
    "rotate_mask_quarter",
    "save_mask_pgm",
    "validate_shape",
]

__version__ = "0.1.0"
