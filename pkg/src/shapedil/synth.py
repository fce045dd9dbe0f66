"""Synthetic silhouettes for tests, property experiments, and toy benchmarks."""

from __future__ import annotations

import numpy as np

from .mask import BinaryMask


def disk(radius: int, pad: int = 12) -> BinaryMask:
    size = 2 * radius + 1 + 2 * pad
    c = size / 2 - 0.5
    yy, xx = np.mgrid[0:size, 0:size]
    return BinaryMask((xx - c) ** 2 + (yy - c) ** 2 <= radius**2)


def square(side: int, pad: int = 12) -> BinaryMask:
    px = np.zeros((side + 2 * pad, side + 2 * pad), dtype=bool)
    px[pad : pad + side, pad : pad + side] = True
    return BinaryMask(px)


def rectangle(width: int, height: int, pad: int = 12) -> BinaryMask:
    px = np.zeros((height + 2 * pad, width + 2 * pad), dtype=bool)
    px[pad : pad + height, pad : pad + width] = True
    return BinaryMask(px)


def cross(arm_length: int, arm_width: int, pad: int = 12) -> BinaryMask:
    size = 2 * arm_length + arm_width
    px = np.zeros((size + 2 * pad, size + 2 * pad), dtype=bool)
    lo = pad + arm_length
    hi = lo + arm_width
    px[lo:hi, pad : pad + size] = True
    px[pad : pad + size, lo:hi] = True
    return BinaryMask(px)


def ring(outer_radius: int, inner_radius: int, pad: int = 12) -> BinaryMask:
    if inner_radius >= outer_radius:
        raise ValueError("inner radius must be smaller than outer")
    size = 2 * outer_radius + 1 + 2 * pad
    c = size / 2 - 0.5
    yy, xx = np.mgrid[0:size, 0:size]
    r2 = (xx - c) ** 2 + (yy - c) ** 2
    return BinaryMask((r2 <= outer_radius**2) & (r2 > inner_radius**2))


def hand(
    palm_width: int = 50,
    palm_height: int = 22,
    finger_length: int = 60,
    finger_width: int = 6,
    gap: int = 14,
    pad: int = 14,
) -> BinaryMask:
    """Five-finger silhouette; fingers extend upward (along the y axis).

    The gaps are wide relative to the default neighborhood radius so that
    squashing the fingers genuinely lowers the feature instead of letting the
    neighborhood swallow the gaps whole.
    """
    n_fingers = 5
    span = n_fingers * finger_width + (n_fingers - 1) * gap
    width = max(palm_width, span)
    height = finger_length + palm_height
    px = np.zeros((height + 2 * pad, width + 2 * pad), dtype=bool)
    # Palm at the bottom.
    x0 = pad + (width - palm_width) // 2
    px[pad + finger_length : pad + height, x0 : x0 + palm_width] = True
    # Fingers growing up from the palm, overlapping it by one row.
    fx = pad + (width - span) // 2
    for k in range(n_fingers):
        left = fx + k * (finger_width + gap)
        px[pad : pad + finger_length + 1, left : left + finger_width] = True
    return BinaryMask(px)


def toy_corpus() -> list[tuple[str, str, BinaryMask]]:
    """12 labeled synthetic shapes spanning 5 classes, for metric experiments.

    The ring entries violate the no-hole condition on purpose; the descriptor
    pipeline repairs them, so they behave as disks of their outer radius.
    """
    return [
        ("disk-01", "disk", disk(30)),
        ("disk-02", "disk", disk(38)),
        ("disk-03", "disk", disk(46)),
        ("square-01", "square", square(52)),
        ("square-02", "square", square(66)),
        ("square-03", "square", square(80)),
        ("rect-01", "rect", rectangle(96, 24)),
        ("rect-02", "rect", rectangle(120, 30)),
        ("cross-01", "cross", cross(28, 14)),
        ("cross-02", "cross", cross(36, 18)),
        ("ring-01", "ring", ring(32, 20)),
        ("ring-02", "ring", ring(40, 25)),
    ]


def toy_retrieval_corpus() -> list[tuple[str, str, BinaryMask]]:
    """2-class disk/square corpus (3+3, varied sizes) for retrieval sanity checks."""
    return [
        ("disk-01", "disk", disk(28)),
        ("disk-02", "disk", disk(36)),
        ("disk-03", "disk", disk(45)),
        ("square-01", "square", square(50)),
        ("square-02", "square", square(64)),
        ("square-03", "square", square(80)),
    ]
