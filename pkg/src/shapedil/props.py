"""Runnable invariant suites over a shape corpus (backing the `proptest` command).

These are the executable forms of the structural guarantees: metric axioms,
rotation/reflection equivariance, translation/scale invariance, neighborhood
monotonicity, and a discrete continuity probe via small dilations.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace

import numpy as np

from .bench import Dataset
from .config import MetricConfig
from .descriptor import (
    DescriptorGrid,
    compute_descriptor,
    reflect_mask_x,
    rotate_mask_quarter,
)
from .mask import BinaryMask, dilate_mask, fill_holes, load_mask, validate_shape
from .metric import OrbitAlignment, align_values, descriptor_distance

REL_TOL_EQUIVARIANCE = 0.01
SYMMETRY_TOL = 1e-12
TRIANGLE_SLACK = 1e-9
CONTINUITY_JITTER = 0.05
CONTINUITY_FACTOR = 0.25


@dataclass(frozen=True)
class Violation:
    suite: str
    subject: str
    detail: str

    def __str__(self) -> str:
        return f"[{self.suite}] {self.subject}: {self.detail}"


def _rel_close(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    scale = np.maximum(np.maximum(np.abs(a), np.abs(b)), 1e-9)
    return bool((np.abs(a - b) / scale <= tol).all())


def check_validation(dataset: Dataset, invert: bool = False) -> tuple[list[Violation], dict[str, BinaryMask]]:
    """C1/C2 checks; holes are repaired, disconnection is a violation."""
    violations: list[Violation] = []
    masks: dict[str, BinaryMask] = {}
    for entry in dataset.entries:
        try:
            mask = fill_holes(load_mask(entry.mask_path, invert=invert))
        except Exception as exc:
            violations.append(Violation("validation", entry.id, str(exc)))
            continue
        report = validate_shape(mask)
        if not report.connected:
            violations.append(
                Violation(
                    "validation",
                    entry.id,
                    f"disconnected foreground ({report.component_count} components)",
                )
            )
            continue
        if not report.hole_free:
            violations.append(
                Violation("validation", entry.id, "holes survived repair")
            )
            continue
        masks[entry.id] = mask
    return violations, masks


def check_equivariance(
    masks: dict[str, BinaryMask], config: MetricConfig
) -> tuple[list[Violation], dict[str, DescriptorGrid]]:
    """Quarter-rotation shifts the theta axis by N/2 slots; vertical reflection
    reverses it.  Also: beta=1 row constant, translation invariance exact,
    per-cell monotonicity in epsilon."""
    violations: list[Violation] = []
    descriptors: dict[str, DescriptorGrid] = {}
    n_theta = len(config.thetas)
    for sid, mask in masks.items():
        grid = compute_descriptor(mask, config)
        descriptors[sid] = grid

        if n_theta % 2 == 0:
            rotated = compute_descriptor(rotate_mask_quarter(mask, 1), config)
            expected = np.roll(grid.values, n_theta // 2, axis=0)
            if not _rel_close(rotated.values, expected, REL_TOL_EQUIVARIANCE):
                violations.append(
                    Violation("equivariance", sid, "90-degree rotation does not shift the grid")
                )

        reflected = compute_descriptor(reflect_mask_x(mask), config)
        expected = align_values(grid, OrbitAlignment(0, True))
        if not _rel_close(reflected.values, expected, REL_TOL_EQUIVARIANCE):
            violations.append(
                Violation("equivariance", sid, "reflection does not reverse the theta axis")
            )

        for j, beta in enumerate(config.betas):
            if beta == 1.0:
                col = grid.values[:, j]
                if not (col == col[0]).all():
                    violations.append(
                        Violation("equivariance", sid, "beta=1 column not constant")
                    )

        padded = BinaryMask(np.pad(mask.pixels, ((7, 3), (2, 11))))
        shifted = compute_descriptor(padded, config)
        if not (shifted.values == grid.values).all():
            violations.append(
                Violation("equivariance", sid, "translation changed descriptor values")
            )

        doubled = compute_descriptor(mask, replace(config, epsilon=2 * config.epsilon))
        if not (doubled.values >= grid.values).all():
            violations.append(
                Violation("equivariance", sid, "values not monotone in epsilon")
            )
    return violations, descriptors


def check_metric_axioms(
    descriptors: dict[str, DescriptorGrid],
    config: MetricConfig,
    seed: int = 0,
    max_triples: int = 100,
) -> list[Violation]:
    violations: list[Violation] = []
    ids = sorted(descriptors)
    dist: dict[tuple[str, str], float] = {}
    for a in ids:
        for b in ids:
            dist[(a, b)] = descriptor_distance(descriptors[a], descriptors[b], config)[0]

    for a in ids:
        if dist[(a, a)] != 0.0:
            violations.append(Violation("metric", a, f"self-distance {dist[(a, a)]} != 0"))
        grid = descriptors[a]
        for shift in range(len(config.thetas)):
            for refl in (False, True):
                moved = DescriptorGrid(
                    grid.thetas,
                    grid.betas,
                    align_values(grid, OrbitAlignment(shift, refl)),
                    grid.epsilon,
                    grid.area,
                )
                v, _ = descriptor_distance(grid, moved, config)
                if v > SYMMETRY_TOL:
                    violations.append(
                        Violation("metric", a, f"orbit copy at distance {v} (shift {shift})")
                    )

    for a in ids:
        for b in ids:
            if abs(dist[(a, b)] - dist[(b, a)]) > SYMMETRY_TOL:
                violations.append(
                    Violation("metric", f"{a}/{b}", "symmetry violated")
                )

    triples = [(a, b, c) for a in ids for b in ids for c in ids]
    if len(triples) > max_triples:
        rng = random.Random(seed)
        triples = rng.sample(triples, max_triples)
    worst = 0.0
    for a, b, c in triples:
        slack = dist[(a, c)] - dist[(a, b)] - dist[(b, c)]
        worst = max(worst, slack)
        if slack > TRIANGLE_SLACK:
            violations.append(
                Violation("metric", f"{a},{b},{c}", f"triangle slack {slack:.3g}")
            )
    return violations


def check_continuity(
    masks: dict[str, BinaryMask],
    descriptors: dict[str, DescriptorGrid],
    dataset: Dataset,
    config: MetricConfig,
) -> list[Violation]:
    """Small dilations should move the descriptor a small, roughly monotone
    amount; the 1-pixel step must stay well inside the inter-class scale."""
    violations: list[Violation] = []
    labels = {e.id: e.class_label for e in dataset.entries}

    inter: list[float] = []
    ids = sorted(descriptors)
    for i, a in enumerate(ids):
        for b in ids[i + 1 :]:
            if labels.get(a) != labels.get(b):
                inter.append(
                    descriptor_distance(descriptors[a], descriptors[b], config)[0]
                )
    median_inter = float(np.median(inter)) if inter else None

    for sid, mask in masks.items():
        base = descriptors[sid]
        dists = []
        for k in range(1, 6):
            grown = compute_descriptor(dilate_mask(mask, k), config)
            dists.append(descriptor_distance(base, grown, config)[0])
        # Area normalization cancels most of a dilation (for a disk it is a
        # near-homothety), so the sequence sits at raster-noise level; the
        # jitter allowance is taken at corpus scale plus a resolution-dependent
        # noise floor (boundary jitter shrinks like 1/sqrt(area)).
        scale = median_inter if median_inter is not None else max(dists)
        slack = CONTINUITY_JITTER * max(scale, 1e-12) + 2.0 / math.sqrt(config.area)
        for k in range(1, len(dists)):
            if dists[k] < dists[k - 1] - slack:
                violations.append(
                    Violation(
                        "continuity",
                        sid,
                        f"distance dropped from {dists[k - 1]:.4g} to {dists[k]:.4g} at dilation {k + 1}",
                    )
                )
        if median_inter is not None and dists[0] >= CONTINUITY_FACTOR * median_inter:
            violations.append(
                Violation(
                    "continuity",
                    sid,
                    f"1px dilation distance {dists[0]:.4g} >= {CONTINUITY_FACTOR} * median inter-class {median_inter:.4g}",
                )
            )
    return violations


def run_property_suites(
    dataset: Dataset,
    config: MetricConfig,
    seed: int = 0,
    invert: bool = False,
) -> tuple[list[Violation], list[str]]:
    """Run every suite; returns (violations, human-readable summary lines)."""
    lines: list[str] = []
    violations, masks = check_validation(dataset, invert=invert)
    lines.append(f"validation: {len(masks)}/{len(dataset.entries)} shapes usable")

    eq_violations, descriptors = check_equivariance(masks, config)
    violations += eq_violations
    lines.append(f"equivariance: {len(masks) - len({v.subject for v in eq_violations})}"
                 f"/{len(masks)} shapes pass")

    m_violations = check_metric_axioms(descriptors, config, seed=seed)
    violations += m_violations
    lines.append(f"metric axioms: {'pass' if not m_violations else f'{len(m_violations)} violations'}")

    c_violations = check_continuity(masks, descriptors, dataset, config)
    violations += c_violations
    lines.append(f"continuity probe: {'pass' if not c_violations else f'{len(c_violations)} violations'}")
    return violations, lines
