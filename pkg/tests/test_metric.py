from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from shapedil.config import ConfigError, MetricConfig
from shapedil.descriptor import DescriptorGrid, compute_descriptor, rotate_mask_quarter
from shapedil.mask import BinaryMask, normalize_area, fill_holes
from shapedil.metric import (
    GridMismatchError,
    OrbitAlignment,
    align_values,
    descriptor_distance,
    hausdorff_orbit_distance,
    rotation_orbit,
)
from shapedil.synth import disk, rectangle, square, toy_corpus


def brute_force_distance(d1, d2, config):
    """Independent exhaustive-alignment evaluation: builds every permutation
    of the theta grid from the raw group action and minimizes directly."""
    n = len(d1.thetas)
    step = math.pi / n
    lookup = {round((t % math.pi) / 1e-6): i for i, t in enumerate(d1.thetas)}

    def index_of(theta):
        key = round((theta % math.pi) / 1e-6)
        return lookup.get(key, lookup.get(min(lookup, key=lambda k: abs(k - key))))

    weights = [math.exp(-config.kappa * b) for b in d1.betas]
    best = None
    for shift, refl in itertools.product(range(n), (False, True)):
        total = 0.0
        for i, t in enumerate(d1.thetas):
            src = index_of((-t if refl else t) + shift * step)
            for j in range(len(d1.betas)):
                diff = d1.values[i, j] - d2.values[src, j]
                total += weights[j] * diff * diff
        val = math.sqrt(total)
        if best is None or val < best:
            best = val
    return best


def brute_force_hausdorff(pa, pb):
    """Max-min scan over foreground coordinates, independent of EDTs."""
    from scipy.spatial.distance import cdist

    a = np.argwhere(pa).astype(float)
    b = np.argwhere(pb).astype(float)
    d = cdist(a, b)
    return max(d.min(axis=1).max(), d.min(axis=0).max())


@pytest.fixture(scope="module")
def descriptors(default_config):
    return {sid: compute_descriptor(m, default_config) for sid, _, m in toy_corpus()}


class TestDescriptorDistance:
    def test_self_distance_zero(self, descriptors, default_config):
        for sid, d in descriptors.items():
            val, align = descriptor_distance(d, d, default_config)
            assert val == 0.0, sid
            assert align == OrbitAlignment(0, False)

    def test_orbit_copies_at_zero(self, descriptors, default_config):
        d = descriptors["cross-01"]
        for shift in range(len(default_config.thetas)):
            for refl in (False, True):
                moved = DescriptorGrid(
                    d.thetas,
                    d.betas,
                    align_values(d, OrbitAlignment(shift, refl)),
                    d.epsilon,
                    d.area,
                )
                val, _ = descriptor_distance(d, moved, default_config)
                assert val <= 1e-12

    def test_shift_alignment_recovered(self, descriptors, default_config):
        d = descriptors["rect-01"]
        shifted = DescriptorGrid(
            d.thetas,
            d.betas,
            align_values(d, OrbitAlignment(1, False)),
            d.epsilon,
            d.area,
        )
        val, align = descriptor_distance(shifted, d, default_config)
        assert val <= 1e-12
        assert align.shift == 1 and not align.reflected

    def test_matches_brute_force(self, descriptors, default_config):
        pairs = [("disk-01", "rect-01"), ("square-02", "cross-02"), ("disk-03", "square-01")]
        for a, b in pairs:
            val, _ = descriptor_distance(descriptors[a], descriptors[b], default_config)
            oracle = brute_force_distance(descriptors[a], descriptors[b], default_config)
            assert val == pytest.approx(oracle, abs=1e-12)

    def test_positive_between_classes(self, descriptors, default_config):
        val, _ = descriptor_distance(
            descriptors["disk-01"], descriptors["rect-01"], default_config
        )
        assert val > 0.01

    def test_symmetry(self, descriptors, default_config):
        ids = sorted(descriptors)
        for a, b in itertools.combinations(ids, 2):
            ab, _ = descriptor_distance(descriptors[a], descriptors[b], default_config)
            ba, _ = descriptor_distance(descriptors[b], descriptors[a], default_config)
            assert abs(ab - ba) <= 1e-12

    def test_triangle_inequality(self, descriptors, default_config):
        ids = sorted(descriptors)
        dist = {
            (a, b): descriptor_distance(descriptors[a], descriptors[b], default_config)[0]
            for a in ids
            for b in ids
        }
        for a, b, c in itertools.product(ids, repeat=3):
            assert dist[a, c] <= dist[a, b] + dist[b, c] + 1e-9

    def test_grid_mismatch_rejected(self, descriptors, default_config):
        other = MetricConfig(betas=(1.0, 2.0))
        d2 = compute_descriptor(disk(20), other)
        with pytest.raises(GridMismatchError):
            descriptor_distance(descriptors["disk-01"], d2, default_config)

    def test_tie_break_deterministic(self, default_config):
        # A theta-constant descriptor ties on every alignment; the reported
        # alignment must be the lexicographically first.
        vals = np.full((4, 3), 0.5)
        d = DescriptorGrid(default_config.thetas, default_config.betas, vals, 8.0, 4096)
        _, align = descriptor_distance(d, d, default_config)
        assert align == OrbitAlignment(0, False)


class TestConfigValidation:
    def test_nonuniform_thetas_rejected(self):
        with pytest.raises(ConfigError):
            MetricConfig(thetas=(0.0, 0.1, 0.3, 1.0))

    def test_unsorted_betas_rejected(self):
        with pytest.raises(ConfigError):
            MetricConfig(betas=(3.0, 1.0))

    def test_bad_kappa_rejected(self):
        with pytest.raises(ConfigError):
            MetricConfig(kappa=0.0)


class TestHausdorff:
    def test_self_zero(self):
        m = disk(20)
        assert hausdorff_orbit_distance(m, m, rotation_samples=8) == 0.0

    def test_quarter_rotation_near_zero(self):
        m = rectangle(60, 24)
        r = rotate_mask_quarter(m, 1)
        assert hausdorff_orbit_distance(m, r, rotation_samples=8) <= 1.5

    def test_disk_vs_square_matches_brute_force(self):
        from shapedil.metric import _place_centered

        na = normalize_area(fill_holes(disk(20)), 4096, margin=4).pixels
        nb = normalize_area(fill_holes(square(40)), 4096, margin=4)
        best_fast = hausdorff_orbit_distance(disk(20), square(40), rotation_samples=8)

        best_oracle = math.inf
        for reflected in (False, True):
            base = BinaryMask(np.flipud(nb.pixels)) if reflected else nb
            for rotated in rotation_orbit(base, 8):
                side = max(na.shape + rotated.shape) + 8
                pa = _place_centered(na, (side, side))
                pb = _place_centered(rotated, (side, side))
                best_oracle = min(best_oracle, brute_force_hausdorff(pa, pb))
        assert best_fast == pytest.approx(best_oracle, abs=1e-9)

    def test_rejects_too_few_samples(self):
        with pytest.raises(ValueError):
            hausdorff_orbit_distance(disk(10), disk(12), rotation_samples=2)
