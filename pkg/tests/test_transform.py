from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shapedil.mask import area
from shapedil.raster import CanvasLimitError, crop_to_foreground
from shapedil.synth import disk, rectangle
from shapedil.transform import (
    AffineMap,
    TransformParams,
    apply_transform,
    inverse_transform,
    make_transform,
)


class TestMakeTransform:
    def test_axis_aligned(self):
        m = make_transform(0.0, 2.0)
        assert np.allclose(m.matrix, [[2.0, 0.0], [0.0, 0.5]], atol=1e-12)

    def test_beta_one_is_identity(self):
        for theta in (-1.2, 0.0, 0.7, math.pi / 2):
            m = make_transform(theta, 1.0)
            assert (m.matrix == np.eye(2)).all()

    def test_diagonal_hand_value(self):
        # Direct evaluation of the matrix at theta=pi/4, beta=2:
        # entries (2*0.5 + 0.5*0.5, 1.5*0.5) = (1.25, 0.75).
        m = make_transform(math.pi / 4, 2.0)
        assert np.allclose(m.matrix, [[1.25, 0.75], [0.75, 1.25]], atol=1e-12)

    def test_rejects_beta_below_one(self):
        with pytest.raises(ValueError):
            make_transform(0.0, 0.5)

    def test_rejects_theta_out_of_range(self):
        with pytest.raises(ValueError):
            TransformParams(theta=2.0, beta=3.0)

    def test_determinant_one_many_samples(self):
        rng = np.random.default_rng(12345)
        for _ in range(1000):
            theta = rng.uniform(-math.pi / 2, math.pi / 2)
            beta = rng.uniform(1.0, 10.0)
            m = make_transform(theta, beta)
            assert abs(m.det - 1.0) <= 1e-12

    def test_eigenstructure(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            theta = rng.uniform(-math.pi / 2, math.pi / 2)
            beta = rng.uniform(1.0 + 1e-6, 8.0)
            m = make_transform(theta, beta).matrix
            u = np.array([math.cos(theta), math.sin(theta)])
            v = np.array([-math.sin(theta), math.cos(theta)])
            assert np.allclose(m @ u, beta * u, atol=1e-9)
            assert np.allclose(m @ v, v / beta, atol=1e-9)

    @given(
        st.floats(-math.pi / 2, math.pi / 2),
        st.floats(1.0, 50.0),
    )
    @settings(max_examples=200, deadline=None)
    def test_symmetric_unit_determinant(self, theta, beta):
        m = make_transform(theta, beta)
        assert m.m12 == m.m21
        assert abs(m.det - 1.0) <= 1e-12

    def test_affine_map_rejects_nonunit_determinant(self):
        with pytest.raises(ValueError):
            AffineMap(2.0, 0.0, 0.0, 2.0)


class TestApplyTransform:
    def test_identity_is_noop_on_geometry(self):
        m = disk(17)
        out = apply_transform(m, make_transform(0.3, 1.0), margin=4)
        assert (crop_to_foreground(out.pixels, 1) == crop_to_foreground(m.pixels, 1)).all()

    def test_disk_becomes_ellipse(self):
        r = 40
        m = disk(r)
        out = apply_transform(m, make_transform(0.0, 2.0), margin=4)
        ys, xs = np.nonzero(out.pixels)
        semi_x = (xs.max() - xs.min() + 1) / 2
        semi_y = (ys.max() - ys.min() + 1) / 2
        assert abs(semi_x - 2 * r) / (2 * r) <= 0.03
        assert abs(semi_y - r / 2) / (r / 2) <= 0.03

    def test_volume_preserved(self, corpus):
        f = make_transform(math.pi / 4, 3.0)
        for sid, _, mask in corpus:
            if area(mask) < 256:
                continue
            out = apply_transform(mask, f, margin=4)
            assert abs(area(out) - area(mask)) / area(mask) <= 0.02, sid

    def test_roundtrip_iou(self, corpus):
        from shapedil.metric import _place_centered

        from shapedil.mask import fill_holes

        theta, beta = math.pi / 4, 3.0
        f, fi = make_transform(theta, beta), inverse_transform(theta, beta)
        for sid, _, raw in corpus:
            mask = fill_holes(raw)  # thin unrepaired rings are not in scope
            fwd = apply_transform(mask, f, margin=4)
            back = apply_transform(fwd, fi, margin=4)
            # The warps are anchored at the centroid; integer placement can
            # still be off by one pixel, so take the best small shift.
            side = max(mask.pixels.shape + back.pixels.shape) + 10
            pa = _place_centered(mask.pixels, (side, side))
            pb = _place_centered(back.pixels, (side, side))
            iou = max(
                (pa & np.roll(pb, (dy, dx), axis=(0, 1))).sum()
                / (pa | np.roll(pb, (dy, dx), axis=(0, 1))).sum()
                for dy in (-1, 0, 1)
                for dx in (-1, 0, 1)
            )
            assert iou >= 0.98, (sid, iou)

    def test_canvas_guard(self):
        big = rectangle(3000, 60, pad=4)
        with pytest.raises(CanvasLimitError):
            apply_transform(big, make_transform(0.0, 5.0), margin=4)

    def test_inverse_transform_is_matrix_inverse(self):
        for theta in (-1.0, -0.3, 0.0, 0.8, math.pi / 2):
            f = make_transform(theta, 4.0).matrix
            fi = inverse_transform(theta, 4.0).matrix
            assert np.allclose(f @ fi, np.eye(2), atol=1e-9)
