"""Normalization, absolute value, thresholding, and bilinear resize."""

import numpy as np
import pytest

from mstc import (
    AttributionMap,
    InvalidPercentileError,
    absolute,
    bilinear_resize,
    normalize_maxabs,
    percentile_threshold,
)


def test_normalize_maxabs_basic():
    m = normalize_maxabs(AttributionMap([[2.0, -4.0]]))
    assert m.values.tolist() == [[0.5, -1.0]]


def test_normalize_maxabs_zero_map_identity():
    m = normalize_maxabs(AttributionMap(np.zeros((3, 3))))
    assert (m.values == 0.0).all()


def test_normalize_maxabs_single_pixel():
    assert normalize_maxabs(AttributionMap([[-5.0]])).values.tolist() == [[-1.0]]


def test_normalize_preserves_argmax_and_signs():
    rng = np.random.default_rng(5)
    grid = rng.normal(size=(9, 11))
    out = normalize_maxabs(AttributionMap(grid)).values
    assert np.argmax(np.abs(out)) == np.argmax(np.abs(grid))
    assert (np.sign(out) == np.sign(grid)).all()
    assert np.abs(out).max() == 1.0


def test_absolute():
    m = absolute(AttributionMap([[-1.0, 2.0]]))
    assert m.values.tolist() == [[1.0, 2.0]]
    z = absolute(AttributionMap(np.zeros((2, 2))))
    assert (z.values == 0.0).all()


def test_absolute_idempotent():
    rng = np.random.default_rng(7)
    for _ in range(5):
        grid = rng.normal(size=(6, 8))
        once = absolute(AttributionMap(grid))
        twice = absolute(once)
        assert (once.values == twice.values).all()


class TestPercentileThreshold:
    def test_top3_of_16(self):
        m = AttributionMap(np.arange(1, 17, dtype=float).reshape(4, 4))
        ps = percentile_threshold(m, 80)
        # round(0.2 * 16) = 3 -> values {16, 15, 14}
        assert ps.points.tolist() == [[3, 1], [3, 2], [3, 3]]
        assert ps.threshold_value == 14.0

    def test_constant_map_tie_break_row_major(self):
        ps = percentile_threshold(AttributionMap(np.ones((4, 4))), 80)
        assert ps.points.tolist() == [[0, 0], [0, 1], [0, 2]]

    def test_count_224(self):
        ps = percentile_threshold(AttributionMap(np.zeros((224, 224))), 80)
        assert len(ps) == 10035

    @pytest.mark.parametrize("pct", [0.0, 100.0, -5.0, 120.0])
    def test_invalid_percentile(self, pct):
        with pytest.raises(InvalidPercentileError):
            percentile_threshold(AttributionMap(np.ones((2, 2))), pct)

    def test_negative_map_rejected(self):
        with pytest.raises(ValueError):
            percentile_threshold(AttributionMap([[-1.0, 2.0]]), 50)

    @pytest.mark.parametrize("seed", range(6))
    def test_exact_count_and_cut_dominance(self, seed):
        rng = np.random.default_rng(seed)
        h, w = int(rng.integers(2, 30)), int(rng.integers(2, 30))
        grid = rng.random((h, w))
        for pct in (20.0, 50.0, 80.0, 99.0):
            ps = percentile_threshold(AttributionMap(grid), pct)
            expect = max(1, int(np.floor((1 - pct / 100) * h * w + 0.5)))
            assert len(ps) == expect
            kept = grid[ps.points[:, 0], ps.points[:, 1]]
            mask = np.zeros((h, w), dtype=bool)
            mask[ps.points[:, 0], ps.points[:, 1]] = True
            dropped = grid[~mask]
            # every kept value >= every dropped value except inside the tie class
            if dropped.size:
                assert kept.min() >= dropped.max() or kept.min() == ps.threshold_value

    def test_determinism(self):
        rng = np.random.default_rng(11)
        grid = rng.random((16, 16))
        a = percentile_threshold(AttributionMap(grid), 70)
        b = percentile_threshold(AttributionMap(grid), 70)
        assert (a.points == b.points).all()


class TestBilinearResize:
    def test_constant_exact(self):
        m = AttributionMap(np.full((3, 5), 3.7))
        out = bilinear_resize(m, 7, 11)
        assert (out.values == 3.7).all()

    def test_identity_exact(self):
        rng = np.random.default_rng(2)
        grid = rng.normal(size=(6, 9))
        out = bilinear_resize(AttributionMap(grid), 6, 9)
        assert (out.values == grid).all()

    def test_2x2_to_4x4_hand_computed(self):
        # f(x, y) = x + y - 2xy interpolates [[0,1],[1,0]]; samples at
        # half-pixel centers: coords (i+0.5)/2 - 0.5 clamped to [0, 1]
        src = AttributionMap([[0.0, 1.0], [1.0, 0.0]])
        coords = np.clip((np.arange(4) + 0.5) / 2 - 0.5, 0.0, 1.0)
        expect = np.empty((4, 4))
        for i, x in enumerate(coords):
            for j, y in enumerate(coords):
                expect[i, j] = x + y - 2 * x * y
        out = bilinear_resize(src, 4, 4).values
        assert np.abs(out - expect).max() < 1e-12

    def test_range_bounded(self):
        rng = np.random.default_rng(23)
        grid = rng.normal(size=(8, 8))
        for hw in [(3, 3), (17, 5), (64, 64)]:
            out = bilinear_resize(AttributionMap(grid), *hw).values
            assert out.min() >= grid.min() and out.max() <= grid.max()

    def test_exact_on_bilinear_field(self):
        # a + b*x + c*y + d*x*y is reproduced at matching sample centers:
        # downsampling by an odd factor keeps centers on source centers
        h, w = 9, 15
        x = np.arange(h)[:, None].astype(float)
        y = np.arange(w)[None, :].astype(float)
        grid = 0.3 + 0.25 * x - 0.125 * y + 0.0625 * x * y
        out = bilinear_resize(AttributionMap(grid), 3, 5).values
        xs = (np.arange(3) + 0.5) * 3 - 0.5
        ys = (np.arange(5) + 0.5) * 3 - 0.5
        expect = 0.3 + 0.25 * xs[:, None] - 0.125 * ys[None, :] + 0.0625 * xs[:, None] * ys[None, :]
        assert np.abs(out - expect).max() < 1e-12

    def test_bad_targets(self):
        with pytest.raises(ValueError):
            bilinear_resize(AttributionMap([[1.0]]), 0, 3)
