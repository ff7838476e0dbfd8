"""Histogram statistics and autocorrelogram against direct-summation oracles."""

import math

import numpy as np
import pytest

from histofeat import AcConfig, GrayImage, autocorrelogram, gray_histogram, hist_stats
from histofeat.errors import ConfigError, DegenerateImageError


class TestGrayHistogram:
    def test_constant_image(self):
        img = GrayImage(np.full((5, 5), 7, dtype=np.uint8))
        h = gray_histogram(img)
        assert h[7] == 1.0 and h.sum() == 1.0

    def test_two_value_split(self):
        pixels = np.zeros((4, 4), dtype=np.uint8)
        pixels[:2] = 255
        h = gray_histogram(GrayImage(pixels))
        assert h[0] == 0.5 and h[255] == 0.5

    def test_sums_to_one(self, random_gray):
        assert abs(gray_histogram(random_gray()).sum() - 1.0) < 1e-12


def oracle_stats(hist):
    z = [k / 255.0 for k in range(256)]
    mean = sum(z[k] * hist[k] for k in range(256))
    var = sum((z[k] - mean) ** 2 * hist[k] for k in range(256))
    std = math.sqrt(var)
    smooth = 1 - 1 / (1 + var)
    mu3 = sum((z[k] - mean) ** 3 * hist[k] for k in range(256))
    mu4 = sum((z[k] - mean) ** 4 * hist[k] for k in range(256))
    unif = sum(hist[k] ** 2 for k in range(256))
    ent = -sum(hist[k] * math.log2(hist[k]) for k in range(256) if hist[k] > 0)
    return np.array([mean, std, smooth, mu3, mu4, unif, ent])


class TestHistStats:
    def test_constant_image_degenerate(self):
        img = GrayImage(np.full((6, 6), 90, dtype=np.uint8))
        v = hist_stats(gray_histogram(img)).values
        mean, std, smooth, mu3, mu4, unif, ent = v
        assert mean == pytest.approx(90 / 255)
        assert std == 0 and smooth == 0 and mu3 == 0 and mu4 == 0
        assert unif == 1.0 and ent == 0.0

    def test_two_equiprobable_values(self):
        pixels = np.zeros((4, 4), dtype=np.uint8)
        pixels[:2] = 255
        v = hist_stats(gray_histogram(GrayImage(pixels))).values
        assert v[5] == 0.5       # uniformity
        assert v[6] == 1.0       # entropy, one bit

    def test_uniform_histogram_exact(self):
        hist = np.full(256, 1 / 256)
        v = hist_stats(hist).values
        assert abs(v[6] - 8.0) < 1e-12
        assert abs(v[5] - 1 / 256) < 1e-15

    def test_matches_direct_summation(self, np_rng):
        for _ in range(10):
            raw = np_rng.random(256)
            hist = raw / raw.sum()
            got = hist_stats(hist).values
            want = oracle_stats(hist)
            assert np.max(np.abs(got - want)) < 1e-12


def oracle_autocorrelogram(bins, levels, distances):
    """Pixel-by-pixel ring walk."""
    h, w = bins.shape
    out = []
    for d in distances:
        same = [0] * levels
        total = [0] * levels
        for r in range(h):
            for c in range(w):
                for dr in range(-d, d + 1):
                    for dc in range(-d, d + 1):
                        if max(abs(dr), abs(dc)) != d:
                            continue
                        r2, c2 = r + dr, c + dc
                        if 0 <= r2 < h and 0 <= c2 < w:
                            total[bins[r, c]] += 1
                            if bins[r2, c2] == bins[r, c]:
                                same[bins[r, c]] += 1
        out.extend(
            same[v] / total[v] if total[v] else 0.0 for v in range(levels)
        )
    return np.array(out)


class TestAutocorrelogram:
    def test_constant_image_probability_one(self):
        img = GrayImage(np.full((8, 8), 100, dtype=np.uint8))
        vals = autocorrelogram(img).values
        bin_of_100 = (100 * 64) // 256
        for d_index in range(4):
            chunk = vals[d_index * 64:(d_index + 1) * 64]
            assert chunk[bin_of_100] == 1.0
            assert chunk.sum() == 1.0

    def test_matches_naive_enumeration(self, np_rng):
        cfg = AcConfig(distances=(1, 2), levels=8)
        for _ in range(5):
            img = GrayImage(np_rng.integers(0, 256, (9, 7), dtype=np.uint8))
            got = autocorrelogram(img, cfg).values
            from histofeat import quantize
            bins = quantize(img, 8).bins
            want = oracle_autocorrelogram(bins, 8, (1, 2))
            assert np.max(np.abs(got - want)) < 1e-12

    def test_checkerboard(self):
        pixels = np.zeros((6, 6), dtype=np.uint8)
        pixels[::2, 1::2] = 255
        pixels[1::2, ::2] = 255
        img = GrayImage(pixels)
        cfg = AcConfig(distances=(1,), levels=2)
        got = autocorrelogram(img, cfg).values
        from histofeat import quantize
        want = oracle_autocorrelogram(quantize(img, 2).bins, 2, (1,))
        assert np.array_equal(got, want)

    def test_values_are_probabilities(self, random_gray):
        vals = autocorrelogram(random_gray()).values
        assert np.all(vals >= 0) and np.all(vals <= 1)

    def test_rotation_invariance(self, np_rng):
        img = GrayImage(np_rng.integers(0, 256, (10, 10), dtype=np.uint8))
        base = autocorrelogram(img).values
        for k in (1, 2, 3):
            rot = GrayImage(np.rot90(img.pixels, k).copy())
            assert np.array_equal(autocorrelogram(rot).values, base)

    def test_feature_length(self, random_gray):
        assert autocorrelogram(random_gray()).values.size == 256

    def test_image_must_exceed_max_distance(self):
        img = GrayImage(np.zeros((4, 4), dtype=np.uint8))
        with pytest.raises(DegenerateImageError):
            autocorrelogram(img, AcConfig(distances=(1, 2, 3, 4), levels=8))

    def test_bad_distance_configs(self):
        with pytest.raises(ConfigError):
            AcConfig(distances=())
        with pytest.raises(ConfigError):
            AcConfig(distances=(2, 1))
        with pytest.raises(ConfigError):
            AcConfig(distances=(0, 1))
