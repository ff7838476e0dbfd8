"""Texture descriptors against naive enumeration oracles."""

import math

import numpy as np
import pytest

from histofeat import (
    Glcm, GlcmConfig, GrayImage, default_haar_bank, glcm, haar_features,
    haralick13, haralick_ri, integral_image, lbp_ri_hist, quantize,
)
from histofeat.errors import BankError, ConfigError, DegenerateImageError
from histofeat.texture import LbpConfig, _ANGLE_OFFSETS


class TestQuantize:
    @pytest.mark.parametrize("value,levels,expected", [
        (255, 8, 7), (0, 8, 0), (128, 8, 4), (31, 8, 0), (32, 8, 1),
        (255, 2, 1), (127, 2, 0),
    ])
    def test_bin_rule(self, value, levels, expected):
        img = GrayImage(np.full((3, 3), value, dtype=np.uint8))
        assert quantize(img, levels).bins[0, 0] == expected

    def test_levels_out_of_range(self):
        img = GrayImage(np.zeros((3, 3), dtype=np.uint8))
        for levels in (1, 0, 257):
            with pytest.raises(ConfigError):
                quantize(img, levels)


def oracle_glcm(bins, levels, d, angle):
    """Count ordered pairs position by position, then symmetrize."""
    dc, dr = _ANGLE_OFFSETS[angle]
    dc, dr = dc * d, dr * d
    h, w = bins.shape
    counts = np.zeros((levels, levels))
    for r in range(h):
        for c in range(w):
            r2, c2 = r + dr, c + dc
            if 0 <= r2 < h and 0 <= c2 < w:
                counts[bins[r, c], bins[r2, c2]] += 1
    sym = counts + counts.T
    return sym / sym.sum()


class TestGlcm:
    def test_two_row_example(self):
        img = GrayImage(np.array([[0, 0], [255, 255]], dtype=np.uint8))
        # DegenerateImageError guard needs >= the offset; 2x2 works at d=1, 0 deg.
        q = quantize(img, 2)
        m = glcm(q, d=1, angle=0).matrix
        assert m[0, 0] == 0.5 and m[1, 1] == 0.5 and m[0, 1] == 0

    def test_constant_image_single_diagonal_entry(self):
        img = GrayImage(np.full((5, 5), 200, dtype=np.uint8))
        q = quantize(img, 8)
        m = glcm(q, 1, 45).matrix
        assert m[6, 6] == 1.0 and m.sum() == 1.0

    @pytest.mark.parametrize("angle", [0, 45, 90, 135])
    def test_matches_naive_pair_counting(self, angle, np_rng):
        for _ in range(10):
            img = GrayImage(np_rng.integers(0, 256, (7, 9), dtype=np.uint8))
            q = quantize(img, 4)
            got = glcm(q, 1, angle).matrix
            want = oracle_glcm(q.bins, 4, 1, angle)
            assert np.max(np.abs(got - want)) == 0

    def test_symmetric_and_normalized(self, random_gray):
        q = quantize(random_gray(), 8)
        for angle in (0, 45, 90, 135):
            m = glcm(q, 1, angle).matrix
            assert np.array_equal(m, m.T)
            assert abs(m.sum() - 1.0) < 1e-12

    def test_too_small_for_offset(self):
        img = GrayImage(np.zeros((3, 3), dtype=np.uint8))
        with pytest.raises(DegenerateImageError):
            glcm(quantize(img, 2), d=3, angle=0)

    def test_unknown_angle(self, random_gray):
        with pytest.raises(ConfigError):
            glcm(quantize(random_gray(), 8), 1, 30)


def oracle_haralick(p):
    """Textbook formulas, written as explicit loops."""
    n = p.shape[0]
    px = [sum(p[i, j] for j in range(n)) for i in range(n)]
    py = [sum(p[i, j] for i in range(n)) for j in range(n)]
    mu_x = sum(i * px[i] for i in range(n))
    sd_x = math.sqrt(sum((i - mu_x) ** 2 * px[i] for i in range(n)))

    def log2z(v):
        return math.log2(v) if v > 0 else 0.0

    energy = sum(p[i, j] ** 2 for i in range(n) for j in range(n))
    if sd_x > 0:
        correlation = sum(
            (i - mu_x) * (j - mu_x) * p[i, j] for i in range(n) for j in range(n)
        ) / sd_x**2
    else:
        correlation = 0.0
    inertia = sum((i - j) ** 2 * p[i, j] for i in range(n) for j in range(n))
    entropy = -sum(p[i, j] * log2z(p[i, j]) for i in range(n) for j in range(n))
    idm = sum(p[i, j] / (1 + (i - j) ** 2) for i in range(n) for j in range(n))

    psum = [0.0] * (2 * n - 1)
    pdiff = [0.0] * n
    for i in range(n):
        for j in range(n):
            psum[i + j] += p[i, j]
            pdiff[abs(i - j)] += p[i, j]
    sum_avg = sum(k * psum[k] for k in range(2 * n - 1))
    sum_var = sum((k - sum_avg) ** 2 * psum[k] for k in range(2 * n - 1))
    sum_ent = -sum(psum[k] * log2z(psum[k]) for k in range(2 * n - 1))
    diff_avg = sum(k * pdiff[k] for k in range(n))
    diff_var = sum((k - diff_avg) ** 2 * pdiff[k] for k in range(n))
    diff_ent = -sum(pdiff[k] * log2z(pdiff[k]) for k in range(n))

    hx = -sum(px[i] * log2z(px[i]) for i in range(n))
    hy = -sum(py[j] * log2z(py[j]) for j in range(n))
    hxy1 = -sum(
        p[i, j] * log2z(px[i] * py[j])
        for i in range(n) for j in range(n) if p[i, j] > 0
    )
    hxy2 = -sum(
        px[i] * py[j] * log2z(px[i] * py[j]) for i in range(n) for j in range(n)
    )
    imc1 = (entropy - hxy1) / max(hx, hy) if max(hx, hy) > 0 else 0.0
    imc2 = math.sqrt(max(0.0, 1.0 - math.exp(-2.0 * (hxy2 - entropy))))
    return np.array([
        energy, correlation, inertia, entropy, idm, sum_avg, sum_var, sum_ent,
        diff_avg, diff_var, diff_ent, imc1, imc2,
    ])


class TestHaralick:
    def test_two_entry_energy(self):
        p = np.array([[0.5, 0.0], [0.0, 0.5]])
        vals = haralick13(Glcm(matrix=p))
        assert vals[0] == 0.5

    def test_constant_image_degenerate_values(self):
        img = GrayImage(np.full((6, 6), 77, dtype=np.uint8))
        m = glcm(quantize(img, 8), 1, 0)
        vals = haralick13(m)
        assert vals[0] == 1.0    # energy
        assert vals[3] == 0.0    # entropy
        assert vals[2] == 0.0    # inertia
        assert vals[1] == 0.0    # correlation convention on zero variance

    def test_matches_textbook_oracle(self, np_rng):
        for _ in range(10):
            img = GrayImage(np_rng.integers(0, 256, (8, 8), dtype=np.uint8))
            for angle in (0, 45, 90, 135):
                m = glcm(quantize(img, 8), 1, angle)
                got = haralick13(m)
                want = oracle_haralick(m.matrix)
                assert np.max(np.abs(got - want)) < 1e-9

    def test_ri_is_mean_of_four_angles(self, random_gray):
        img = random_gray()
        q = quantize(img, 8)
        per_angle = [haralick13(glcm(q, 1, a)) for a in (0, 45, 90, 135)]
        got = haralick_ri(img).values
        want = np.mean(per_angle, axis=0)
        assert np.max(np.abs(got - want)) < 1e-12

    def test_exact_rotation_invariance(self, np_rng):
        for _ in range(5):
            img = GrayImage(np_rng.integers(0, 256, (10, 10), dtype=np.uint8))
            base = haralick_ri(img).values
            for k in (1, 2, 3):
                rot = GrayImage(np.rot90(img.pixels, k).copy())
                assert np.array_equal(haralick_ri(rot).values, base)


class TestLbp:
    def test_constant_image_mass_on_all_ones_code(self):
        img = GrayImage(np.full((8, 8), 50, dtype=np.uint8))
        hist = lbp_ri_hist(img).values
        assert hist[-1] == 1.0 and hist.sum() == 1.0

    def test_36_rotation_classes(self):
        # Enumerate all 256 codes and their rotation orbits directly.
        minima = set()
        for code in range(256):
            minima.add(min(((code >> s) | (code << (8 - s))) & 0xFF for s in range(8)))
        assert len(minima) == 36
        hist = lbp_ri_hist(GrayImage(np.zeros((5, 5), dtype=np.uint8)))
        assert hist.values.size == 36

    def test_normalized(self, random_gray):
        assert abs(lbp_ri_hist(random_gray()).values.sum() - 1.0) < 1e-12

    def test_exact_rotation_invariance(self, np_rng):
        for _ in range(5):
            img = GrayImage(np_rng.integers(0, 256, (9, 13), dtype=np.uint8))
            base = lbp_ri_hist(img).values
            for k in (1, 2, 3):
                rot = GrayImage(np.rot90(img.pixels, k).copy())
                assert np.array_equal(lbp_ri_hist(rot).values, base)

    def test_known_tiny_pattern(self):
        # Single bright center: every neighbor < center, code 0 at the middle
        # pixel of a 3x3, which is its own rotation class (bin 0).
        img = GrayImage(np.array([
            [10, 10, 10], [10, 200, 10], [10, 10, 10]
        ], dtype=np.uint8))
        hist = lbp_ri_hist(img).values
        assert hist[0] == 1.0

    def test_degenerate_image_rejected(self):
        with pytest.raises(DegenerateImageError):
            lbp_ri_hist(GrayImage(np.zeros((2, 5), dtype=np.uint8)))

    def test_only_default_config_supported(self):
        with pytest.raises(ConfigError):
            LbpConfig(radius=2, neighbors=8)


class TestIntegralImage:
    def test_hand_example(self):
        img = GrayImage(np.array([[1, 2], [3, 4]], dtype=np.uint8))
        assert np.array_equal(integral_image(img), [[1, 3], [4, 10]])

    def test_zero_image(self):
        img = GrayImage(np.zeros((4, 6), dtype=np.uint8))
        assert np.all(integral_image(img) == 0)

    def test_corner_is_total_sum(self, random_gray):
        img = random_gray(7, 5)
        sat = integral_image(img)
        assert sat[-1, -1] == img.pixels.sum()


def oracle_haar(image, bank):
    """Direct slicing sums, no summed-area table."""
    f = image.pixels.astype(np.float64)
    out = []
    for tpl in bank.templates:
        acc = 0.0
        area = 0.0
        for w, r0, c0, r1, c1 in tpl.rects:
            acc += w * f[r0:r1 + 1, c0:c1 + 1].sum()
            area += abs(w) * (r1 - r0 + 1) * (c1 - c0 + 1)
        out.append(acc / area)
    return np.array(out)


class TestHaar:
    def test_default_bank_has_240_templates(self):
        bank = default_haar_bank(64, 64)
        assert len(bank.templates) == 240
        kinds = {t.kind for t in bank.templates}
        assert kinds == {"edge-h", "edge-v", "line-h", "line-v", "four-rect"}

    def test_templates_fit_inside_image(self):
        for w, h in [(64, 64), (160, 160), (40, 96)]:
            bank = default_haar_bank(w, h)
            for tpl in bank.templates:
                for _, r0, c0, r1, c1 in tpl.rects:
                    assert 0 <= r0 <= r1 < h and 0 <= c0 <= c1 < w

    def test_constant_image_all_zero(self):
        img = GrayImage(np.full((64, 64), 123, dtype=np.uint8))
        assert np.all(haar_features(img).values == 0)

    def test_matches_naive_summation(self, np_rng):
        for _ in range(5):
            img = GrayImage(np_rng.integers(0, 256, (48, 64), dtype=np.uint8))
            bank = default_haar_bank(64, 48)
            got = haar_features(img, bank).values
            want = oracle_haar(img, bank)
            assert np.max(np.abs(got - want)) < 1e-9

    def test_half_split_maximizes_boundary_edge_v(self):
        pixels = np.zeros((64, 64), dtype=np.uint8)
        pixels[:, 32:] = 255
        img = GrayImage(pixels)
        bank = default_haar_bank(64, 64)
        feats = haar_features(img, bank).values
        edge_v = [
            (i, tpl) for i, tpl in enumerate(bank.templates) if tpl.kind == "edge-v"
        ]
        best_i, best_tpl = max(edge_v, key=lambda it: abs(feats[it[0]]))
        cols = [c for _, _, c0, _, c1 in best_tpl.rects for c in (c0, c1)]
        assert min(cols) < 32 <= max(cols)  # winning template spans the boundary
        assert abs(feats[best_i]) >= max(abs(feats[i]) for i, _ in edge_v)

    def test_out_of_bounds_template_rejected(self):
        from histofeat import HaarBank, HaarTemplate
        img = GrayImage(np.zeros((8, 8), dtype=np.uint8))
        bad = HaarBank(templates=(
            HaarTemplate("edge-h", ((+1, 0, 0, 3, 9), (-1, 4, 0, 7, 9))),
        ))
        with pytest.raises(BankError):
            haar_features(img, bad)

    def test_center_surround_kind_is_balanced(self):
        from histofeat import HaarBank, HaarTemplate
        from histofeat.texture import _template_rects
        rects = _template_rects("center-surround", 0, 0, 16)
        img = GrayImage(np.full((20, 20), 99, dtype=np.uint8))
        bank = HaarBank(templates=(HaarTemplate("center-surround", rects),))
        assert haar_features(img, bank).values[0] == 0.0
