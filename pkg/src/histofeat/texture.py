"""Texture descriptors: Haralick GLCM statistics, rotation-invariant LBP
histograms, and Haar rectangle features over a summed-area table.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BankError, ConfigError, DegenerateImageError
from .ingestion import GrayImage
from .moments import FeatureVector

GLCM_ANGLES = (0, 45, 90, 135)

# (dcol, drow) per angle; rows grow downward so 45 deg points up-right.
_ANGLE_OFFSETS = {0: (1, 0), 45: (1, -1), 90: (0, -1), 135: (-1, -1)}

HARALICK_NAMES = (
    "energy", "correlation", "inertia", "entropy", "idm",
    "sum_average", "sum_variance", "sum_entropy",
    "difference_average", "difference_variance", "difference_entropy",
    "imc1", "imc2",
)


@dataclass(frozen=True)
class GlcmConfig:
    levels: int = 8
    d: int = 1
    angles: tuple = GLCM_ANGLES

    def __post_init__(self):
        if not 2 <= self.levels <= 256:
            raise ConfigError(f"levels must be in [2, 256], got {self.levels}")
        if self.d < 1:
            raise ConfigError("distance must be >= 1")
        for a in self.angles:
            if a not in _ANGLE_OFFSETS:
                raise ConfigError(f"unsupported angle {a}")


@dataclass(frozen=True)
class Glcm:
    """Symmetric co-occurrence matrix normalized to sum 1."""

    matrix: np.ndarray


@dataclass(frozen=True)
class LbpConfig:
    radius: int = 1
    neighbors: int = 8

    def __post_init__(self):
        if (self.radius, self.neighbors) != (1, 8):
            raise ConfigError("only r=1, n=8 is supported")


@dataclass(frozen=True)
class QuantizedImage:
    bins: np.ndarray
    levels: int


def quantize(image: GrayImage, levels: int) -> QuantizedImage:
    """Uniform quantization: bin = intensity * levels // 256."""
    if not 2 <= levels <= 256:
        raise ConfigError(f"levels must be in [2, 256], got {levels}")
    bins = (image.pixels.astype(np.int64) * levels) // 256
    return QuantizedImage(bins=bins, levels=levels)


def glcm(qimage: QuantizedImage, d: int, angle: int) -> Glcm:
    """Symmetrized, normalized co-occurrence matrix at one offset."""
    if angle not in _ANGLE_OFFSETS:
        raise ConfigError(f"unsupported angle {angle}")
    dc, dr = _ANGLE_OFFSETS[angle]
    dc, dr = dc * d, dr * d
    q = qimage.bins
    h, w = q.shape
    r0, r1 = max(0, -dr), h - max(0, dr)
    c0, c1 = max(0, -dc), w - max(0, dc)
    if r1 <= r0 or c1 <= c0:
        raise DegenerateImageError(f"image too small for d={d} at {angle} degrees")
    a = q[r0:r1, c0:c1].ravel()
    b = q[r0 + dr:r1 + dr, c0 + dc:c1 + dc].ravel()
    n = qimage.levels
    counts = np.bincount(a * n + b, minlength=n * n).reshape(n, n)
    sym = counts + counts.T
    return Glcm(matrix=sym / sym.sum())


def _entropy2(p: np.ndarray) -> float:
    """Base-2 entropy with the 0 log 0 = 0 convention."""
    nz = p[p > 0]
    return float(-np.sum(nz * np.log2(nz))) + 0.0


def haralick13(g: Glcm) -> np.ndarray:
    """The thirteen Haralick statistics of a normalized symmetric GLCM.

    Order: energy, correlation, inertia, entropy, inverse difference moment,
    sum average, sum variance, sum entropy, difference average, difference
    variance, difference entropy, and the two information measures of
    correlation.  Bin indices are 0-based; logs are base 2; sum variance is
    the variance of i+j about the sum average; zero-variance correlation is
    defined as 0.
    """
    p = g.matrix
    n = p.shape[0]
    i = np.arange(n, dtype=np.float64)
    ii, jj = np.meshgrid(i, i, indexing="ij")
    px = p.sum(axis=1)
    mu = float(np.sum(i * px))
    var = float(np.sum((i - mu) ** 2 * px))

    energy = float(np.sum(p * p))
    if var > 0:
        correlation = float(np.sum((ii - mu) * (jj - mu) * p) / var)
    else:
        correlation = 0.0
    inertia = float(np.sum((ii - jj) ** 2 * p))
    entropy = _entropy2(p.ravel())
    idm = float(np.sum(p / (1.0 + (ii - jj) ** 2)))

    # Marginal distributions of i+j (0..2n-2) and |i-j| (0..n-1).
    p_sum = np.zeros(2 * n - 1)
    np.add.at(p_sum, (ii + jj).astype(np.int64).ravel(), p.ravel())
    p_diff = np.zeros(n)
    np.add.at(p_diff, np.abs(ii - jj).astype(np.int64).ravel(), p.ravel())

    k_sum = np.arange(2 * n - 1, dtype=np.float64)
    k_diff = np.arange(n, dtype=np.float64)
    sum_average = float(np.sum(k_sum * p_sum))
    sum_variance = float(np.sum((k_sum - sum_average) ** 2 * p_sum))
    sum_entropy = _entropy2(p_sum)
    diff_average = float(np.sum(k_diff * p_diff))
    diff_variance = float(np.sum((k_diff - diff_average) ** 2 * p_diff))
    diff_entropy = _entropy2(p_diff)

    hx = _entropy2(px)
    outer = np.outer(px, px)
    mask = p > 0
    hxy1 = float(-np.sum(p[mask] * np.log2(outer[mask])))
    hxy2 = _entropy2(outer.ravel())
    imc1 = (entropy - hxy1) / hx if hx > 0 else 0.0
    imc2 = float(np.sqrt(max(0.0, 1.0 - np.exp(-2.0 * (hxy2 - entropy)))))

    return np.array([
        energy, correlation, inertia, entropy, idm,
        sum_average, sum_variance, sum_entropy,
        diff_average, diff_variance, diff_entropy,
        imc1, imc2,
    ])


def haralick_ri(image: GrayImage, config: GlcmConfig = GlcmConfig()) -> FeatureVector:
    """Mean of the per-angle Haralick vectors over the four offsets.

    Rotating the image by 90 degrees swaps the 0/90 and 45/135 co-occurrence
    multisets exactly (symmetrization removes the pair-order flip), so the
    mean is computed as ((v0+v90)+(v45+v135))/4: additions stay within the
    swapped pairs and the result is bitwise rotation invariant.
    """
    q = quantize(image, config.levels)
    v = {a: haralick13(glcm(q, config.d, a)) for a in GLCM_ANGLES}
    mean = ((v[0] + v[90]) + (v[45] + v[135])) / 4.0
    return FeatureVector(descriptor="haralick", values=mean)


# Neighbor offsets (dcol, drow) in counter-clockwise order from the right;
# 90-degree image rotation shifts codes by exactly two bit positions.
_LBP_OFFSETS = ((1, 0), (1, -1), (0, -1), (-1, -1),
                (-1, 0), (-1, 1), (0, 1), (1, 1))


def _lbp_tables():
    """Map each 8-bit code to its rotation-class index; 36 classes."""
    minima = np.empty(256, dtype=np.int64)
    for code in range(256):
        rots = [((code >> s) | (code << (8 - s))) & 0xFF for s in range(8)]
        minima[code] = min(rots)
    classes = np.unique(minima)
    class_index = np.zeros(256, dtype=np.int64)
    class_index[classes] = np.arange(classes.size)
    return class_index[minima], classes.size


_LBP_CLASS_OF_CODE, LBP_N_CLASSES = _lbp_tables()


def lbp_ri_hist(image: GrayImage) -> FeatureVector:
    """Normalized histogram of rotation-invariant LBP codes (36 bins).

    Bit b of a pixel's code is set iff the b-th neighbor is >= the center;
    codes are reduced to the minimum over their eight circular bit-rotations
    and the histogram runs over the 36 resulting classes in ascending order
    of class representative.
    """
    if image.width < 3 or image.height < 3:
        raise DegenerateImageError("LBP requires at least 3x3")
    p = image.pixels
    center = p[1:-1, 1:-1]
    codes = np.zeros(center.shape, dtype=np.int64)
    h, w = p.shape
    for bit, (dc, dr) in enumerate(_LBP_OFFSETS):
        neigh = p[1 + dr:h - 1 + dr, 1 + dc:w - 1 + dc]
        codes |= (neigh >= center).astype(np.int64) << bit
    hist = np.bincount(_LBP_CLASS_OF_CODE[codes.ravel()], minlength=LBP_N_CLASSES)
    return FeatureVector(descriptor="lbp", values=hist / hist.sum())


def integral_image(image: GrayImage) -> np.ndarray:
    """Summed-area table: entry (y, x) = sum of intensities over [0..y]x[0..x]."""
    return np.cumsum(np.cumsum(image.pixels.astype(np.float64), axis=0), axis=1)


HAAR_KINDS = ("edge-h", "edge-v", "line-h", "line-v", "four-rect", "center-surround")


@dataclass(frozen=True)
class HaarTemplate:
    """Weighted rectangles, each (weight, r0, c0, r1, c1) with inclusive bounds."""

    kind: str
    rects: tuple

    @property
    def area(self) -> float:
        return float(sum(
            abs(w) * (r1 - r0 + 1) * (c1 - c0 + 1) for w, r0, c0, r1, c1 in self.rects
        ))


@dataclass(frozen=True)
class HaarBank:
    templates: tuple


def _template_rects(kind: str, r: int, c: int, s: int) -> tuple:
    """Rectangles of one template anchored at (r, c) with nominal size s."""
    if kind == "edge-h":
        h2 = s // 2
        return ((+1, r, c, r + h2 - 1, c + s - 1),
                (-1, r + h2, c, r + 2 * h2 - 1, c + s - 1))
    if kind == "edge-v":
        w2 = s // 2
        return ((+1, r, c, r + s - 1, c + w2 - 1),
                (-1, r, c + w2, r + s - 1, c + 2 * w2 - 1))
    if kind == "line-h":
        h3 = s // 3
        return ((+1, r, c, r + h3 - 1, c + s - 1),
                (-2, r + h3, c, r + 2 * h3 - 1, c + s - 1),
                (+1, r + 2 * h3, c, r + 3 * h3 - 1, c + s - 1))
    if kind == "line-v":
        w3 = s // 3
        return ((+1, r, c, r + s - 1, c + w3 - 1),
                (-2, r, c + w3, r + s - 1, c + 2 * w3 - 1),
                (+1, r, c + 2 * w3, r + s - 1, c + 3 * w3 - 1))
    if kind == "four-rect":
        h2, w2 = s // 2, s // 2
        return ((+1, r, c, r + h2 - 1, c + w2 - 1),
                (-1, r, c + w2, r + h2 - 1, c + 2 * w2 - 1),
                (-1, r + h2, c, r + 2 * h2 - 1, c + w2 - 1),
                (+1, r + h2, c + w2, r + 2 * h2 - 1, c + 2 * w2 - 1))
    if kind == "center-surround":
        # Inner square of half side; ring weight +1, center -3 balances areas.
        q = s // 4
        inner = (r + q, c + q, r + 3 * q - 1, c + 3 * q - 1)
        return ((+1, r, c, r + 4 * q - 1, c + 4 * q - 1),
                (-4, *inner))
    raise ConfigError(f"unknown haar kind {kind!r}")


DEFAULT_HAAR_KINDS = ("edge-h", "edge-v", "line-h", "line-v", "four-rect")
DEFAULT_HAAR_SCALES = (0.125, 0.25, 0.5)
DEFAULT_HAAR_GRID = 4


def default_haar_bank(width: int, height: int) -> HaarBank:
    """5 kinds x 3 scales x 16 anchor positions = 240 balanced templates.

    Nominal size = scale * min(width, height); anchors sit on a 4x4 grid
    stretched over the placements that keep the template inside the image.
    Every template's positive and negative weighted areas are equal, so a
    constant image scores 0 on all features.
    """
    templates = []
    min_dim = min(width, height)
    for kind in DEFAULT_HAAR_KINDS:
        for scale in DEFAULT_HAAR_SCALES:
            s = max(4, int(round(min_dim * scale)))
            rects0 = _template_rects(kind, 0, 0, s)
            th = max(r1 for _, _, _, r1, _ in rects0) + 1
            tw = max(c1 for _, _, _, _, c1 in rects0) + 1
            if th > height or tw > width:
                raise BankError(
                    f"{kind} at scale {scale} needs {th}x{tw}, image is {height}x{width}"
                )
            g = DEFAULT_HAAR_GRID
            for a in range(g):
                for b in range(g):
                    r = int(round(a * (height - th) / (g - 1)))
                    c = int(round(b * (width - tw) / (g - 1)))
                    templates.append(HaarTemplate(kind, _template_rects(kind, r, c, s)))
    return HaarBank(templates=tuple(templates))


def haar_features(image: GrayImage, bank: HaarBank = None) -> FeatureVector:
    """Weighted rectangle sums per template, normalized by weighted area."""
    if bank is None:
        bank = default_haar_bank(image.width, image.height)
    h, w = image.height, image.width
    sat = np.zeros((h + 1, w + 1))
    sat[1:, 1:] = integral_image(image)
    values = np.empty(len(bank.templates))
    for t, tpl in enumerate(bank.templates):
        acc = 0.0
        for wt, r0, c0, r1, c1 in tpl.rects:
            if r0 < 0 or c0 < 0 or r1 >= h or c1 >= w or r1 < r0 or c1 < c0:
                raise BankError(f"template {t} rectangle out of bounds")
            acc += wt * (
                sat[r1 + 1, c1 + 1] - sat[r0, c1 + 1] - sat[r1 + 1, c0] + sat[r0, c0]
            )
        values[t] = acc / tpl.area
    return FeatureVector(descriptor="haar", values=values)
