"""Intensity-distribution descriptors: histogram statistics and the
autocorrelogram.  Both operate on grayscale rasters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateImageError
from .ingestion import GrayImage
from .moments import FeatureVector
from .texture import quantize

HIST_STAT_NAMES = (
    "mean", "std", "smoothness", "skewness", "kurtosis", "uniformity", "entropy",
)


@dataclass(frozen=True)
class AcConfig:
    distances: tuple = (1, 2, 3, 4)
    levels: int = 64

    def __post_init__(self):
        if not self.distances or list(self.distances) != sorted(set(self.distances)):
            raise ConfigError("distances must be non-empty and strictly increasing")
        if self.distances[0] < 1:
            raise ConfigError("distances must be >= 1")
        if not 2 <= self.levels <= 256:
            raise ConfigError(f"levels must be in [2, 256], got {self.levels}")


def gray_histogram(image: GrayImage) -> np.ndarray:
    """256-bin relative-frequency histogram (sums to 1)."""
    counts = np.bincount(image.pixels.ravel(), minlength=256)
    return counts / counts.sum()


def hist_stats(hist: np.ndarray) -> FeatureVector:
    """Seven statistics of a normalized 256-bin histogram.

    Intensities are mapped to z in [0, 1] (z = level/255); skewness and
    kurtosis are the raw third and fourth central moments of z, not
    sigma-standardized.  Output order: mean, standard deviation, smoothness
    R = 1 - 1/(1 + sigma^2), skewness, kurtosis, uniformity, entropy (bits).
    """
    p = np.asarray(hist, dtype=np.float64)
    z = np.arange(256) / 255.0
    mean = float(np.sum(z * p))
    var = float(np.sum((z - mean) ** 2 * p))
    std = float(np.sqrt(var))
    smoothness = 1.0 - 1.0 / (1.0 + var)
    mu3 = float(np.sum((z - mean) ** 3 * p))
    mu4 = float(np.sum((z - mean) ** 4 * p))
    uniformity = float(np.sum(p * p))
    nz = p[p > 0]
    entropy = float(-np.sum(nz * np.log2(nz))) + 0.0
    return FeatureVector(
        descriptor="hist",
        values=np.array([mean, std, smoothness, mu3, mu4, uniformity, entropy]),
    )


def _ring_offsets(d: int) -> list:
    """All (drow, dcol) at L-infinity distance exactly d (8d offsets)."""
    offs = []
    for dr in range(-d, d + 1):
        for dc in range(-d, d + 1):
            if max(abs(dr), abs(dc)) == d:
                offs.append((dr, dc))
    return offs


def autocorrelogram(image: GrayImage, config: AcConfig = AcConfig()) -> FeatureVector:
    """P(second pixel has bin c | first pixel has bin c, L-inf distance d).

    For each quantization bin c and each distance d, the value is the number
    of ordered in-bounds pixel pairs (p, q) with bin(p) = bin(q) = c and
    L-infinity distance exactly d, divided by the number of such pairs with
    bin(p) = c and any bin(q).  Bins never seen as a first pixel get 0.
    Per-distance vectors are concatenated in distance order.
    """
    max_d = config.distances[-1]
    if image.width <= max_d or image.height <= max_d:
        raise DegenerateImageError(
            f"image {image.height}x{image.width} not larger than distance {max_d}"
        )
    q = quantize(image, config.levels).bins
    h, w = q.shape
    levels = config.levels
    out = np.empty(levels * len(config.distances))
    for di, d in enumerate(config.distances):
        same = np.zeros(levels)
        total = np.zeros(levels)
        for dr, dc in _ring_offsets(d):
            r0, r1 = max(0, -dr), h - max(0, dr)
            c0, c1 = max(0, -dc), w - max(0, dc)
            if r1 <= r0 or c1 <= c0:
                continue
            a = q[r0:r1, c0:c1].ravel()
            b = q[r0 + dr:r1 + dr, c0 + dc:c1 + dc].ravel()
            total += np.bincount(a, minlength=levels)
            eq = a == b
            same += np.bincount(a[eq], minlength=levels)
        vals = np.divide(same, total, out=np.zeros(levels), where=total > 0)
        out[di * levels:(di + 1) * levels] = vals
    return FeatureVector(descriptor="ac", values=out)
