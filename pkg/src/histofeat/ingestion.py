"""Dataset loading, grayscale decoding, and stratified fold planning.

A dataset is a directory with two subdirectories, ``normal`` and ``abnormal``,
each holding PNG/BMP/JPEG tiles.  Sample ids are the forward-slash relative
paths (``normal/a.png``), sorted lexicographically, so every run enumerates
the same dataset in the same order on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import (
    DatasetLayoutError,
    DegenerateImageError,
    EmptyClassError,
    ImageFormatError,
    ImageReadError,
    ConfigError,
    StratificationError,
)
from .rng import SplitMix64, derive_seed

NORMAL = "normal"
ABNORMAL = "abnormal"
LABELS = (NORMAL, ABNORMAL)

_IMAGE_EXTS = {".png", ".bmp", ".jpg", ".jpeg"}
_IMAGE_FORMATS = {"PNG", "BMP", "JPEG"}


@dataclass(frozen=True)
class GrayImage:
    """8-bit grayscale raster, row-major (height, width)."""

    pixels: np.ndarray

    def __post_init__(self):
        p = self.pixels
        if p.ndim != 2 or p.dtype != np.uint8:
            raise ImageFormatError("GrayImage requires a 2-D uint8 array")

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True)
class RgbImage:
    """8-bit RGB raster, row-major (height, width, 3)."""

    pixels: np.ndarray

    def __post_init__(self):
        p = self.pixels
        if p.ndim != 3 or p.shape[2] != 3 or p.dtype != np.uint8:
            raise ImageFormatError("RgbImage requires an (H, W, 3) uint8 array")

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True)
class Sample:
    id: str
    label: str


@dataclass(frozen=True)
class Dataset:
    root: Path
    samples: tuple

    @property
    def ids(self) -> list:
        return [s.id for s in self.samples]

    @property
    def labels(self) -> list:
        return [s.label for s in self.samples]


@dataclass(frozen=True)
class FoldPlan:
    """Per-sample fold assignment for stratified k-fold cross-validation."""

    k: int
    assignment: np.ndarray
    seed: int

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment != fold)


def rgb_to_gray(rgb: RgbImage) -> GrayImage:
    """ITU-R BT.601 luma: round(0.299 R + 0.587 G + 0.114 B), ties up."""
    p = rgb.pixels.astype(np.float64)
    luma = 0.299 * p[:, :, 0] + 0.587 * p[:, :, 1] + 0.114 * p[:, :, 2]
    gray = np.clip(np.floor(luma + 0.5), 0, 255).astype(np.uint8)
    return GrayImage(gray)


def decode_and_gray(path) -> GrayImage:
    """Decode a PNG/BMP/JPEG file and convert to grayscale.

    Pure function of the file bytes: decoding and the BT.601 weighting are
    both deterministic.  Already-gray files pass through unchanged (the luma
    of (v, v, v) is exactly v).
    """
    path = Path(path)
    try:
        with Image.open(path) as img:
            if img.format not in _IMAGE_FORMATS:
                raise ImageFormatError(f"{path}: unsupported format {img.format!r}")
            rgb = np.asarray(img.convert("RGB"))
    except UnidentifiedImageError as exc:
        raise ImageFormatError(f"{path}: not a decodable image") from exc
    except FileNotFoundError as exc:
        raise ImageReadError(f"{path}: file not found") from exc
    except OSError as exc:
        raise ImageReadError(f"{path}: {exc}") from exc
    if rgb.shape[0] < 3 or rgb.shape[1] < 3:
        raise DegenerateImageError(f"{path}: image smaller than 3x3")
    return rgb_to_gray(RgbImage(np.ascontiguousarray(rgb)))


def load_dataset(root) -> Dataset:
    """Enumerate `<root>/{normal,abnormal}/*` into a deterministic Dataset."""
    root = Path(root)
    samples = []
    for label in LABELS:
        class_dir = root / label
        if not class_dir.is_dir():
            raise DatasetLayoutError(f"missing class directory: {class_dir}")
        files = [
            p for p in class_dir.iterdir()
            if p.is_file() and p.suffix.lower() in _IMAGE_EXTS
        ]
        if not files:
            raise EmptyClassError(f"no images under {class_dir}")
        for p in files:
            samples.append(Sample(id=f"{label}/{p.name}", label=label))
    samples.sort(key=lambda s: s.id)
    return Dataset(root=root, samples=tuple(samples))


def stratified_folds(dataset: Dataset, k: int, seed: int) -> FoldPlan:
    """Assign each sample a fold in [0, k), stratified by class.

    Within each class the sample indices are shuffled by a SplitMix64 stream
    seeded with derive_seed(seed, "fold/<label>"), then dealt round-robin, so
    per-class fold sizes differ by at most one and the plan is a pure
    function of (dataset, k, seed).
    """
    if k < 2:
        raise ConfigError(f"fold count must be >= 2, got {k}")
    labels = dataset.labels
    assignment = np.full(len(labels), -1, dtype=np.int64)
    for label in sorted(set(labels)):
        idx = [i for i, lab in enumerate(labels) if lab == label]
        if len(idx) < k:
            raise StratificationError(
                f"class {label!r} has {len(idx)} samples, fewer than k={k}"
            )
        rng = SplitMix64(derive_seed(seed, f"fold/{label}"))
        rng.shuffle(idx)
        for pos, i in enumerate(idx):
            assignment[i] = pos % k
    return FoldPlan(k=k, assignment=assignment, seed=seed)
