"""Shared fixtures: seeded random images and tiny on-disk datasets."""

import numpy as np
import pytest
from PIL import Image

from histofeat import GrayImage


@pytest.fixture
def np_rng():
    return np.random.default_rng(20260821)


@pytest.fixture
def random_gray(np_rng):
    def make(height=16, width=16):
        return GrayImage(np_rng.integers(0, 256, (height, width), dtype=np.uint8))
    return make


def write_png(path, pixels):
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(pixels).save(path)


@pytest.fixture
def tiny_dataset(tmp_path, np_rng):
    """4 normal + 4 abnormal 16x16 tiles on disk; returns the root path."""
    root = tmp_path / "data"
    for i in range(4):
        noise = np_rng.integers(0, 256, (16, 16), dtype=np.uint8)
        write_png(root / "normal" / f"n{i}.png", noise)
        grad = np.tile(np.arange(16) * 15, (16, 1)) + int(np_rng.integers(0, 4))
        write_png(root / "abnormal" / f"a{i}.png", grad.astype(np.uint8))
    return root
