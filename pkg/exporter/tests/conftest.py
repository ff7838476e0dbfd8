import numpy as np
import pytest
from PIL import Image


@pytest.fixture
def np_rng():
    return np.random.default_rng(20260821)


def write_png(path, pixels):
    Image.fromarray(pixels, mode="RGB").save(path, format="PNG")


@pytest.fixture
def tiny_dataset(tmp_path, np_rng):
    """Eight 32x32 RGB tiles under normal/ and abnormal/."""
    root = tmp_path / "data"
    for label, stem in (("normal", "n"), ("abnormal", "a")):
        d = root / label
        d.mkdir(parents=True)
        for i in range(4):
            pixels = np_rng.integers(0, 256, size=(32, 32, 3)).astype(np.uint8)
            write_png(d / f"{stem}{i}.png", pixels)
    return root
