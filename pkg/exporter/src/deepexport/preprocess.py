"""Image loading and per-model-family input normalization.

Every model sees the same pipeline: decode to RGB, bilinear resize straight
to the square input size (tiles are already square, so no center-crop), scale
to [0, 1], then apply the family's mean/std.  Three families cover the zoo:

  imagenet   mean (0.485, 0.456, 0.406), std (0.229, 0.224, 0.225)
  inception  mean 0.5, std 0.5 (inputs in [-1, 1])
  unit       no shift or scale beyond /255
"""

from __future__ import annotations

import numpy as np
from PIL import Image

FAMILIES = {
    "imagenet": ((0.485, 0.456, 0.406), (0.229, 0.224, 0.225)),
    "inception": ((0.5, 0.5, 0.5), (0.5, 0.5, 0.5)),
    "unit": ((0.0, 0.0, 0.0), (1.0, 1.0, 1.0)),
}


def family_description(family: str, size: int) -> str:
    """Human-readable preprocessing summary for the manifest."""
    mean, std = FAMILIES[family]
    return (
        f"RGB, bilinear resize to {size}x{size}, scale 1/255, "
        f"normalize mean={mean} std={std}"
    )


def load_image(path, size: int, family: str) -> np.ndarray:
    """Decode one file to a normalized float32 CHW array."""
    mean, std = FAMILIES[family]
    with Image.open(path) as img:
        rgb = img.convert("RGB").resize((size, size), Image.BILINEAR)
    x = np.asarray(rgb, dtype=np.float32) / 255.0
    x = (x - np.asarray(mean, dtype=np.float32)) / np.asarray(std, dtype=np.float32)
    return np.ascontiguousarray(x.transpose(2, 0, 1))


def load_batch(paths, size: int, family: str) -> np.ndarray:
    """Stack several files into an (N, 3, size, size) float32 batch."""
    return np.stack([load_image(p, size, family) for p in paths])
