"""End-to-end export: dataset -> batched inference -> CSV + manifest."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import torch

from .csvout import render_feature_csv, render_manifest, write_atomic
from .dataset import scan_dataset
from .errors import DimMismatchError, ExportError
from .preprocess import family_description, load_batch
from .registry import PRETRAINED, ModelSpec, build_model, forward_features


def _weights_label(init: str, seed: int, weights_path) -> str:
    if weights_path is not None:
        return f"file:{weights_path}"
    if init == PRETRAINED:
        return "imagenet-pretrained"
    return f"random-init(seed={seed})"


def export_deep_features(spec: ModelSpec, root, out_csv, batch_size: int = 16,
                         init: str = PRETRAINED, seed: int = 0,
                         weights_path=None) -> int:
    """Write one model's features for every dataset image; returns row count.

    The output CSV follows the canonical feature format, and a sibling
    ``<out_csv>.manifest.json`` records the model, the concrete layer, the
    emitted width, and the preprocessing, so every vector in the CSV is
    auditable.  Failures leave neither file behind.
    """
    if batch_size < 1:
        raise ExportError(f"batch size must be >= 1, got {batch_size}")
    samples = scan_dataset(root)
    model = build_model(spec.name, init=init, seed=seed, weights_path=weights_path)
    chunks = []
    with torch.inference_mode():
        for start in range(0, len(samples), batch_size):
            batch = samples[start:start + batch_size]
            x = torch.from_numpy(
                load_batch([s.path for s in batch], spec.input_size, spec.family)
            )
            feats = forward_features(spec.name, model, x)
            if feats.ndim != 2 or feats.shape[1] != spec.dim:
                raise DimMismatchError(
                    f"{spec.display} emitted shape {tuple(feats.shape)}, "
                    f"expected (N, {spec.dim})"
                )
            chunks.append(feats.numpy().astype(np.float64))
    matrix = np.vstack(chunks)
    ids = [s.id for s in samples]
    labels = [s.label for s in samples]
    manifest = {
        "model": spec.display,
        "name": spec.name,
        "layer": spec.layer,
        "dim": spec.dim,
        "input_size": spec.input_size,
        "preprocessing": family_description(spec.family, spec.input_size),
        "weights": _weights_label(init, seed, weights_path),
        "rows": len(ids),
    }
    if spec.note is not None:
        manifest["cited_dim"] = spec.cited_dim
        manifest["note"] = spec.note
    out_csv = Path(out_csv)
    write_atomic(out_csv, render_feature_csv(ids, labels, matrix))
    try:
        write_atomic(Path(str(out_csv) + ".manifest.json"), render_manifest(manifest))
    except ExportError:
        out_csv.unlink(missing_ok=True)
        raise
    return len(ids)
