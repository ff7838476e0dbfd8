"""Canonical feature-CSV and manifest serialization.

The CSV contract (shared with the downstream evaluation package): UTF-8, LF
line endings, header ``sample_id,label,f000,...`` with zero-padded feature
column names (pad width max(3, digits of dim-1)), labels lowercase
``normal``/``abnormal``, values formatted with at most 9 significant digits,
rows sorted ascending by sample_id, exactly one final LF.  Nine significant
digits round-trip float32 activations exactly.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from .errors import OutputError


def feature_column_names(dim: int) -> list:
    width = max(3, len(str(dim - 1)))
    return [f"f{i:0{width}d}" for i in range(dim)]


def render_feature_csv(ids, labels, matrix) -> bytes:
    """Serialize rows (sorted by id) to the canonical byte string."""
    matrix = np.asarray(matrix, dtype=np.float64)
    order = sorted(range(len(ids)), key=lambda i: ids[i])
    lines = ["sample_id,label," + ",".join(feature_column_names(matrix.shape[1]))]
    for i in order:
        vals = ",".join(f"{v:.9g}" for v in matrix[i])
        lines.append(f"{ids[i]},{labels[i]},{vals}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def render_manifest(entries: dict) -> bytes:
    return (json.dumps(entries, indent=2, sort_keys=True) + "\n").encode("utf-8")


def write_atomic(path, payload: bytes) -> None:
    """Write via a sibling temp file and rename, so readers never see a
    half-written file and failed runs leave no partial output."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    try:
        tmp.write_bytes(payload)
        os.replace(tmp, path)
    except OSError as exc:
        try:
            tmp.unlink()
        except OSError:
            pass
        raise OutputError(f"cannot write {path}: {exc}") from exc
