"""Dataset enumeration against the shared directory-layout contract.

A dataset root holds two class directories, ``normal`` and ``abnormal``,
each containing PNG/BMP/JPEG tiles.  Sample ids are forward-slash relative
paths (``normal/a.png``) sorted lexicographically.  This mirrors the layout
the downstream feature-evaluation package scans, so the emitted CSV rows
join against its sample ids exactly; the two packages share only this
contract, not code.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import DatasetError

LABELS = ("normal", "abnormal")

_IMAGE_EXTS = {".png", ".bmp", ".jpg", ".jpeg"}


@dataclass(frozen=True)
class SampleFile:
    id: str
    label: str
    path: Path


def scan_dataset(root) -> list:
    """List `<root>/{normal,abnormal}/*` image files as sorted SampleFiles."""
    root = Path(root)
    out = []
    for label in LABELS:
        class_dir = root / label
        if not class_dir.is_dir():
            raise DatasetError(f"missing class directory: {class_dir}")
        files = [
            p for p in class_dir.iterdir()
            if p.is_file() and p.suffix.lower() in _IMAGE_EXTS
        ]
        if not files:
            raise DatasetError(f"no images under {class_dir}")
        for p in files:
            out.append(SampleFile(id=f"{label}/{p.name}", label=label, path=p))
    out.sort(key=lambda s: s.id)
    return out
