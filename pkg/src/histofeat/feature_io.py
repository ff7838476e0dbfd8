"""Feature-table transport: the canonical CSV format, concatenation of
feature families, and alignment against a dataset.

Canonical CSV contract (bit-exact): UTF-8, LF line endings, header
``sample_id,label,f000,...`` with zero-padded feature column names, labels
lowercase ``normal``/``abnormal``, values with at most 9 significant digits
and ``.`` as the decimal separator, rows sorted ascending by sample_id, and
exactly one final LF.  The same file written twice is byte-identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import AlignmentError, ConfigError, FeatureFormatError
from .ingestion import LABELS, Dataset


@dataclass(frozen=True)
class FeatureTable:
    """Rows of named feature values keyed by sample id, sorted by id."""

    descriptor: str
    ids: tuple
    labels: tuple
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != len(self.ids) or len(self.labels) != len(self.ids):
            raise FeatureFormatError("ids, labels, and matrix rows must align")
        if m.shape[1] == 0:
            raise FeatureFormatError("feature table needs at least one column")
        if not np.all(np.isfinite(m)):
            raise FeatureFormatError("feature values must be finite")
        if len(set(self.ids)) != len(self.ids):
            raise FeatureFormatError("duplicate sample ids")
        order = np.argsort(np.array(self.ids, dtype=object), kind="stable")
        object.__setattr__(self, "ids", tuple(np.array(self.ids, dtype=object)[order]))
        object.__setattr__(self, "labels", tuple(np.array(self.labels, dtype=object)[order]))
        object.__setattr__(self, "matrix", np.ascontiguousarray(m[order]))

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def row(self, sample_id: str) -> np.ndarray:
        return self.matrix[self.ids.index(sample_id)]


def feature_column_names(dim: int) -> list:
    """f000-style names; pad width grows with dim but is never below 3."""
    width = max(3, len(str(dim - 1)))
    return [f"f{i:0{width}d}" for i in range(dim)]


def _format_value(v: float) -> str:
    return f"{v:.9g}"


def write_feature_csv(table: FeatureTable, path) -> None:
    """Serialize a table in the canonical format (deterministic bytes)."""
    path = Path(path)
    lines = ["sample_id,label," + ",".join(feature_column_names(table.dim))]
    for i, sid in enumerate(table.ids):
        vals = ",".join(_format_value(v) for v in table.matrix[i])
        lines.append(f"{sid},{table.labels[i]},{vals}")
    path.write_bytes(("\n".join(lines) + "\n").encode("utf-8"))


def read_feature_csv(path, descriptor: str = None) -> FeatureTable:
    """Parse and validate a canonical feature CSV.

    Rows may arrive in any order (the table re-sorts), but ragged rows,
    non-finite or unparsable values, unknown labels, malformed headers, and
    duplicate ids are format errors carrying 1-based line numbers.
    """
    path = Path(path)
    text = path.read_bytes().decode("utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FeatureFormatError(f"{path}: empty file")
    header = lines[0].split(",")
    if header[:2] != ["sample_id", "label"] or len(header) < 3:
        raise FeatureFormatError(f"{path}:1: header must be sample_id,label,f...")
    dim = len(header) - 2
    if header[2:] != feature_column_names(dim):
        raise FeatureFormatError(f"{path}:1: malformed feature column names")
    ids, labels = [], []
    matrix = np.empty((len(lines) - 1, dim))
    for ln, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != dim + 2:
            raise FeatureFormatError(
                f"{path}:{ln}: expected {dim + 2} fields, got {len(parts)}"
            )
        if parts[1] not in LABELS:
            raise FeatureFormatError(f"{path}:{ln}: unknown label {parts[1]!r}")
        try:
            row = np.array([float(v) for v in parts[2:]])
        except ValueError as exc:
            raise FeatureFormatError(f"{path}:{ln}: unparsable value") from exc
        if not np.all(np.isfinite(row)):
            raise FeatureFormatError(f"{path}:{ln}: non-finite value")
        ids.append(parts[0])
        labels.append(parts[1])
        matrix[ln - 2] = row
    if len(set(ids)) != len(ids):
        seen, dup = set(), None
        for i in ids:
            if i in seen:
                dup = i
                break
            seen.add(i)
        raise FeatureFormatError(f"{path}: duplicate sample id {dup!r}")
    name = descriptor if descriptor is not None else Path(path).stem
    return FeatureTable(descriptor=name, ids=tuple(ids), labels=tuple(labels),
                        matrix=matrix)


def combine(tables) -> FeatureTable:
    """Horizontal concatenation of id-aligned tables, in argument order."""
    tables = list(tables)
    if len(tables) < 2:
        raise ConfigError("combine needs at least two tables")
    base = tables[0]
    base_ids = set(base.ids)
    for t in tables[1:]:
        other = set(t.ids)
        if other != base_ids:
            missing = sorted(base_ids ^ other)[:10]
            raise AlignmentError(
                f"tables {base.descriptor!r} and {t.descriptor!r} disagree on ids: "
                f"{missing}"
            )
        if t.labels != base.labels:
            raise AlignmentError(
                f"tables {base.descriptor!r} and {t.descriptor!r} disagree on labels"
            )
    matrix = np.hstack([t.matrix for t in tables])
    return FeatureTable(
        descriptor="+".join(t.descriptor for t in tables),
        ids=base.ids,
        labels=base.labels,
        matrix=matrix,
    )


def align_to_dataset(table: FeatureTable, dataset: Dataset):
    """(matrix, labels) in dataset sample order; extra table rows are fine."""
    index = {sid: i for i, sid in enumerate(table.ids)}
    missing = [s.id for s in dataset.samples if s.id not in index]
    if missing:
        raise AlignmentError(
            f"{len(missing)} dataset ids missing from table "
            f"{table.descriptor!r}: {missing[:10]}"
        )
    rows = np.array([index[s.id] for s in dataset.samples])
    labels = np.array([s.label for s in dataset.samples], dtype=object)
    return table.matrix[rows], labels
