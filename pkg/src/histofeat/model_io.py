"""Binary serialization of trained models.

Container layout (all integers little-endian):

    magic   4 bytes  b"HFM1"
    version u16      currently 1
    kind    u8       1 = tree, 2 = forest, 3 = knn, 4 = svm
    payload          kind-specific, built from the primitives below

Primitives: str = u32 byte length + UTF-8 bytes; f64 array = u8 ndim + u32
per dimension + raw little-endian float64 data; string list = u32 count +
strings.  Tree nodes are written pre-order: u8 leaf flag, then either
(label str, u32 class count, u64 per-class counts) for a leaf or
(u32 feature, f64 threshold, left subtree, right subtree).
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .classifiers import ForestModel, KnnModel, SvmModel, TreeModel, TreeNode
from .errors import ConfigError

MAGIC = b"HFM1"
VERSION = 1
_KINDS = {TreeModel: 1, ForestModel: 2, KnnModel: 3, SvmModel: 4}


class _Writer:
    def __init__(self):
        self.parts = []

    def u8(self, v): self.parts.append(struct.pack("<B", v))
    def u16(self, v): self.parts.append(struct.pack("<H", v))
    def u32(self, v): self.parts.append(struct.pack("<I", v))
    def u64(self, v): self.parts.append(struct.pack("<Q", v))
    def f64(self, v): self.parts.append(struct.pack("<d", v))

    def string(self, s: str):
        raw = s.encode("utf-8")
        self.u32(len(raw))
        self.parts.append(raw)

    def strings(self, items):
        self.u32(len(items))
        for s in items:
            self.string(str(s))

    def array(self, a: np.ndarray):
        a = np.asarray(a, dtype="<f8")
        self.u8(a.ndim)
        for d in a.shape:
            self.u32(d)
        self.parts.append(a.tobytes())

    def bytes(self) -> bytes:
        return b"".join(self.parts)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def _take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise ConfigError("truncated model file")
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def u8(self): return struct.unpack("<B", self._take(1))[0]
    def u16(self): return struct.unpack("<H", self._take(2))[0]
    def u32(self): return struct.unpack("<I", self._take(4))[0]
    def u64(self): return struct.unpack("<Q", self._take(8))[0]
    def f64(self): return struct.unpack("<d", self._take(8))[0]

    def string(self) -> str:
        return self._take(self.u32()).decode("utf-8")

    def strings(self) -> tuple:
        return tuple(self.string() for _ in range(self.u32()))

    def array(self) -> np.ndarray:
        ndim = self.u8()
        shape = tuple(self.u32() for _ in range(ndim))
        count = int(np.prod(shape)) if shape else 1
        return np.frombuffer(self._take(8 * count), dtype="<f8").reshape(shape).copy()


def _write_node(w: _Writer, node: TreeNode):
    w.u8(1 if node.is_leaf else 0)
    if node.is_leaf:
        w.string(str(node.label))
        counts = node.counts or ()
        w.u32(len(counts))
        for c in counts:
            w.u64(c)
    else:
        w.u32(node.feature)
        w.f64(node.threshold)
        _write_node(w, node.left)
        _write_node(w, node.right)


def _read_node(r: _Reader) -> TreeNode:
    if r.u8() == 1:
        label = r.string()
        counts = tuple(r.u64() for _ in range(r.u32()))
        return TreeNode(label=label, counts=counts or None)
    feature = r.u32()
    threshold = r.f64()
    left = _read_node(r)
    right = _read_node(r)
    return TreeNode(feature=feature, threshold=threshold, left=left, right=right)


def _write_tree(w: _Writer, model: TreeModel):
    w.u32(model.n_features)
    w.strings(model.classes)
    _write_node(w, model.root)


def _read_tree(r: _Reader) -> TreeModel:
    n_features = r.u32()
    classes = r.strings()
    return TreeModel(root=_read_node(r), n_features=n_features, classes=classes)


def save_model(model, path) -> None:
    """Write any trained model to the HFM1 container."""
    kind = _KINDS.get(type(model))
    if kind is None:
        raise ConfigError(f"cannot serialize {type(model).__name__}")
    w = _Writer()
    w.parts.append(MAGIC)
    w.u16(VERSION)
    w.u8(kind)
    if kind == 1:
        _write_tree(w, model)
    elif kind == 2:
        w.u32(model.n_features)
        w.strings(model.classes)
        w.u32(len(model.trees))
        for tree in model.trees:
            _write_tree(w, tree)
    elif kind == 3:
        w.u32(model.k)
        w.array(model.X)
        w.strings(model.y)
    else:
        w.array(model.support_x)
        w.array(model.coef)
        w.f64(model.b)
        w.f64(model.gamma)
        w.u8(1 if model.converged else 0)
        w.u32(model.n_features)
        w.string(str(model.label_pos))
        w.string(str(model.label_neg))
    Path(path).write_bytes(w.bytes())


def load_model(path):
    """Read a model back; inverse of save_model for string-labeled models."""
    r = _Reader(Path(path).read_bytes())
    if r._take(4) != MAGIC:
        raise ConfigError(f"{path}: not an HFM1 model file")
    version = r.u16()
    if version != VERSION:
        raise ConfigError(f"{path}: unsupported version {version}")
    kind = r.u8()
    if kind == 1:
        return _read_tree(r)
    if kind == 2:
        n_features = r.u32()
        classes = r.strings()
        trees = tuple(_read_tree(r) for _ in range(r.u32()))
        return ForestModel(trees=trees, classes=classes, n_features=n_features)
    if kind == 3:
        k = r.u32()
        X = r.array()
        y = np.array(r.strings(), dtype=object)
        return KnnModel(X=X, y=y, k=k)
    if kind == 4:
        support_x = r.array()
        coef = r.array()
        b = r.f64()
        gamma = r.f64()
        converged = r.u8() == 1
        n_features = r.u32()
        label_pos = r.string()
        label_neg = r.string()
        return SvmModel(
            support_x=support_x, coef=coef, b=b, gamma=gamma,
            converged=converged, n_features=n_features,
            label_pos=label_pos, label_neg=label_neg,
        )
    raise ConfigError(f"{path}: unknown model kind {kind}")
