"""From-scratch shallow learners: CART decision tree, random forest,
k-nearest neighbors, and an RBF-kernel SVM trained by sequential minimal
optimization.

All tie-breaking is fixed so results are identical across platforms and
thread counts: equal-gain splits take the lowest feature index and lowest
threshold, distance ties take the lower training-row index, and vote ties
resolve to the "normal" label (lexicographically first label if "normal" is
absent).  Randomness comes only from SplitMix64 streams derived from the
spec seed.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, ShapeError
from .ingestion import NORMAL
from .rng import SplitMix64, derive_seed

DT = "dt"
RF = "rf"
KNN = "knn"
SVM = "svm"
VARIANTS = (DT, RF, KNN, SVM)


@dataclass(frozen=True)
class ClassifierSpec:
    variant: str
    trees: int = 100
    k: int = 3
    C: float = 1.0
    gamma: float = None
    max_depth: int = None
    min_leaf: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown classifier {self.variant!r}")
        if self.trees < 1:
            raise ConfigError("trees must be >= 1")
        if self.k < 1 or self.k % 2 == 0:
            raise ConfigError("k must be odd and >= 1")
        if self.C <= 0:
            raise ConfigError("C must be > 0")
        if self.gamma is not None and self.gamma <= 0:
            raise ConfigError("gamma must be > 0")
        if self.min_leaf < 1:
            raise ConfigError("min_leaf must be >= 1")


def tie_label(classes) -> object:
    """The label ties resolve to: "normal" when present, else the smallest."""
    return NORMAL if NORMAL in classes else min(classes)


@dataclass(frozen=True)
class Scaler:
    mean: np.ndarray
    std: np.ndarray

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=np.float64) - self.mean) / self.std


def standardize(train: np.ndarray, test: np.ndarray):
    """Column z-scores using training statistics only.

    Population standard deviation; zero-variance columns use std 1 so they
    transform to exactly 0.
    """
    train = np.asarray(train, dtype=np.float64)
    test = np.asarray(test, dtype=np.float64)
    if train.ndim != 2 or train.size == 0:
        raise ShapeError("training matrix must be non-empty and 2-D")
    if test.shape[1] != train.shape[1]:
        raise ShapeError(
            f"width mismatch: train {train.shape[1]}, test {test.shape[1]}"
        )
    mean = train.mean(axis=0)
    std = train.std(axis=0)
    std = np.where(std == 0, 1.0, std)
    scaler = Scaler(mean=mean, std=std)
    return scaler.transform(train), scaler.transform(test), scaler


# ---------------------------------------------------------------------------
# CART decision tree


@dataclass(frozen=True)
class TreeNode:
    feature: int = None
    threshold: float = None
    left: "TreeNode" = None
    right: "TreeNode" = None
    label: object = None
    counts: tuple = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None


@dataclass(frozen=True)
class TreeModel:
    root: TreeNode
    n_features: int
    classes: tuple


def _leaf(counts: np.ndarray, classes) -> TreeNode:
    top = counts.max()
    winners = [classes[i] for i in np.flatnonzero(counts == top)]
    return TreeNode(label=tie_label(winners), counts=tuple(int(c) for c in counts))


def _best_split_on(x: np.ndarray, yi: np.ndarray, n_classes: int, min_leaf: int):
    """Lowest weighted-Gini midpoint cut of one column, or None.

    Returns (weighted_gini, threshold); candidate cuts sit between adjacent
    distinct sorted values with both sides >= min_leaf.  The first minimal
    cut wins, which is the smallest qualifying threshold.
    """
    order = np.argsort(x, kind="stable")
    xs = x[order]
    n = xs.size
    cuts = np.flatnonzero(xs[:-1] < xs[1:])
    if min_leaf > 1:
        cuts = cuts[(cuts + 1 >= min_leaf) & (n - cuts - 1 >= min_leaf)]
    if cuts.size == 0:
        return None
    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), yi[order]] = 1.0
    prefix = np.cumsum(onehot, axis=0)
    total = prefix[-1]
    n_left = (cuts + 1).astype(np.float64)
    n_right = n - n_left
    left = prefix[cuts]
    right = total - left
    gini_left = 1.0 - np.sum((left / n_left[:, None]) ** 2, axis=1)
    gini_right = 1.0 - np.sum((right / n_right[:, None]) ** 2, axis=1)
    weighted = (n_left * gini_left + n_right * gini_right) / n
    b = int(np.argmin(weighted))
    t = cuts[b]
    return float(weighted[b]), float((xs[t] + xs[t + 1]) / 2.0)


def _choose_features(n_features: int, subset_size, rng: SplitMix64) -> np.ndarray:
    if subset_size is None or subset_size >= n_features:
        return np.arange(n_features)
    pool = list(range(n_features))
    for i in range(subset_size):
        j = i + rng.randrange(n_features - i)
        pool[i], pool[j] = pool[j], pool[i]
    return np.array(sorted(pool[:subset_size]))


def train_tree(X, y, spec: ClassifierSpec, feature_subset_size=None,
               rng: SplitMix64 = None) -> TreeModel:
    """Greedy CART: split on the midpoint cut minimizing weighted Gini.

    Stops on pure nodes, min_leaf, max_depth, or when no cut reduces the
    parent impurity.  With feature_subset_size set, each node draws a fresh
    uniform feature subset from `rng` (evaluated in ascending index order).
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=object)
    if X.ndim != 2 or X.shape[0] == 0 or X.shape[0] != y.shape[0]:
        raise ShapeError("X must be 2-D and aligned with y")
    if rng is None:
        rng = SplitMix64(derive_seed(spec.seed, "tree"))
    classes = tuple(sorted(set(y)))
    idx_of = {c: i for i, c in enumerate(classes)}
    yi = np.array([idx_of[v] for v in y], dtype=np.int64)
    n_classes = len(classes)

    def grow(rows: np.ndarray, depth: int) -> TreeNode:
        counts = np.bincount(yi[rows], minlength=n_classes)
        if counts.max() == rows.size:
            return _leaf(counts, classes)
        if spec.max_depth is not None and depth >= spec.max_depth:
            return _leaf(counts, classes)
        parent_gini = 1.0 - float(np.sum((counts / rows.size) ** 2))
        features = _choose_features(X.shape[1], feature_subset_size, rng)
        best = None
        for f in features:
            cand = _best_split_on(X[rows, f], yi[rows], n_classes, spec.min_leaf)
            if cand is not None and (best is None or cand[0] < best[0]):
                best = (cand[0], int(f), cand[1])
        if best is None or best[0] >= parent_gini:
            return _leaf(counts, classes)
        _, f, threshold = best
        go_left = X[rows, f] <= threshold
        return TreeNode(
            feature=f,
            threshold=threshold,
            left=grow(rows[go_left], depth + 1),
            right=grow(rows[~go_left], depth + 1),
        )

    root = grow(np.arange(X.shape[0]), 0)
    return TreeModel(root=root, n_features=X.shape[1], classes=classes)


def _predict_tree_rows(model: TreeModel, X: np.ndarray) -> np.ndarray:
    out = np.empty(X.shape[0], dtype=object)
    for i in range(X.shape[0]):
        node = model.root
        while not node.is_leaf:
            node = node.left if X[i, node.feature] <= node.threshold else node.right
        out[i] = node.label
    return out


# ---------------------------------------------------------------------------
# Random forest


@dataclass(frozen=True)
class ForestModel:
    trees: tuple
    classes: tuple
    n_features: int


def train_forest(X, y, spec: ClassifierSpec, threads: int = 1,
                 bootstrap: bool = True) -> ForestModel:
    """Bootstrap-aggregated CART trees on random feature subsets.

    Tree t draws its bootstrap sample and all node feature subsets from the
    stream seeded with derive_seed(spec.seed, "tree/t"), so the forest is a
    pure function of (X, y, spec) regardless of thread count.  Per-node
    subsets have floor(sqrt(F)) features.  `bootstrap=False` is a test hook
    that trains every tree on the full sample.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=object)
    n = X.shape[0]
    subset = max(1, int(np.sqrt(X.shape[1])))

    def build(t: int) -> TreeModel:
        rng = SplitMix64(derive_seed(spec.seed, f"tree/{t}"))
        if bootstrap:
            rows = rng.bounded_array(n, n)
            xt, yt = X[rows], y[rows]
        else:
            xt, yt = X, y
        return train_tree(xt, yt, spec, feature_subset_size=subset, rng=rng)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            trees = tuple(pool.map(build, range(spec.trees)))
    else:
        trees = tuple(build(t) for t in range(spec.trees))
    classes = tuple(sorted(set(y)))
    return ForestModel(trees=trees, classes=classes, n_features=X.shape[1])


def _majority(votes_by_label: dict) -> object:
    top = max(votes_by_label.values())
    winners = [lab for lab, v in votes_by_label.items() if v == top]
    return tie_label(winners)


def _predict_forest_rows(model: ForestModel, X: np.ndarray) -> np.ndarray:
    per_tree = [_predict_tree_rows(t, X) for t in model.trees]
    out = np.empty(X.shape[0], dtype=object)
    for i in range(X.shape[0]):
        votes = {}
        for preds in per_tree:
            votes[preds[i]] = votes.get(preds[i], 0) + 1
        out[i] = _majority(votes)
    return out


# ---------------------------------------------------------------------------
# k-nearest neighbors


@dataclass(frozen=True)
class KnnModel:
    X: np.ndarray
    y: np.ndarray
    k: int


def knn_predict(train_X, train_y, queries, k: int) -> np.ndarray:
    """Majority label among the k nearest training rows (Euclidean).

    Equal distances rank by training-row index (stable sort); vote ties
    resolve to the normal label.
    """
    train_X = np.asarray(train_X, dtype=np.float64)
    train_y = np.asarray(train_y, dtype=object)
    queries = np.asarray(queries, dtype=np.float64)
    n = train_X.shape[0]
    if k > n:
        raise ConfigError(f"k={k} exceeds training size {n}")
    if queries.shape[1] != train_X.shape[1]:
        raise ShapeError("query width differs from training width")
    out = np.empty(queries.shape[0], dtype=object)
    chunk = max(1, int(4e6 // max(1, n)))
    for lo in range(0, queries.shape[0], chunk):
        q = queries[lo:lo + chunk]
        d2 = np.sum((q[:, None, :] - train_X[None, :, :]) ** 2, axis=2)
        ranked = np.argsort(d2, axis=1, kind="stable")[:, :k]
        for i in range(q.shape[0]):
            votes = {}
            for j in ranked[i]:
                votes[train_y[j]] = votes.get(train_y[j], 0) + 1
            out[lo + i] = _majority(votes)
    return out


# ---------------------------------------------------------------------------
# SVM via sequential minimal optimization


def rbf_kernel(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    """K[i, j] = exp(-gamma * ||A_i - B_j||^2)."""
    aa = np.sum(A * A, axis=1)[:, None]
    bb = np.sum(B * B, axis=1)[None, :]
    d2 = np.maximum(aa + bb - 2.0 * (A @ B.T), 0.0)
    return np.exp(-gamma * d2)


def default_gamma(X: np.ndarray) -> float:
    """1 / (n_features * variance of all matrix entries); 1/n_features if flat."""
    X = np.asarray(X, dtype=np.float64)
    var = float(X.var())
    if var <= 0:
        return 1.0 / X.shape[1]
    return 1.0 / (X.shape[1] * var)


@dataclass(frozen=True)
class SvmModel:
    support_x: np.ndarray
    coef: np.ndarray          # alpha_i * y_i for support vectors
    b: float
    gamma: float
    converged: bool
    n_features: int
    label_pos: object = 1
    label_neg: object = -1

    def decision(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[1] != self.n_features:
            raise ShapeError("query width differs from training width")
        return rbf_kernel(X, self.support_x, self.gamma) @ self.coef + self.b


def train_svm_smo(X, y_sign, C: float = 1.0, gamma: float = None,
                  tol: float = 1e-3, max_passes: int = None,
                  seed: int = 0) -> SvmModel:
    """Soft-margin RBF SVM dual solved by Platt's SMO.

    y_sign holds +1/-1.  The outer loop alternates full sweeps with sweeps
    over non-bound alphas until no pair changes; fallback scans start at a
    seeded SplitMix64 position, so runs are reproducible.  If the sweep cap
    (default 10 n) is hit first, the best iterate is returned with
    converged=False.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y_sign, dtype=np.float64)
    n = X.shape[0]
    if n == 0 or set(np.unique(y)) != {-1.0, 1.0}:
        raise ValueError("training data must contain both classes as +1/-1")
    if gamma is None:
        gamma = default_gamma(X)
    if max_passes is None:
        max_passes = 10 * n
    rng = SplitMix64(derive_seed(seed, "smo"))
    K = rbf_kernel(X, X, gamma)
    alpha = np.zeros(n)
    b = 0.0
    u = np.zeros(n)                      # u_i = sum_j alpha_j y_j K_ij
    eps = 1e-12

    def err(i: int) -> float:
        return u[i] + b - y[i]

    def take_step(i1: int, i2: int) -> bool:
        nonlocal b
        if i1 == i2:
            return False
        a1, a2 = alpha[i1], alpha[i2]
        y1, y2 = y[i1], y[i2]
        e1, e2 = err(i1), err(i2)
        s = y1 * y2
        if s > 0:
            lo, hi = max(0.0, a1 + a2 - C), min(C, a1 + a2)
        else:
            lo, hi = max(0.0, a2 - a1), min(C, C + a2 - a1)
        if lo >= hi:
            return False
        k11, k12, k22 = K[i1, i1], K[i1, i2], K[i2, i2]
        eta = k11 + k22 - 2.0 * k12
        if eta > 0:
            a2_new = a2 + y2 * (e1 - e2) / eta
            a2_new = min(hi, max(lo, a2_new))
        else:
            # Flat direction: evaluate the objective at both clip ends.
            f1 = y1 * (e1 - b) - a1 * k11 - s * a2 * k12
            f2 = y2 * (e2 - b) - s * a1 * k12 - a2 * k22
            l1 = a1 + s * (a2 - lo)
            h1 = a1 + s * (a2 - hi)
            lobj = (l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11
                    + 0.5 * lo * lo * k22 + s * lo * l1 * k12)
            hobj = (h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11
                    + 0.5 * hi * hi * k22 + s * hi * h1 * k12)
            if lobj < hobj - eps:
                a2_new = lo
            elif lobj > hobj + eps:
                a2_new = hi
            else:
                a2_new = a2
        if abs(a2_new - a2) < eps * (a2_new + a2 + eps):
            return False
        a1_new = a1 + s * (a2 - a2_new)
        b1 = b - e1 - y1 * (a1_new - a1) * k11 - y2 * (a2_new - a2) * k12
        b2 = b - e2 - y1 * (a1_new - a1) * k12 - y2 * (a2_new - a2) * k22
        if 0 < a1_new < C:
            b_new = b1
        elif 0 < a2_new < C:
            b_new = b2
        else:
            b_new = (b1 + b2) / 2.0
        u[:] += (a1_new - a1) * y1 * K[:, i1] + (a2_new - a2) * y2 * K[:, i2]
        alpha[i1], alpha[i2] = a1_new, a2_new
        b = b_new
        return True

    def examine(i2: int) -> bool:
        e2 = err(i2)
        r2 = e2 * y[i2]
        if not ((r2 < -tol and alpha[i2] < C) or (r2 > tol and alpha[i2] > 0)):
            return False
        non_bound = np.flatnonzero((alpha > 0) & (alpha < C))
        if non_bound.size > 1:
            errs = np.abs(u[non_bound] + b - y[non_bound] - e2)
            i1 = int(non_bound[int(np.argmax(errs))])
            if take_step(i1, i2):
                return True
        if non_bound.size > 0:
            start = rng.randrange(non_bound.size)
            for off in range(non_bound.size):
                if take_step(int(non_bound[(start + off) % non_bound.size]), i2):
                    return True
        start = rng.randrange(n)
        for off in range(n):
            if take_step((start + off) % n, i2):
                return True
        return False

    examine_all = True
    sweeps = 0
    while sweeps < max_passes:
        num_changed = 0
        targets = range(n) if examine_all else np.flatnonzero((alpha > 0) & (alpha < C))
        for i in targets:
            num_changed += int(examine(int(i)))
        sweeps += 1
        if examine_all:
            if num_changed == 0:
                break
            examine_all = False
        elif num_changed == 0:
            examine_all = True

    # The stepwise threshold is only pinned when some alpha is free; at an
    # all-bound vertex the KKT conditions leave an interval for b, and the
    # last pair's midpoint heuristic can sit outside it.  Recompute b from
    # the final alphas: mean over free points, else the interval midpoint.
    free = (alpha > eps) & (alpha < C - eps)
    if np.any(free):
        b = float(np.mean(y[free] - u[free]))
    else:
        t = y - u
        lows = t[((alpha <= eps) & (y > 0)) | ((alpha >= C - eps) & (y < 0))]
        highs = t[((alpha <= eps) & (y < 0)) | ((alpha >= C - eps) & (y > 0))]
        if lows.size and highs.size:
            b = (float(np.max(lows)) + float(np.min(highs))) / 2.0
        elif lows.size:
            b = float(np.max(lows))
        elif highs.size:
            b = float(np.min(highs))

    r = (u + b - y) * y
    kkt_ok = bool(np.all(
        ((alpha <= eps) & (r >= -tol))
        | ((alpha >= C - eps) & (r <= tol))
        | ((alpha > eps) & (alpha < C - eps) & (np.abs(r) <= tol))
    ))
    sv = alpha > 0
    return SvmModel(
        support_x=X[sv].copy(),
        coef=(alpha * y)[sv].copy(),
        b=float(b),
        gamma=float(gamma),
        converged=kkt_ok,
        n_features=X.shape[1],
    )


# ---------------------------------------------------------------------------
# Facade


def train(X, y, spec: ClassifierSpec, threads: int = 1):
    """Train the learner named by spec.variant on labeled rows."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=object)
    if spec.variant == DT:
        return train_tree(X, y, spec)
    if spec.variant == RF:
        return train_forest(X, y, spec, threads=threads)
    if spec.variant == KNN:
        if spec.k > X.shape[0]:
            raise ConfigError(f"k={spec.k} exceeds training size {X.shape[0]}")
        return KnnModel(X=X.copy(), y=y.copy(), k=spec.k)
    classes = sorted(set(y))
    if len(classes) != 2:
        raise ValueError(f"SVM needs exactly two classes, got {classes}")
    pos = tie_label(classes)
    neg = classes[0] if classes[1] == pos else classes[1]
    y_sign = np.where(y == pos, 1.0, -1.0)
    model = train_svm_smo(
        X, y_sign, C=spec.C, gamma=spec.gamma, seed=spec.seed,
    )
    return replace(model, label_pos=pos, label_neg=neg)


def predict(model, X) -> np.ndarray:
    """Labels for query rows from any trained model; pure dispatch."""
    X = np.asarray(X, dtype=np.float64)
    if isinstance(model, TreeModel):
        if X.shape[1] != model.n_features:
            raise ShapeError("query width differs from training width")
        return _predict_tree_rows(model, X)
    if isinstance(model, ForestModel):
        if X.shape[1] != model.n_features:
            raise ShapeError("query width differs from training width")
        return _predict_forest_rows(model, X)
    if isinstance(model, KnnModel):
        return knn_predict(model.X, model.y, X, model.k)
    if isinstance(model, SvmModel):
        f = model.decision(X)
        # f = 0 goes to label_pos, which tie_label made the normal side.
        out = np.empty(X.shape[0], dtype=object)
        out[f >= 0] = model.label_pos
        out[f < 0] = model.label_neg
        return out
    raise ConfigError(f"unknown model type {type(model).__name__}")
