"""Confusion matrices, the seven classification metrics, the stratified
cross-validation driver, and report rendering.

Fold results are pooled: confusion counts are summed over folds (micro
aggregation) and the metrics are computed once from the pooled counts.  The
rendered report states this so the aggregation choice is auditable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .classifiers import (
    KNN, SVM, ClassifierSpec, SvmModel, predict, standardize, train,
)
from .errors import ShapeError, StratificationError
from .ingestion import NORMAL, FoldPlan
from .rng import derive_seed

METRIC_NAMES = ("a", "p", "r", "s", "f1", "mcc", "bacc")


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        return ConfusionMatrix(
            tp=self.tp + other.tp, fp=self.fp + other.fp,
            fn=self.fn + other.fn, tn=self.tn + other.tn,
        )


@dataclass(frozen=True)
class MetricsReport:
    a: float
    p: float
    r: float
    s: float
    f1: float
    mcc: float
    bacc: float

    def as_tuple(self) -> tuple:
        return (self.a, self.p, self.r, self.s, self.f1, self.mcc, self.bacc)


@dataclass(frozen=True)
class CvResult:
    classifier: str
    descriptor: str
    folds: tuple                 # per-fold ConfusionMatrix
    pooled: ConfusionMatrix
    metrics: MetricsReport
    seed: int
    notes: tuple = ()


def confusion(y_true, y_pred, positive=NORMAL) -> ConfusionMatrix:
    """Count TP/FP/FN/TN with the given positive class."""
    y_true = np.asarray(y_true, dtype=object)
    y_pred = np.asarray(y_pred, dtype=object)
    if y_true.shape != y_pred.shape or y_true.size == 0:
        raise ShapeError("y_true and y_pred must be equal-length and non-empty")
    tp = int(np.sum((y_true == positive) & (y_pred == positive)))
    fn = int(np.sum((y_true == positive) & (y_pred != positive)))
    fp = int(np.sum((y_true != positive) & (y_pred == positive)))
    tn = int(np.sum((y_true != positive) & (y_pred != positive)))
    return ConfusionMatrix(tp=tp, fp=fp, fn=fn, tn=tn)


def compute_metrics(cm: ConfusionMatrix) -> MetricsReport:
    """Accuracy, precision, recall, specificity, F1, MCC, balanced accuracy.

    Zero-denominator conventions: P = 0 if tp+fp = 0; R = 0 if tp+fn = 0;
    S = 0 if tn+fp = 0; F1 = 0 if P+R = 0; MCC = 0 if any of its four
    denominator factors is 0.  All outputs are finite.
    """
    tp, fp, fn, tn = cm.tp, cm.fp, cm.fn, cm.tn
    total = cm.total
    if total == 0:
        raise ValueError("empty confusion matrix")
    a = (tp + tn) / total
    p = tp / (tp + fp) if tp + fp > 0 else 0.0
    r = tp / (tp + fn) if tp + fn > 0 else 0.0
    s = tn / (tn + fp) if tn + fp > 0 else 0.0
    f1 = 2 * p * r / (p + r) if p + r > 0 else 0.0
    factors = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)
    mcc = (tp * tn - fp * fn) / math.sqrt(factors) if factors > 0 else 0.0
    bacc = (r + s) / 2.0
    return MetricsReport(a=a, p=p, r=r, s=s, f1=f1, mcc=mcc, bacc=bacc)


def cross_validate(X, y, spec: ClassifierSpec, plan: FoldPlan,
                   positive=NORMAL, descriptor: str = "",
                   threads: int = 1) -> CvResult:
    """Train on k-1 folds, test on the held-out fold, pool the confusions.

    Standardization (train-fold statistics only) is applied for kNN and SVM;
    trees split scale-free and train on raw features.  Fold i trains with
    the spec seed replaced by derive_seed(seed, "cv/fold/i") so folds draw
    independent randomness while the whole run stays a function of one seed.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=object)
    if X.shape[0] != y.shape[0] or X.shape[0] != plan.assignment.shape[0]:
        raise ShapeError("features, labels, and fold plan must align")
    notes = []

    def run_fold(i: int):
        tr = plan.train_indices(i)
        te = plan.test_indices(i)
        if len(set(y[tr])) < 2:
            raise StratificationError(f"fold {i}: training split has one class")
        x_tr, x_te = X[tr], X[te]
        if spec.variant in (KNN, SVM):
            x_tr, x_te, _ = standardize(x_tr, x_te)
        fold_spec = replace(spec, seed=derive_seed(spec.seed, f"cv/fold/{i}"))
        model = train(x_tr, y[tr], fold_spec, threads=threads)
        if isinstance(model, SvmModel) and not model.converged:
            notes.append(f"fold {i}: SMO stopped before KKT tolerance")
        return confusion(y[te], predict(model, x_te), positive=positive)

    folds = tuple(run_fold(i) for i in range(plan.k))
    pooled = folds[0]
    for cm in folds[1:]:
        pooled = pooled + cm
    return CvResult(
        classifier=spec.variant,
        descriptor=descriptor,
        folds=folds,
        pooled=pooled,
        metrics=compute_metrics(pooled),
        seed=spec.seed,
        notes=tuple(notes),
    )


def _pct(v: float) -> str:
    return f"{100.0 * v:.2f}"


def render_table(results) -> tuple:
    """(markdown, csv) report texts for a list of CvResult.

    Markdown: one table per classifier, columns Desc|A|P|R|S|F1|MCC|BACC as
    percentages with two decimals, rows sorted by descriptor.  CSV: raw
    fractions, header classifier,descriptor,a,p,r,s,f1,mcc,bacc,seed.
    """
    if not results:
        raise ValueError("no results to render")
    by_clf = {}
    for res in results:
        by_clf.setdefault(res.classifier, []).append(res)

    md = ["# Cross-validation report", "",
          "Aggregation: pooled (micro) confusion counts over folds.", ""]
    for clf in sorted(by_clf):
        md.append(f"## {clf}")
        md.append("")
        md.append("| Desc | A | P | R | S | F1 | MCC | BACC |")
        md.append("| --- | --- | --- | --- | --- | --- | --- | --- |")
        for res in sorted(by_clf[clf], key=lambda r: r.descriptor):
            m = res.metrics
            cells = " | ".join(_pct(v) for v in m.as_tuple())
            md.append(f"| {res.descriptor} | {cells} |")
        md.append("")
        for res in sorted(by_clf[clf], key=lambda r: r.descriptor):
            for note in res.notes:
                md.append(f"- note ({res.descriptor}): {note}")
        if md[-1] != "":
            md.append("")

    csv = ["classifier,descriptor,a,p,r,s,f1,mcc,bacc,seed"]
    for res in sorted(results, key=lambda r: (r.classifier, r.descriptor)):
        vals = ",".join(repr(v) for v in res.metrics.as_tuple())
        csv.append(f"{res.classifier},{res.descriptor},{vals},{res.seed}")
    return "\n".join(md).rstrip("\n") + "\n", "\n".join(csv) + "\n"
