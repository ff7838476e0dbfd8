"""Command-line interface: extract, evaluate, combine, report.

All randomness flows from --seed; outputs are byte-identical across reruns
and worker-thread counts.  Workers are capped by the HISTOFEAT_THREADS
environment variable.  A --config file holds key=value lines (same names as
the long flags); explicit flags win over the file, the file wins over
defaults.  On failure every output written by the failing command is
removed and the exit code is nonzero.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .classifiers import VARIANTS, ClassifierSpec
from .descriptors import DESCRIPTORS, extract_descriptor
from .errors import AlignmentError, ConfigError, HistofeatError
from .evaluation import ConfusionMatrix, CvResult, MetricsReport, cross_validate, render_table
from .feature_io import (
    FeatureTable, align_to_dataset, combine, read_feature_csv, write_feature_csv,
)
from .ingestion import (
    ABNORMAL, NORMAL, Dataset, Sample, decode_and_gray, load_dataset,
    stratified_folds,
)


def _worker_count(requested) -> int:
    n = int(requested) if requested is not None else (os.cpu_count() or 1)
    cap = os.environ.get("HISTOFEAT_THREADS")
    if cap is not None:
        n = min(n, max(1, int(cap)))
    return max(1, n)


def _read_config(path) -> dict:
    """key=value lines; blank lines and # comments ignored."""
    out = {}
    for ln, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{ln}: expected key=value")
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


def _merge_config(args, keys: dict) -> None:
    """Fill argparse Namespace fields left at None from config file, then defaults."""
    file_vals = _read_config(args.config) if args.config else {}
    for key, (parse, default) in keys.items():
        if getattr(args, key, None) is None:
            if key in file_vals:
                setattr(args, key, parse(file_vals[key]))
            else:
                setattr(args, key, default)


def _parse_desc_list(text: str) -> list:
    names = [d.strip() for d in text.split(",") if d.strip()]
    for name in names:
        if name not in DESCRIPTORS:
            raise ConfigError(
                f"unknown descriptor {name!r}; known: {', '.join(sorted(DESCRIPTORS))}"
            )
    return names


def _parse_clf_list(text: str) -> list:
    names = [c.strip() for c in text.split(",") if c.strip()]
    for name in names:
        if name not in VARIANTS:
            raise ConfigError(f"unknown classifier {name!r}; known: {', '.join(VARIANTS)}")
    return names


class _Outputs:
    """Tracks files written by one command so failures leave nothing behind."""

    def __init__(self):
        self.paths = []

    def write_text(self, path: Path, text: str):
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_bytes(text.encode("utf-8"))
        os.replace(tmp, path)
        self.paths.append(path)

    def write_table(self, table: FeatureTable, path: Path):
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.name + ".tmp")
        write_feature_csv(table, tmp)
        os.replace(tmp, path)
        self.paths.append(path)

    def discard_all(self):
        for p in self.paths:
            try:
                p.unlink()
            except OSError:
                pass


def cmd_extract(args) -> int:
    _merge_config(args, {
        "root": (str, None),
        "desc": (str, ",".join(DESCRIPTORS)),
        "out": (str, "features"),
        "threads": (int, None),
    })
    if args.root is None:
        raise ConfigError("extract needs --root (or root= in the config file)")
    names = _parse_desc_list(args.desc) if isinstance(args.desc, str) else args.desc
    dataset = load_dataset(args.root)
    threads = _worker_count(args.threads)

    def one_sample(sample):
        image = decode_and_gray(Path(args.root) / sample.id)
        row = {}
        for name in names:
            try:
                row[name] = extract_descriptor(name, image)
            except HistofeatError as exc:
                raise type(exc)(f"{sample.id} [{name}]: {exc}") from exc
        return row

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one_sample, dataset.samples))
    else:
        rows = [one_sample(s) for s in dataset.samples]

    out_dir = Path(args.out)
    outputs = _Outputs()
    try:
        for name in names:
            table = FeatureTable(
                descriptor=name,
                ids=tuple(dataset.ids),
                labels=tuple(dataset.labels),
                matrix=np.vstack([r[name] for r in rows]),
            )
            outputs.write_table(table, out_dir / f"{name}.csv")
    except BaseException:
        outputs.discard_all()
        raise
    for name in names:
        print(f"wrote {out_dir / (name + '.csv')}")
    return 0


def cmd_evaluate(args) -> int:
    _merge_config(args, {
        "desc": (str, ""),
        "clf": (str, ",".join(VARIANTS)),
        "seed": (int, 0),
        "folds": (int, 5),
        "positive": (str, NORMAL),
        "out": (str, "features"),
        "threads": (int, None),
    })
    if args.positive not in (NORMAL, ABNORMAL):
        raise ConfigError(f"--positive must be {NORMAL} or {ABNORMAL}")
    names = _parse_desc_list(args.desc) if args.desc else []
    clfs = _parse_clf_list(args.clf) if isinstance(args.clf, str) else args.clf
    out_dir = Path(args.out)

    tables = []
    for name in names:
        path = out_dir / f"{name}.csv"
        if not path.exists():
            raise ConfigError(
                f"missing feature file {path}; run: histofeat extract "
                f"--root <dataset> --desc {name} --out {out_dir}"
            )
        tables.append(read_feature_csv(path, descriptor=name))
    for item in args.deep or []:
        if "=" not in item:
            raise ConfigError(f"--deep expects name=csv, got {item!r}")
        name, _, path = item.partition("=")
        tables.append(read_feature_csv(path, descriptor=name))
    if not tables:
        raise ConfigError("nothing to evaluate: pass --desc and/or --deep")

    reference = tables[0]
    dataset = Dataset(
        root=out_dir,
        samples=tuple(
            Sample(id=sid, label=lab)
            for sid, lab in zip(reference.ids, reference.labels)
        ),
    )
    plan = stratified_folds(dataset, k=args.folds, seed=args.seed)
    threads = _worker_count(args.threads)

    results = []
    for table in tables:
        X, y = align_to_dataset(table, dataset)
        for clf in clfs:
            spec = ClassifierSpec(variant=clf, seed=args.seed)
            results.append(cross_validate(
                X, y, spec, plan,
                positive=args.positive,
                descriptor=table.descriptor,
                threads=threads,
            ))

    md, csv = render_table(results)
    outputs = _Outputs()
    try:
        outputs.write_text(out_dir / "report.md", md)
        outputs.write_text(out_dir / "report.csv", csv)
    except BaseException:
        outputs.discard_all()
        raise
    for res in results:
        m = res.metrics
        print(
            f"{res.classifier:>4} {res.descriptor:<12} "
            f"A={100 * m.a:.2f} F1={100 * m.f1:.2f} MCC={100 * m.mcc:.2f}"
        )
    print(f"wrote {out_dir / 'report.md'} and {out_dir / 'report.csv'}")
    return 0


def cmd_combine(args) -> int:
    if len(args.inputs) < 2:
        raise ConfigError("combine needs at least two input CSVs")
    tables = [read_feature_csv(p) for p in args.inputs]
    combined = combine(tables)
    outputs = _Outputs()
    try:
        outputs.write_table(combined, Path(args.out))
    except BaseException:
        outputs.discard_all()
        raise
    print(f"wrote {args.out} ({combined.dim} feature columns)")
    return 0


def cmd_report(args) -> int:
    """Re-render report.md from an existing report.csv."""
    _merge_config(args, {"out": (str, "features")})
    out_dir = Path(args.out)
    csv_path = out_dir / "report.csv"
    if not csv_path.exists():
        raise ConfigError(f"missing {csv_path}; run: histofeat evaluate")
    lines = csv_path.read_text(encoding="utf-8").splitlines()
    header = "classifier,descriptor,a,p,r,s,f1,mcc,bacc,seed"
    if not lines or lines[0] != header:
        raise ConfigError(f"{csv_path}: unexpected header")
    results = []
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != 10:
            raise ConfigError(f"{csv_path}: malformed row {line!r}")
        metrics = MetricsReport(*[float(v) for v in parts[2:9]])
        results.append(CvResult(
            classifier=parts[0],
            descriptor=parts[1],
            folds=(),
            pooled=ConfusionMatrix(0, 0, 0, 0),
            metrics=metrics,
            seed=int(parts[9]),
        ))
    md, _ = render_table(results)
    outputs = _Outputs()
    try:
        outputs.write_text(out_dir / "report.md", md)
    except BaseException:
        outputs.discard_all()
        raise
    print(f"wrote {out_dir / 'report.md'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="histofeat",
        description="Extract image descriptors and evaluate shallow classifiers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ext = sub.add_parser("extract", help="compute descriptor CSVs for a dataset")
    p_ext.add_argument("--root", help="dataset root with normal/ and abnormal/")
    p_ext.add_argument("--desc", help="comma-separated descriptor names (default: all)")
    p_ext.add_argument("--out", help="output directory (default: features)")
    p_ext.add_argument("--threads", type=int, help="worker threads")
    p_ext.add_argument("--config", help="key=value config file")
    p_ext.set_defaults(fn=cmd_extract)

    p_eval = sub.add_parser("evaluate", help="cross-validate classifiers on feature CSVs")
    p_eval.add_argument("--desc", help="comma-separated descriptor names to load from --out")
    p_eval.add_argument("--deep", action="append", metavar="NAME=CSV",
                        help="extra feature table (repeatable)")
    p_eval.add_argument("--clf", help="comma-separated classifiers (default: dt,rf,knn,svm)")
    p_eval.add_argument("--seed", type=int, help="master seed (default: 0)")
    p_eval.add_argument("--folds", type=int, help="fold count (default: 5)")
    p_eval.add_argument("--positive", help="positive class for metrics (default: normal)")
    p_eval.add_argument("--out", help="directory with feature CSVs; reports land here")
    p_eval.add_argument("--threads", type=int, help="worker threads")
    p_eval.add_argument("--config", help="key=value config file")
    p_eval.set_defaults(fn=cmd_evaluate)

    p_comb = sub.add_parser("combine", help="concatenate feature CSVs column-wise")
    p_comb.add_argument("inputs", nargs="+", help="input CSV paths")
    p_comb.add_argument("--out", required=True, help="output CSV path")
    p_comb.set_defaults(fn=cmd_combine)

    p_rep = sub.add_parser("report", help="re-render report.md from report.csv")
    p_rep.add_argument("--out", help="directory holding report.csv")
    p_rep.add_argument("--config", help="key=value config file")
    p_rep.set_defaults(fn=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if not hasattr(args, "config"):
        args.config = None
    try:
        return args.fn(args)
    except (HistofeatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
