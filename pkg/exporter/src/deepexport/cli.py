"""Command-line entry point.

    deepexport export --model densenet201 --root DATA --out dn201.csv
    deepexport models

Exit code 0 means the requested work completed; expected failures print one
``deepexport: error:`` line and return 1.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ExportError
from .export import export_deep_features
from .registry import MODELS, PRETRAINED, RANDOM, get_spec


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deepexport",
        description="Export CNN pooling/penultimate-layer activations as "
                    "canonical feature CSVs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("models", help="list the known models and emitted widths")
    exp = sub.add_parser("export", help="run one model over a dataset")
    exp.add_argument("--model", required=True, help="model name (see `models`)")
    exp.add_argument("--root", required=True, help="dataset root with normal/ and abnormal/")
    exp.add_argument("--out", required=True, help="output CSV path")
    exp.add_argument("--batch", type=int, default=16, help="inference batch size")
    exp.add_argument("--random-init", action="store_true",
                     help="seeded random weights instead of pretrained ones")
    exp.add_argument("--seed", type=int, default=0,
                     help="weight seed for --random-init (default 0)")
    exp.add_argument("--weights", default=None, metavar="FILE",
                     help="load a local state-dict file instead of downloading")
    return parser


def _cmd_models() -> int:
    width = max(len(n) for n in MODELS)
    for spec in MODELS.values():
        print(f"{spec.name:<{width}}  {spec.input_size:>3}px  dim {spec.dim:>4}  "
              f"{spec.layer}")
    return 0


def _cmd_export(args) -> int:
    spec = get_spec(args.model)
    init = RANDOM if args.random_init else PRETRAINED
    rows = export_deep_features(
        spec, args.root, args.out, batch_size=args.batch, init=init,
        seed=args.seed, weights_path=args.weights,
    )
    print(f"wrote {rows} rows x {spec.dim} features to {args.out} "
          f"({spec.display}, {spec.layer})")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "models":
            return _cmd_models()
        return _cmd_export(args)
    except ExportError as exc:
        print(f"deepexport: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
