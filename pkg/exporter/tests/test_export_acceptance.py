"""Release gate for the exporter.

One test per shipping criterion, each printing a PASS line with its margin:
the three flagship models emit their published widths, every CSV passes the
consuming package's own reader validation, and the row ids join the
consumer's dataset enumeration with zero misses.  Weights are seeded random
here (activation values are irrelevant to the contract; widths, format, and
ids are what is checked), so the gate runs without any downloads.
"""

import time

import pytest

histofeat = pytest.importorskip("histofeat")

from deepexport import export_deep_features, get_spec

FLAGSHIP = [("densenet201", 1920), ("efficientnetb0", 1280), ("vgg19", 4096)]


def test_flagship_dims_and_primary_side_join(tiny_dataset, tmp_path):
    t0 = time.time()
    dataset = histofeat.load_dataset(tiny_dataset)
    for name, want_dim in FLAGSHIP:
        spec = get_spec(name)
        assert spec.dim == want_dim
        out = tmp_path / f"{name}.csv"
        rows = export_deep_features(spec, tiny_dataset, out, init="random", seed=0)
        assert rows == len(dataset.samples)

        # the consumer's reader enforces the format contract
        table = histofeat.read_feature_csv(out)
        assert table.dim == want_dim

        # id join: every dataset sample must resolve, in dataset order
        matrix, labels = histofeat.align_to_dataset(table, dataset)
        assert matrix.shape == (len(dataset.samples), want_dim)
        assert list(labels) == list(dataset.labels)
        missing = set(dataset.ids) - set(table.ids)
        assert missing == set()
        print(f"PASS acceptance: {name} dim {want_dim}, reader ok, "
              f"join misses 0/{len(dataset.ids)}")
    print(f"PASS acceptance: exporter gate in {time.time() - t0:.1f}s")
