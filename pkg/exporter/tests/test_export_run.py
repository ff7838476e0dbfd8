"""export_deep_features end to end: files, determinism, enforcement."""

import json

import pytest

import deepexport.export as export_mod
from deepexport import export_deep_features, get_spec
from deepexport.errors import DimMismatchError, ExportError


def _export(spec, root, out, **kw):
    kw.setdefault("init", "random")
    kw.setdefault("seed", 0)
    return export_deep_features(spec, root, out, **kw)


def test_writes_csv_and_manifest(tiny_dataset, tmp_path):
    spec = get_spec("resnet18")
    out = tmp_path / "rn18.csv"
    rows = _export(spec, tiny_dataset, out)
    assert rows == 8
    lines = out.read_bytes().decode("utf-8").split("\n")
    assert lines[-1] == "" and len(lines) == 10
    header = lines[0].split(",")
    assert header[:2] == ["sample_id", "label"] and len(header) == 2 + 512
    manifest = json.loads((tmp_path / "rn18.csv.manifest.json").read_text())
    assert manifest["model"] == "ResNet-18"
    assert manifest["dim"] == 512
    assert manifest["layer"].startswith("avgpool")
    assert manifest["rows"] == 8
    assert "resize to 224x224" in manifest["preprocessing"]
    assert manifest["weights"] == "random-init(seed=0)"


def test_rows_follow_dataset_ids(tiny_dataset, tmp_path):
    spec = get_spec("resnet18")
    out = tmp_path / "rn18.csv"
    _export(spec, tiny_dataset, out)
    body = out.read_bytes().decode("utf-8").splitlines()[1:]
    ids = [ln.split(",")[0] for ln in body]
    labels = {ln.split(",")[0]: ln.split(",")[1] for ln in body}
    assert ids == sorted(ids)
    assert ids[0].startswith("abnormal/") and ids[-1].startswith("normal/")
    assert all(labels[i] == i.split("/")[0] for i in ids)


def test_two_runs_byte_identical(tiny_dataset, tmp_path):
    spec = get_spec("resnet18")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    _export(spec, tiny_dataset, a)
    _export(spec, tiny_dataset, b)
    assert a.read_bytes() == b.read_bytes()


def test_batch_size_invariant_bytes(tiny_dataset, tmp_path):
    spec = get_spec("darknet19")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    _export(spec, tiny_dataset, a, batch_size=3)
    _export(spec, tiny_dataset, b, batch_size=8)
    assert a.read_bytes() == b.read_bytes()


def test_seed_changes_random_features(tiny_dataset, tmp_path):
    spec = get_spec("resnet18")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    _export(spec, tiny_dataset, a, seed=0)
    _export(spec, tiny_dataset, b, seed=1)
    assert a.read_bytes() != b.read_bytes()


def test_bad_batch_size_is_error(tiny_dataset, tmp_path):
    with pytest.raises(ExportError, match="batch size"):
        _export(get_spec("resnet18"), tiny_dataset, tmp_path / "x.csv", batch_size=0)


def test_dim_mismatch_hard_failure(tiny_dataset, tmp_path, monkeypatch):
    spec = get_spec("resnet18")
    out = tmp_path / "x.csv"

    def truncated(name, model, x):
        import torch

        return torch.zeros(x.shape[0], 500)

    monkeypatch.setattr(export_mod, "forward_features", truncated)
    with pytest.raises(DimMismatchError, match="expected"):
        _export(spec, tiny_dataset, out)
    assert not out.exists()


def test_wide_pool_manifest_note(tiny_dataset, tmp_path):
    spec = get_spec("resnet50")
    out = tmp_path / "rn50.csv"
    _export(spec, tiny_dataset, out)
    manifest = json.loads((tmp_path / "rn50.csv.manifest.json").read_text())
    assert manifest["dim"] == 2048
    assert manifest["cited_dim"] == 1024
    assert "2048" in manifest["note"]


def test_pretrained_unavailable_message(tiny_dataset, tmp_path):
    with pytest.raises(ExportError, match="--random-init"):
        export_deep_features(get_spec("darknet53"), tiny_dataset,
                             tmp_path / "x.csv", init="pretrained")
    assert not (tmp_path / "x.csv").exists()
