"""CLI surface: subcommands, exit codes, error text, module execution."""

import subprocess
import sys

import pytest

from deepexport.cli import main


def test_models_listing(capsys):
    assert main(["models"]) == 0
    out = capsys.readouterr().out
    assert "densenet201" in out and "dim 1920" in out
    assert len(out.strip().splitlines()) == 12


def test_export_happy_path(tiny_dataset, tmp_path, capsys):
    out = tmp_path / "rn18.csv"
    code = main(["export", "--model", "resnet18", "--root", str(tiny_dataset),
                 "--out", str(out), "--random-init"])
    assert code == 0
    assert out.exists() and (tmp_path / "rn18.csv.manifest.json").exists()
    assert "wrote 8 rows x 512 features" in capsys.readouterr().out


def test_rerun_byte_identical(tiny_dataset, tmp_path):
    out = tmp_path / "rn18.csv"
    argv = ["export", "--model", "resnet18", "--root", str(tiny_dataset),
            "--out", str(out), "--random-init", "--batch", "5"]
    assert main(argv) == 0
    first = out.read_bytes()
    assert main(argv) == 0
    assert out.read_bytes() == first


def test_unknown_model_exit_code(tiny_dataset, tmp_path, capsys):
    code = main(["export", "--model", "resnet99", "--root", str(tiny_dataset),
                 "--out", str(tmp_path / "x.csv")])
    assert code == 1
    err = capsys.readouterr().err
    assert "unknown model" in err and "resnet18" in err


def test_missing_root_exit_code(tmp_path, capsys):
    code = main(["export", "--model", "resnet18", "--root",
                 str(tmp_path / "nowhere"), "--out", str(tmp_path / "x.csv"),
                 "--random-init"])
    assert code == 1
    assert "missing class directory" in capsys.readouterr().err


def test_pretrained_default_fails_cleanly_for_local_model(tiny_dataset, tmp_path, capsys):
    code = main(["export", "--model", "xception", "--root", str(tiny_dataset),
                 "--out", str(tmp_path / "x.csv")])
    assert code == 1
    assert "--random-init" in capsys.readouterr().err


def test_module_invocation(tiny_dataset, tmp_path):
    out = tmp_path / "dn19.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "deepexport", "export", "--model", "darknet19",
         "--root", str(tiny_dataset), "--out", str(out), "--random-init"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.exists()


def test_help_names_subcommands():
    proc = subprocess.run([sys.executable, "-m", "deepexport", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "export" in proc.stdout and "models" in proc.stdout
