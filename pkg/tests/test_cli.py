import json

import pytest

from steenext.cli import main


@pytest.fixture
def ckdir(tmp_path):
    assert main(["resolve", "--algebra", "A2", "--max-stem", "20", "--max-f", "6",
                 "--checkpoint", str(tmp_path)]) == 0
    return tmp_path


def test_resolve_writes_checkpoint(ckdir):
    assert (ckdir / "A2.ckpt").exists()


def test_ext_and_product(ckdir, capsys):
    assert main(["ext", "--algebra", "A2", "--checkpoint", str(ckdir), "--s", "8", "--f", "3"]) == 0
    out = capsys.readouterr().out
    assert "Ext_A2(8,3,5) = 1" in out
    assert main(["product", "--algebra", "A2", "--checkpoint", str(ckdir), "h1", "h1^3"]) == 0
    assert "h1^4" in capsys.readouterr().out


def test_massey_command(ckdir, capsys):
    assert main(["massey", "--algebra", "A2", "--checkpoint", str(ckdir), "h1", "h0", "h1"]) == 0
    assert "h0 h2" in capsys.readouterr().out


def test_region_error_is_reported(ckdir, capsys):
    code = main(["product", "--algebra", "A2", "--checkpoint", str(ckdir), "g", "g", "g"])
    assert code == 2
    err = capsys.readouterr().err
    assert "steenext resolve" in err


def test_corrupted_checkpoint_exits_nonzero(ckdir, capsys):
    p = ckdir / "A2.ckpt"
    p.write_bytes(p.read_bytes()[:-50])
    assert main(["ext", "--algebra", "A2", "--checkpoint", str(ckdir), "--s", "8", "--f", "3"]) == 2
    assert "checkpoint" in capsys.readouterr().err


def test_chart_formats(ckdir, tmp_path, capsys):
    svg = tmp_path / "c.svg"
    assert main(["chart", "--algebra", "A2", "--checkpoint", str(ckdir), "--format", "svg",
                 "-o", str(svg)]) == 0
    assert svg.read_text().startswith("<svg")
    assert main(["chart", "--algebra", "A2", "--checkpoint", str(ckdir), "--format", "tsv"]) == 0
    assert capsys.readouterr().out.startswith("# steenext ext chart v1")


def test_config_file(ckdir, tmp_path, capsys):
    cfg = tmp_path / "job.json"
    cfg.write_text(json.dumps({"algebra": "A2", "checkpoint": str(ckdir)}))
    assert main(["massey", "--config", str(cfg), "h0", "h1", "h0"]) == 0
    assert "tau h1^2" in capsys.readouterr().out


def test_verify_quick_subset(capsys):
    assert main(["verify", "--suite", "quick", "--only", "c1.tau3_primitive"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_mahowald_command(tmp_path, capsys):
    args = ["mahowald", "h1", "--check-restriction", "--checkpoint", str(tmp_path)]
    assert main(args) == 2
    assert "steenext resolve" in capsys.readouterr().err
    assert main(args + ["--resolve-missing"]) == 0
    out = capsys.readouterr().out
    assert "restriction_formula: pass" in out and "h1^4 v3^3" in out
