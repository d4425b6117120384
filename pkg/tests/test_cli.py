from __future__ import annotations

import json

from shaderevo.cli import main
from shaderevo.persistence import serialize_genome

from conftest import make_pool


def _write_genome(tmp_path, name="g.sgraph.json"):
    g = make_pool(seed=21, count=1)[0]
    path = tmp_path / name
    path.write_text(serialize_genome(g))
    return path, g


def test_cli_compile_to_file(tmp_path):
    src, _ = _write_genome(tmp_path)
    out = tmp_path / "bundle.json"
    assert main(["compile", str(src), "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["vertex"].startswith("#version 300 es")
    assert doc["fragment"].startswith("#version 300 es")
    assert isinstance(doc["uniforms"], list)


def test_cli_compile_stdout(tmp_path, capsys):
    src, _ = _write_genome(tmp_path)
    assert main(["compile", str(src)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert "fragment" in doc


def test_cli_eval(tmp_path, capsys):
    src, _ = _write_genome(tmp_path)
    ctx = tmp_path / "ctx.json"
    ctx.write_text(json.dumps({"uv": [0.3, 0.4], "time": 2.0}))
    assert main(["eval", str(src), "--ctx", str(ctx)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc["fragment"]) == {
        "BaseColor", "NormalTS", "Metallic", "Smoothness",
        "Occlusion", "Emission", "Alpha", "AlphaClipThreshold",
    }
    assert set(doc["vertex"]) == {"Position", "Normal", "Tangent"}
    assert len(doc["rgba"]) == 4


def test_cli_check_valid(tmp_path, capsys):
    src, _ = _write_genome(tmp_path)
    assert main(["check", str(src)]) == 0
    assert "ok:" in capsys.readouterr().out


def test_cli_check_invalid(tmp_path, capsys):
    from shaderevo.graph import Genome

    g = Genome.minimal(lit=True)
    g, c = g.add_node("FloatConstant")
    g = g.connect((c, "Out"), ("0", "Metallic"))
    doc = json.loads(serialize_genome(g))
    doc["nodes"][0]["params"]["Value"] = [99.0]  # out of range
    bad = tmp_path / "bad.sgraph.json"
    bad.write_text(json.dumps(doc))
    assert main(["check", str(bad)]) == 1
    assert "violation" in capsys.readouterr().out


def test_cli_missing_file_reports_error(tmp_path, capsys):
    assert main(["check", str(tmp_path / "absent.json")]) == 2
    assert "error:" in capsys.readouterr().err
