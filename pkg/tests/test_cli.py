import json

import pytest
from click.testing import CliRunner

from corgie.cli import main
from corgie.datasets import movie_like
from corgie.model import serialize_dataset


@pytest.fixture(scope="module")
def tiny_dir(tmp_path_factory):
    path = tmp_path_factory.mktemp("tiny")
    serialize_dataset(movie_like(n_users=60, n_movies=30, n_clusters=3, seed=3), path)
    return path


@pytest.fixture(scope="module")
def focus_file(tmp_path_factory, tiny_dir):
    path = tmp_path_factory.mktemp("focus") / "focal.json"
    path.write_text(json.dumps({"focalGroups": [list(range(8)), list(range(20, 28))]}))
    return path


def test_validate_ok(tiny_dir):
    result = CliRunner().invoke(main, ["validate", str(tiny_dir)])
    assert result.exit_code == 0, result.output
    assert "ok:" in result.output


def test_validate_broken_edge_file(tmp_path):
    src = movie_like(n_users=20, n_movies=10, n_clusters=2, seed=1)
    serialize_dataset(src, tmp_path)
    graph = json.loads((tmp_path / "graph.json").read_text())
    graph["edges"].append([0, 99999])
    (tmp_path / "graph.json").write_text(json.dumps(graph))
    result = CliRunner().invoke(main, ["validate", str(tmp_path)])
    assert result.exit_code != 0
    assert "unknown node id" in result.output


def test_layout_writes_deterministic_json(tiny_dir, focus_file, tmp_path):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    runner = CliRunner()
    for out in (out1, out2):
        result = runner.invoke(
            main,
            ["layout", str(tiny_dir), "--focus", str(focus_file), "--seed", "11", "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
    assert out1.read_bytes() == out2.read_bytes()
    doc = json.loads(out1.read_text())
    assert doc["schema"] == 1
    assert [b["group"] for b in doc["boxes"]][0] == "foc-0"
    assert "timings" not in doc  # wall-clock data would break byte stability


def test_layout_timings_flag(tiny_dir, focus_file, tmp_path):
    out = tmp_path / "t.json"
    result = CliRunner().invoke(
        main,
        ["layout", str(tiny_dir), "--focus", str(focus_file), "--timings", "--out", str(out)],
    )
    assert result.exit_code == 0, result.output
    assert "divide" in result.output
    assert "total" in result.output


def test_bench_row_shape(tiny_dir, focus_file):
    result = CliRunner().invoke(
        main, ["bench", str(tiny_dir), "--focus", str(focus_file), "--json"]
    )
    assert result.exit_code == 0, result.output
    row = json.loads(result.output)
    for key in ("n", "e", "nKhop", "eKhop", "maxBox", "b", "drSeconds", "totalSeconds"):
        assert key in row
    assert row["n"] == 90
    assert row["b"] >= 3
    assert row["maxBox"] >= 1
    assert row["totalSeconds"] >= row["drSeconds"]


def test_precompute_reports_cache(tiny_dir, tmp_path):
    cache = tmp_path / "cache"
    r1 = CliRunner().invoke(main, ["precompute", str(tiny_dir), "--cache-dir", str(cache)])
    assert r1.exit_code == 0, r1.output
    assert "computed" in r1.output
    r2 = CliRunner().invoke(main, ["precompute", str(tiny_dir), "--cache-dir", str(cache)])
    assert r2.exit_code == 0
    assert "hit" in r2.output and "computed" not in r2.output
