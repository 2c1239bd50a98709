"""
End-to-end tests of the command-line surface.
"""
import csv
import json

import pytest

from tablesmith import __version__
from tablesmith.main import dispatch
from tablesmith.services.manifest_service import load_manifest


@pytest.fixture
def manifest(tmp_path):
    path = tmp_path / "tables.jsonl"
    assert dispatch(["generate", "--count", "8", "--seed", "7", "--out", str(path)]) == 0
    return path


def _last_json_line(text):
    return json.loads(text.strip().splitlines()[-1])


def test_generate_is_byte_identical(tmp_path, manifest):
    again = tmp_path / "again.jsonl"
    assert dispatch(["--workers", "2", "generate", "--count", "8", "--seed", "7", "--out", str(again)]) == 0
    assert manifest.read_bytes() == again.read_bytes()
    report = json.loads((tmp_path / "tables.report.json").read_text())
    assert report["requested"] == 8 and report["produced"] == 8


def test_generate_prints_summary(tmp_path, capsys):
    out = tmp_path / "m.jsonl"
    assert dispatch(["generate", "--count", "2", "--complexity", "simple", "--out", str(out)]) == 0
    assert "produced=2 failed=0" in capsys.readouterr().out
    assert all(r.labels.is_simple for r in load_manifest(str(out)))


def test_generate_rejects_bad_range(tmp_path, capsys):
    code = dispatch(["generate", "--rows", "5,2", "--out", str(tmp_path / "m.jsonl")])
    assert code == 2
    assert _last_json_line(capsys.readouterr().err)["error"] == "ConfigError"


@pytest.mark.parametrize("template", ["render {html", "render {page}", "render {0}"])
def test_generate_rejects_bad_render_template(tmp_path, capsys, template):
    """A broken --render-cmd is a config error raised before any table is written."""
    out = tmp_path / "m.jsonl"
    code = dispatch(["generate", "--count", "2", "--out", str(out), "--render-cmd", template])
    assert code == 2
    error = _last_json_line(capsys.readouterr().err)
    assert error["error"] == "ConfigError"
    assert error["details"]["render_cmd"] == template
    assert not out.exists()


def test_unexpected_errors_still_emit_error_object(manifest, capsys, monkeypatch):
    """An exception outside the error hierarchy exits 1 with an InternalError object."""
    def broken(records):
        raise RuntimeError("composition exploded")

    monkeypatch.setattr("tablesmith.commands.stats.composition", broken)
    capsys.readouterr()
    assert dispatch(["stats", str(manifest)]) == 1
    error = _last_json_line(capsys.readouterr().err)
    assert error["error"] == "InternalError"
    assert "RuntimeError: composition exploded" in error["message"]
    assert error["details"]["command"] == "stats"


def test_teds_self_comparison(manifest, capsys):
    assert dispatch(["teds", "--pred", str(manifest), "--gold", str(manifest)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["mean"] == 1.0
    assert report["n"] == 8


def test_missing_manifest_exits_2_with_path(tmp_path, capsys):
    missing = str(tmp_path / "missing.jsonl")
    assert dispatch(["validate", missing]) == 2
    error = _last_json_line(capsys.readouterr().err)
    assert error["error"] == "ConfigError"
    assert error["details"]["path"] == missing


def test_unknown_subcommand_exits_2():
    assert dispatch(["frobnicate"]) == 2
    assert dispatch([]) == 2


def test_version_and_schema(capsys):
    assert dispatch(["--version"]) == 0
    assert __version__ in capsys.readouterr().out
    assert dispatch(["--schema"]) == 0
    schema = json.loads(capsys.readouterr().out)
    assert "labels" in schema["properties"]


def test_workers_must_be_positive(manifest):
    assert dispatch(["--workers", "0", "stats", str(manifest)]) == 2


def test_validate_rank_and_fidelity(tmp_path, manifest, capsys):
    assert dispatch(["validate", str(manifest)]) == 0
    assert json.loads(capsys.readouterr().out)["invalid"] == 0

    ranks = tmp_path / "ranks.jsonl"
    assert dispatch(["rank", str(manifest), "--out", str(ranks)]) == 0
    lines = [json.loads(line) for line in ranks.read_text().splitlines()]
    assert len(lines) == 8 and all(line["ranks"]["structure_rank"] == 5 for line in lines)

    assert dispatch(["fidelity", str(manifest)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["mean"] == 1.0 and report["below_one"] == 0


def test_validate_reports_invalid_tables(tmp_path, capsys):
    path = tmp_path / "pred.jsonl"
    path.write_text(json.dumps({"id": "a", "html": "<table><tr></tr></table>"}) + "\n")
    assert dispatch(["validate", str(path)]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["records"][0]["defects"][0]["kind"] == "EmptyStructure"


def test_corr_requires_aligned_ids(tmp_path, manifest):
    ranks = tmp_path / "ranks.jsonl"
    assert dispatch(["rank", str(manifest), "--out", str(ranks)]) == 0
    short = tmp_path / "short.jsonl"
    short.write_text("\n".join(ranks.read_text().splitlines()[:3]) + "\n")
    assert dispatch(["corr", str(ranks), str(short)]) == 2


def test_stats_and_split(tmp_path, manifest, capsys):
    assert dispatch(["stats", str(manifest)]) == 0
    stats = json.loads(capsys.readouterr().out)
    assert stats["total"]["records"] == 8
    assert len(stats["combo"]) == 8

    train, test = tmp_path / "train.jsonl", tmp_path / "test.jsonl"
    assert dispatch(["split", str(manifest), "--ratios", "0.5,0.5", "--outs", str(train), str(test)]) == 0
    assert len(load_manifest(str(train))) + len(load_manifest(str(test))) == 8
    assert dispatch(["split", str(manifest), "--ratios", "1", "--outs", str(train), str(test)]) == 2


def test_augment_writes_nine_per_record(tmp_path, manifest):
    out = tmp_path / "aug.jsonl"
    assert dispatch(["augment", str(manifest), "--out", str(out), "--seed", "3"]) == 0
    assert len(load_manifest(str(out))) == 72


def test_sample_coreset(tmp_path, manifest):
    out = tmp_path / "picked.jsonl"
    assert dispatch(["sample", "--pool", str(manifest), "--strategy", "coreset", "--budget", "3", "--out", str(out)]) == 0
    ids = [r.id for r in load_manifest(str(out))]
    assert len(ids) == 3 and len(set(ids)) == 3


def test_al_run_writes_curve(tmp_path, manifest):
    config = tmp_path / "al.json"
    curve = tmp_path / "curve.csv"
    config.write_text(json.dumps({
        "pool": str(manifest), "initial_count": 2, "budget": 4, "step_size": 2, "seed": 1,
    }))
    assert dispatch(["al-run", "--config", str(config), "--out", str(curve)]) == 0
    rows = list(csv.reader(curve.open()))
    assert rows[0] == ["round", "labeled_count", "score"]
    assert [int(r[1]) for r in rows[1:]] == [2, 4, 6]


def test_disturb_report(tmp_path, manifest):
    out = tmp_path / "disturb.json"
    assert dispatch(["disturb", str(manifest), "--perturb", "structure", "--repetitions", "2", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["records"] == 8
    assert report["dimensions"][0]["perturbation"] == "structure"
