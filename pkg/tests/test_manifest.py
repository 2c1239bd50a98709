"""
Tests for manifest IO and topic memory.
"""
import json

import pytest

from tablesmith.core.errors import ConfigError, DuplicateId, ManifestError
from tablesmith.schemas.table import AnnotationRecord, PredictionRecord
from tablesmith.services.manifest_service import load_manifest, read_jsonl, write_manifest
from tablesmith.services.table_model import build_record, grid_from_schema
from tablesmith.services.topic_memory import TopicMemory
from tests.conftest import complex_schema


def _record(record_id="t0"):
    return build_record(record_id, grid_from_schema(complex_schema()), None, topic="5G plans")


def test_write_then_load(tmp_path):
    path = str(tmp_path / "m.jsonl")
    assert write_manifest([_record("a"), _record("b")], path) == 2
    records = load_manifest(path)
    assert [r.id for r in records] == ["a", "b"]
    assert records[0] == _record("a")


def test_unknown_fields_survive_rewrite(tmp_path):
    """Extra keys such as bounding boxes pass through untouched."""
    data = _record().model_dump(mode="json")
    data["bbox"] = [0, 0, 10, 20]
    src = tmp_path / "in.jsonl"
    src.write_text(json.dumps(data) + "\n")
    out = str(tmp_path / "out.jsonl")
    write_manifest(load_manifest(str(src)), out)
    assert json.loads(open(out).readline())["bbox"] == [0, 0, 10, 20]


def test_nested_unknown_fields_survive_rewrite(tmp_path):
    """Extra keys inside labels, cells and provenance are kept as well."""
    data = _record().model_dump(mode="json")
    data["labels"]["table_type"] = "financial"
    data["cells"][0]["bbox"] = [1, 2, 3, 4]
    data["provenance"] = {"parent_id": "t", "transform": None, "model": "local"}
    src = tmp_path / "in.jsonl"
    src.write_text(json.dumps(data) + "\n")
    out = str(tmp_path / "out.jsonl")
    write_manifest(load_manifest(str(src)), out)
    written = json.loads(open(out).readline())
    assert written["labels"]["table_type"] == "financial"
    assert written["cells"][0]["bbox"] == [1, 2, 3, 4]
    assert written["provenance"]["model"] == "local"


def test_schema_error_names_the_line(tmp_path):
    lines = [json.dumps(_record(f"r{i}").model_dump(mode="json")) for i in range(2)]
    lines.append(json.dumps({"id": "r2"}))
    path = tmp_path / "bad.jsonl"
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(ManifestError) as exc:
        load_manifest(str(path))
    assert exc.value.details["line"] == 3
    assert "line 3" in exc.value.message


def test_invalid_json_line(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"id": "a", "html": "<table></table>"}\n{not json\n')
    with pytest.raises(ManifestError) as exc:
        read_jsonl(str(path), PredictionRecord)
    assert exc.value.details["line"] == 2


def test_duplicate_ids_rejected(tmp_path):
    path = tmp_path / "dup.jsonl"
    row = json.dumps({"id": "a", "html": "<table></table>"})
    path.write_text(f"{row}\n\n{row}\n")
    with pytest.raises(DuplicateId) as exc:
        read_jsonl(str(path), PredictionRecord)
    assert exc.value.details["line"] == 3


def test_missing_manifest_is_config_error(tmp_path):
    with pytest.raises(ConfigError) as exc:
        load_manifest(str(tmp_path / "nope.jsonl"))
    assert exc.value.exit_code == 2


def test_record_schema_example_validates():
    example = AnnotationRecord.model_json_schema()["example"]
    assert AnnotationRecord.model_validate(example).id == "tbl-7-000000"


def test_topic_memory_round_trip(tmp_path):
    path = str(tmp_path / "topics.json")
    memory = TopicMemory.load(path)
    assert len(memory) == 0
    assert memory.add("5G plans")
    assert not memory.add("5G plans")
    memory.save()
    again = TopicMemory.load(path)
    assert again.topics == ["5G plans"]
    assert "5G plans" in again


def test_topic_memory_rejects_bad_json(tmp_path):
    path = tmp_path / "topics.json"
    path.write_text("{")
    with pytest.raises(ConfigError):
        TopicMemory.load(str(path))
