"""
Tests for configuration loading and provider wiring.
"""
import json

import pytest

from tablesmith.core.config import get_api_key, load_pipeline_config
from tablesmith.core.errors import ConfigError
from tablesmith.core.logging_config import sanitize_log_data
from tablesmith.llm.factory import build_content_provider, build_llm, build_ranker
from tablesmith.llm.http_provider import HttpContentProvider
from tablesmith.llm.router import get_model_for_stage
from tablesmith.llm.template_provider import TemplateProvider
from tablesmith.llm.transcript import RecordingLLM, ReplayLLM
from tablesmith.schemas.pipeline import PipelineConfig, ProviderConfig, ProviderKind, RankerKind
from tablesmith.services.checker_service import SurrogateRanker


def test_defaults_without_file():
    config = load_pipeline_config(None)
    assert config == PipelineConfig()
    assert config.provider.kind == ProviderKind.template
    assert config.generation.row_range == (2, 12)


def test_top_level_seed_overrides_blocks(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"seed": 42, "generation": {"count": 5, "seed": 1}}))
    config = load_pipeline_config(str(path))
    assert config.generation.seed == 42
    assert config.augmentation.seed == 42
    assert config.generation.count == 5


@pytest.mark.parametrize("content", [
    "{",
    json.dumps({"provider": {"api_key": "sk-secret"}}),
    json.dumps({"generation": {"row_range": [5, 2]}}),
    json.dumps({"unknown": 1}),
])
def test_invalid_config_files(tmp_path, content):
    path = tmp_path / "config.json"
    path.write_text(content)
    with pytest.raises(ConfigError) as exc:
        load_pipeline_config(str(path))
    assert exc.value.exit_code == 2


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        load_pipeline_config(str(tmp_path / "missing.json"))


def test_api_key_comes_from_environment(monkeypatch):
    monkeypatch.setenv("TABLESMITH_TEST_KEY", "sk-test")
    assert get_api_key("TABLESMITH_TEST_KEY") == "sk-test"


def test_sanitize_hides_secrets():
    clean = sanitize_log_data({"api_key": "sk", "api_key_env": "OPENAI_API_KEY", "model": "m"})
    assert clean == {"api_key": "***REDACTED***", "api_key_env": "OPENAI_API_KEY", "model": "m"}


def test_factory_builds_template_and_surrogate():
    config = ProviderConfig()
    assert isinstance(build_content_provider(config, seed=3), TemplateProvider)
    assert isinstance(build_ranker(RankerKind.surrogate, config), SurrogateRanker)


def test_factory_replays_when_configured(tmp_path):
    path = tmp_path / "t.jsonl"
    path.write_text("")
    config = ProviderConfig(kind=ProviderKind.http, replay_path=str(path))
    assert isinstance(build_llm(config), ReplayLLM)
    assert isinstance(build_content_provider(config), HttpContentProvider)


def test_factory_records_live_calls(tmp_path, monkeypatch):
    monkeypatch.setenv("OPENAI_API_KEY", "sk-test")
    config = ProviderConfig(kind=ProviderKind.http, endpoint="http://localhost:9")
    llm = build_llm(config, transcript_dir=str(tmp_path))
    assert isinstance(llm, RecordingLLM)
    assert llm.transcript.path == tmp_path / "transcript.jsonl"


def test_stage_model_overrides():
    assert get_model_for_stage("topic", {"topic": "small-model"}, "big-model") == "small-model"
    assert get_model_for_stage("rank", {"topic": "small-model"}, "big-model") == "big-model"
