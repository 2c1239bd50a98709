"""
Builds providers, runners and rankers from the pipeline configuration.
"""
import logging
from pathlib import Path
from typing import Optional

from tablesmith.core.config import TRANSCRIPT_DIR, get_api_key
from tablesmith.core.logging_config import sanitize_log_data
from tablesmith.llm.http_provider import HttpContentProvider, HttpRanker
from tablesmith.llm.openai_provider import OpenAIProvider
from tablesmith.llm.provider import ContentProvider, LLMProvider, RankerProvider
from tablesmith.llm.runner import LLMRunner
from tablesmith.llm.template_provider import TemplateProvider
from tablesmith.llm.transcript import RecordingLLM, ReplayLLM, Transcript
from tablesmith.schemas.pipeline import ProviderConfig, ProviderKind, RankerKind
from tablesmith.services.checker_service import SurrogateRanker

logger = logging.getLogger(__name__)


def build_llm(config: ProviderConfig, transcript_dir: Optional[str] = None) -> LLMProvider:
    """
    Replay when a transcript to replay is configured; otherwise a live client
    whose exchanges are always recorded.
    """
    if config.replay_path:
        return ReplayLLM.from_file(config.replay_path)

    client = OpenAIProvider(
        api_key=get_api_key(config.api_key_env),
        base_url=config.endpoint,
        timeout_ms=config.timeout_ms,
    )
    transcript_path = config.transcript_path or str(Path(transcript_dir or TRANSCRIPT_DIR) / "transcript.jsonl")
    logger.info(f"Recording provider transcript: path={transcript_path}")
    return RecordingLLM(client, Transcript(transcript_path))


def build_runner(config: ProviderConfig, transcript_dir: Optional[str] = None, llm: Optional[LLMProvider] = None) -> LLMRunner:
    logger.info(f"Provider config: {sanitize_log_data(config.model_dump(mode='json'))}")
    return LLMRunner(
        llm or build_llm(config, transcript_dir),
        models=config.models,
        default_model=config.model,
        max_inflight=config.max_inflight,
        temperature=config.temperature,
    )


def build_content_provider(
    config: ProviderConfig,
    seed: int = 0,
    transcript_dir: Optional[str] = None,
    runner: Optional[LLMRunner] = None,
) -> ContentProvider:
    if config.kind == ProviderKind.template:
        return TemplateProvider(seed=seed)
    return HttpContentProvider(runner or build_runner(config, transcript_dir))


def build_ranker(
    kind: RankerKind,
    config: ProviderConfig,
    transcript_dir: Optional[str] = None,
    runner: Optional[LLMRunner] = None,
) -> RankerProvider:
    if kind == RankerKind.surrogate:
        return SurrogateRanker()
    return HttpRanker(runner or build_runner(config, transcript_dir))
