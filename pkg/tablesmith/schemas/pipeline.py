"""
Pydantic schema of the pipeline configuration file.
"""
from enum import Enum
from typing import Dict, Optional

from pydantic import BaseModel, ConfigDict, Field

from tablesmith.schemas.generation import GenerationRequest
from tablesmith.schemas.sampler import DistanceMetric, Strategy


class ProviderKind(str, Enum):
    template = "template"
    http = "http"


class RankerKind(str, Enum):
    surrogate = "surrogate"
    http = "http"


class ProviderConfig(BaseModel):
    """LLM connection settings. The key itself only ever comes from the environment."""
    model_config = ConfigDict(extra="forbid")

    kind: ProviderKind = ProviderKind.template
    endpoint: Optional[str] = Field(None, description="OpenAI-compatible base URL")
    model: Optional[str] = Field(None, description="Default model for every stage")
    models: Dict[str, str] = Field(default_factory=dict, description="Per-stage overrides: topic, header, body, rank, structure")
    max_inflight: int = Field(4, ge=1)
    timeout_ms: int = Field(60000, ge=1)
    api_key_env: str = "OPENAI_API_KEY"
    transcript_path: Optional[str] = None
    replay_path: Optional[str] = None
    temperature: float = Field(0.7, ge=0.0, le=2.0)


class CheckerConfig(BaseModel):
    ranker: RankerKind = RankerKind.surrogate
    min_overall: int = Field(3, ge=1, le=5)
    max_fallback: int = Field(3, ge=0)


class AugmentationConfig(BaseModel):
    enabled: bool = False
    seed: Optional[int] = None


class SamplerConfig(BaseModel):
    strategy: Strategy = Strategy.coreset
    budget: int = Field(0, ge=0)
    step_size: int = Field(1, ge=1)
    metric: DistanceMetric = DistanceMetric.euclidean
    features: str = "structural"


class PathsConfig(BaseModel):
    manifest_dir: str = "."
    transcript_dir: Optional[str] = None
    topic_memory: Optional[str] = None


class PipelineConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    generation: GenerationRequest = Field(default_factory=GenerationRequest)
    provider: ProviderConfig = Field(default_factory=ProviderConfig)
    checker: CheckerConfig = Field(default_factory=CheckerConfig)
    augmentation: AugmentationConfig = Field(default_factory=AugmentationConfig)
    sampler: SamplerConfig = Field(default_factory=SamplerConfig)
    paths: PathsConfig = Field(default_factory=PathsConfig)
    seed: Optional[int] = Field(None, ge=0, lt=2**64, description="Overrides every per-block seed")
