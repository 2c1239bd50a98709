import json
import logging
import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from tablesmith.core.errors import ConfigError
from tablesmith.schemas.pipeline import PipelineConfig

# Load environment variables from .env file (must be first)
env_path = Path(__file__).parent.parent.parent / ".env"
load_dotenv(dotenv_path=env_path)

logger = logging.getLogger(__name__)

LOG_LEVEL = os.getenv("TABLESMITH_LOG_LEVEL", "INFO")
LOG_DIR = os.getenv("TABLESMITH_LOG_DIR")

# Parallelism budget handed to batch operations
WORKERS = int(os.getenv("TABLESMITH_WORKERS", str(os.cpu_count() or 1)))

OPENAI_API_KEY = os.getenv("OPENAI_API_KEY")

TRANSCRIPT_DIR = os.getenv("TABLESMITH_TRANSCRIPT_DIR", "transcripts")


def get_api_key(env_name: str = "OPENAI_API_KEY") -> Optional[str]:
    """API keys are only ever read from the environment."""
    return os.getenv(env_name)


def load_pipeline_config(path: Optional[str]) -> PipelineConfig:
    """
    Read a JSON pipeline config. A missing path argument yields the defaults.

    Raises:
        ConfigError: unreadable file, invalid JSON or schema violation
    """
    if not path:
        return PipelineConfig()
    config_path = Path(path)
    if not config_path.is_file():
        raise ConfigError(f"config file not found: {path}", path=str(path))
    try:
        raw = json.loads(config_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {path} is not valid JSON: {e}", path=str(path))
    try:
        config = PipelineConfig.model_validate(raw)
    except ValidationError as e:
        raise ConfigError(f"invalid config {path}: {e.error_count()} error(s)", path=str(path), errors=e.errors(include_url=False))

    if config.seed is not None:
        config.generation.seed = config.seed
        config.augmentation.seed = config.seed
    logger.info(f"Loaded pipeline config: path={path}, provider={config.provider.kind.value}")
    return config
