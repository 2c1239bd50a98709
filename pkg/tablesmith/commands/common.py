"""
Helpers shared by the subcommands.
"""
import json
import logging
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ValidationError

from tablesmith.core.errors import ConfigError
from tablesmith.schemas.table import AnnotationRecord
from tablesmith.services.sampler_service import load_features, pool_features

logger = logging.getLogger(__name__)

FEATURE_FILE_PREFIX = "file:"


def write_json(data: Any, path: Optional[str]) -> None:
    """Pretty JSON to ``path``, or to stdout when no path is given."""
    if isinstance(data, BaseModel):
        data = data.model_dump(mode="json")
    text = json.dumps(data, indent=2, ensure_ascii=False, sort_keys=False)
    if not path:
        print(text)
        return
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text + "\n", encoding="utf-8")
    logger.info(f"Wrote report: path={path}")


def validated(model, data: dict, what: str):
    """Build a pydantic model from CLI values; validation problems are config errors."""
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"invalid {what}: {e.error_count()} error(s)", errors=e.errors(include_url=False))


def parse_range(text: Optional[str]):
    """``"2,12"`` -> (2, 12); None passes through."""
    if text is None:
        return None
    try:
        low, high = (int(x) for x in text.split(","))
    except ValueError:
        raise ConfigError(f"range {text!r} must look like LOW,HIGH")
    return low, high


def feature_matrix(records: Sequence[AnnotationRecord], spec: str) -> np.ndarray:
    """``structural`` features of the records, or a ``file:<path.npy>`` matrix aligned with them."""
    if spec == "structural":
        return pool_features(records)
    if spec.startswith(FEATURE_FILE_PREFIX):
        return load_features(spec[len(FEATURE_FILE_PREFIX):], expected_rows=len(records))
    raise ConfigError(f"unknown feature source {spec!r}, expected 'structural' or 'file:<path.npy>'")


def load_scores(path: Optional[str]) -> Optional[dict]:
    """JSON object id -> score, used by the ppl and hard strategies."""
    if not path:
        return None
    score_path = Path(path)
    if not score_path.is_file():
        raise ConfigError(f"score file not found: {path}", path=str(path))
    try:
        raw = json.loads(score_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ConfigError(f"score file {path} is not valid JSON: {e}", path=str(path))
    if not isinstance(raw, dict):
        raise ConfigError(f"score file {path} must hold an object of id -> score")
    return {str(k): float(v) for k, v in raw.items()}
