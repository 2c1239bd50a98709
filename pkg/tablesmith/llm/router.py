"""
Model router for selecting the model of each pipeline stage.
"""
import logging
from typing import Dict, Optional

logger = logging.getLogger(__name__)

DEFAULT_MODEL = "gpt-4o-mini"

# Stage -> model mapping
MODEL_ROUTING = {
    "topic": "gpt-4o-mini",
    "header_fill": "gpt-4o-mini",
    "body_fill": "gpt-4o-mini",
    "rank": "gpt-4o-mini",
    "structure_only": "gpt-4o",  # Whole-table generation needs the stronger model
}

# Config file names stages by their short form
STAGE_ALIASES = {
    "header": "header_fill",
    "body": "body_fill",
    "structure": "structure_only",
}


def get_model_for_stage(
    stage: str,
    overrides: Optional[Dict[str, str]] = None,
    default: Optional[str] = None,
) -> str:
    """
    Get the model for a stage.

    Args:
        stage: Stage name (e.g. "topic", "body_fill")
        overrides: Per-stage models from the provider config, short or long names
        default: Model configured for every stage

    Returns:
        Model identifier string
    """
    for key, value in (overrides or {}).items():
        if STAGE_ALIASES.get(key, key) == stage:
            return value
    if default:
        return default
    model = MODEL_ROUTING.get(stage)
    if model is None:
        logger.warning(f"No model routed for stage={stage}, using {DEFAULT_MODEL}")
        return DEFAULT_MODEL
    return model
