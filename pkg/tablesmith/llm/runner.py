"""
LLM runner: loads prompt assets, builds messages, bounds in-flight calls and
parses the JSON response contract.
"""
import json
import logging
import re
import threading
from pathlib import Path
from typing import Any, Dict, List, Optional

from tablesmith.core.errors import ConfigError, ResponseFormatError
from tablesmith.llm.provider import LLMProvider
from tablesmith.llm.router import get_model_for_stage

logger = logging.getLogger(__name__)

PROMPT_DIR = Path(__file__).parent / "prompts"

SYSTEM_PROMPT = "You are a data engineer who writes and fills HTML tables. Answer with JSON only."

CODE_FENCE = re.compile(r"^```(?:json)?\s*|\s*```$", re.MULTILINE)


class LLMRunner:
    """Runs one prompt stage against a provider."""

    def __init__(
        self,
        provider: LLMProvider,
        models: Optional[Dict[str, str]] = None,
        default_model: Optional[str] = None,
        max_inflight: int = 4,
        temperature: float = 0.7,
    ):
        self.provider = provider
        self.models = models or {}
        self.default_model = default_model
        self.temperature = temperature
        self._slots = threading.BoundedSemaphore(max_inflight)

    def _load_prompt_template(self, stage: str, version: str = "v1") -> str:
        """Load prompt template from file."""
        prompt_path = PROMPT_DIR / f"{stage}_{version}.md"
        if not prompt_path.exists():
            raise ConfigError(f"Prompt template not found: {prompt_path}", path=str(prompt_path))
        return prompt_path.read_text(encoding="utf-8")

    def _build_messages(self, prompt_template: str, context: Dict[str, Any]) -> List[Dict[str, str]]:
        """Build messages for LLM from template and context."""
        prompt = prompt_template
        for key, value in context.items():
            placeholder = f"{{{key}}}"
            if isinstance(value, (dict, list)):
                value = json.dumps(value, ensure_ascii=False)
            prompt = prompt.replace(placeholder, "" if value is None else str(value))

        return [
            {"role": "system", "content": SYSTEM_PROMPT},
            {"role": "user", "content": prompt},
        ]

    def _parse_json_response(self, text: str) -> Dict[str, Any]:
        """Parse the JSON object of a response; code fences are tolerated."""
        stripped = CODE_FENCE.sub("", text.strip())
        json_match = re.search(r"\{.*\}", stripped, re.DOTALL)
        if not json_match:
            raise ResponseFormatError("response holds no JSON object", excerpt=text[:200])
        try:
            parsed = json.loads(json_match.group())
        except json.JSONDecodeError as e:
            raise ResponseFormatError(f"response is not valid JSON: {e}", excerpt=text[:200])
        if not isinstance(parsed, dict):
            raise ResponseFormatError("response JSON is not an object")
        return parsed

    def run(self, stage: str, context: Dict[str, Any], prompt_version: str = "v1") -> Dict[str, Any]:
        """
        Run one stage.

        Args:
            stage: Prompt asset name (e.g. "header_fill")
            context: Values for the template's {slots}
            prompt_version: Prompt version (default "v1")

        Returns:
            Parsed JSON object of the response
        """
        model = get_model_for_stage(stage, self.models, self.default_model)
        messages = self._build_messages(self._load_prompt_template(stage, prompt_version), context)

        with self._slots:
            response = self.provider.chat(messages=messages, model=model, temperature=self.temperature)

        result = self._parse_json_response(response.content)
        logger.debug(f"LLM stage completed: stage={stage}, model={model}, tokens={response.tokens_in + response.tokens_out}")
        return result
