"""
OpenAI-compatible provider implementation.
"""
import logging
from typing import Dict, List, Optional

from openai import APIConnectionError, APIError, APITimeoutError, OpenAI, RateLimitError

from tablesmith.core.config import OPENAI_API_KEY
from tablesmith.core.errors import ConfigError, ProviderError
from tablesmith.llm.provider import LLMProvider, LLMResponse

logger = logging.getLogger(__name__)


class OpenAIProvider(LLMProvider):
    """Chat completions through the official OpenAI SDK, any compatible endpoint."""

    def __init__(
        self,
        api_key: Optional[str] = None,
        base_url: Optional[str] = None,
        timeout_ms: int = 60000,
    ):
        self.api_key = api_key or OPENAI_API_KEY
        if not self.api_key:
            raise ConfigError("API key not configured for the HTTP provider")
        self.client = OpenAI(api_key=self.api_key, base_url=base_url, timeout=timeout_ms / 1000.0, max_retries=0)
        logger.info(f"OpenAI provider initialized: base_url={base_url or 'default'}, timeout_ms={timeout_ms}")

    def chat(
        self,
        messages: List[Dict[str, str]],
        model: str = "gpt-4o-mini",
        temperature: float = 0.7,
        max_tokens: Optional[int] = None,
        **kwargs
    ) -> LLMResponse:
        """Generate a chat completion."""
        try:
            response = self.client.chat.completions.create(
                model=model,
                messages=messages,
                temperature=temperature,
                max_tokens=max_tokens or 4000,
                **kwargs
            )
        except (APIConnectionError, APITimeoutError, RateLimitError) as e:
            logger.warning(f"OpenAI request failed, retryable: {e}")
            raise ProviderError(f"provider unreachable: {e}", retryable=True) from e
        except APIError as e:
            logger.error(f"OpenAI API error: {e}", exc_info=True)
            raise ProviderError(f"provider API error: {e}") from e

        usage = response.usage
        return LLMResponse(
            content=response.choices[0].message.content or "",
            tokens_in=usage.prompt_tokens if usage else 0,
            tokens_out=usage.completion_tokens if usage else 0,
            model=model,
            metadata={"finish_reason": response.choices[0].finish_reason},
        )
