"""
Provider interfaces: raw chat LLMs, table content providers and rankers.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

from tablesmith.schemas.table import Language


@dataclass
class LLMResponse:
    """Standardized LLM response."""
    content: str
    tokens_in: int = 0
    tokens_out: int = 0
    model: str = ""
    metadata: Dict[str, Any] = None

    def __post_init__(self):
        if self.metadata is None:
            self.metadata = {}


class LLMProvider(ABC):
    """Abstract base class for chat-completion backends."""

    @abstractmethod
    def chat(
        self,
        messages: List[Dict[str, str]],
        model: str,
        temperature: float = 0.7,
        max_tokens: Optional[int] = None,
        **kwargs
    ) -> LLMResponse:
        """
        Generate a chat completion.

        Args:
            messages: List of message dicts with 'role' and 'content'
            model: Model identifier
            temperature: Sampling temperature
            max_tokens: Maximum tokens to generate

        Returns:
            LLMResponse with content and metadata
        """


class ContentProvider(ABC):
    """
    Fills topic, header and body slots of table skeletons.

    Fill operations never change structure: the logical width of every row
    is the same before and after.
    """

    @abstractmethod
    def topic(self, domain: str, language: Language, used_topics: Sequence[str], n: int) -> List[str]:
        """Return ``n`` topics, none equal to a member of ``used_topics``."""

    @abstractmethod
    def fill_headers(self, html: str, topic: str, domain: str, language: Language) -> str:
        """Fill every th of ``html``."""

    @abstractmethod
    def fill_bodies(
        self, html: str, topic: str, domain: str, language: Language, n_variants: int = 5
    ) -> List[str]:
        """Return ``n_variants`` documents with every td filled."""


class RankerProvider(ABC):
    """Scores topic relevance and semantic consistency on a 1-5 scale."""

    @abstractmethod
    def rank_topic(self, html: str, topic: str, entities: Sequence[str]) -> int:
        pass

    @abstractmethod
    def rank_semantics(self, html: str, topic: str) -> int:
        pass
