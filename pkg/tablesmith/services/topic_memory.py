"""
Persisted set of topics already used, passed to topic prompts.
"""
import json
import logging
import threading
from pathlib import Path
from typing import Iterable, List, Optional

from tablesmith.core.errors import ConfigError

logger = logging.getLogger(__name__)


class TopicMemory:
    """Exact-string dedup of topics, in insertion order."""

    def __init__(self, topics: Optional[Iterable[str]] = None, path: Optional[str] = None):
        self.path = Path(path) if path else None
        self._topics: List[str] = []
        self._seen = set()
        self._lock = threading.Lock()
        for topic in topics or []:
            self.add(topic)

    @classmethod
    def load(cls, path: str) -> "TopicMemory":
        memory_path = Path(path)
        if not memory_path.exists():
            return cls(path=path)
        try:
            data = json.loads(memory_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ConfigError(f"topic memory {path} is not valid JSON: {e}", path=str(path))
        topics = data.get("topics", []) if isinstance(data, dict) else data
        logger.info(f"Topic memory loaded: path={path}, topics={len(topics)}")
        return cls(topics=topics, path=path)

    def save(self, path: Optional[str] = None) -> None:
        target = Path(path) if path else self.path
        if target is None:
            raise ConfigError("topic memory has no path to save to")
        target.parent.mkdir(parents=True, exist_ok=True)
        with self._lock:
            payload = {"topics": list(self._topics)}
        target.write_text(json.dumps(payload, ensure_ascii=False, indent=2), encoding="utf-8")

    def add(self, topic: str) -> bool:
        """Record a topic; False when it was already known."""
        with self._lock:
            if topic in self._seen:
                return False
            self._seen.add(topic)
            self._topics.append(topic)
            return True

    def __contains__(self, topic: str) -> bool:
        return topic in self._seen

    def __len__(self) -> int:
        return len(self._topics)

    @property
    def topics(self) -> List[str]:
        with self._lock:
            return list(self._topics)
