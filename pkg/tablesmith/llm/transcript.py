"""
Append-only provider transcripts, recording and replay.

A transcript is a JSONL file; each line holds one request payload, the
response it received and a timestamp. Replay answers identical requests
with the recorded responses, in recording order.
"""
import hashlib
import json
import logging
import threading
from collections import defaultdict, deque
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Deque, Dict, List, Optional

from tablesmith.core.errors import ConfigError, ProviderError
from tablesmith.llm.provider import LLMProvider, LLMResponse

logger = logging.getLogger(__name__)


def request_key(request: Dict[str, Any]) -> str:
    """Hash of a request payload, independent of key order."""
    payload = json.dumps(request, sort_keys=True, ensure_ascii=False)
    return hashlib.md5(payload.encode("utf-8")).hexdigest()


def _request_payload(messages, model, temperature, max_tokens) -> Dict[str, Any]:
    return {"model": model, "messages": messages, "temperature": temperature, "max_tokens": max_tokens}


class Transcript:
    """Synchronized append-only JSONL log."""

    def __init__(self, path: str):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def append(self, request: Dict[str, Any], response: Dict[str, Any]) -> None:
        entry = {
            "key": request_key(request),
            "request": request,
            "response": response,
            "timestamp": datetime.now(timezone.utc).isoformat(),
        }
        line = json.dumps(entry, ensure_ascii=False)
        with self._lock:
            with self.path.open("a", encoding="utf-8") as f:
                f.write(line + "\n")

    @staticmethod
    def load(path: str) -> List[Dict[str, Any]]:
        transcript_path = Path(path)
        if not transcript_path.is_file():
            raise ConfigError(f"transcript not found: {path}", path=str(path))
        entries = []
        with transcript_path.open(encoding="utf-8") as f:
            for line_no, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                try:
                    entries.append(json.loads(line))
                except json.JSONDecodeError as e:
                    raise ConfigError(f"transcript {path} line {line_no} is not JSON: {e}", line=line_no)
        return entries


class RecordingLLM(LLMProvider):
    """Passes calls through to ``inner`` and logs every exchange."""

    def __init__(self, inner: LLMProvider, transcript: Transcript):
        self.inner = inner
        self.transcript = transcript

    def chat(self, messages, model, temperature=0.7, max_tokens=None, **kwargs) -> LLMResponse:
        response = self.inner.chat(messages=messages, model=model, temperature=temperature, max_tokens=max_tokens, **kwargs)
        self.transcript.append(
            _request_payload(messages, model, temperature, max_tokens),
            {
                "content": response.content,
                "model": response.model,
                "tokens_in": response.tokens_in,
                "tokens_out": response.tokens_out,
            },
        )
        return response


class ReplayLLM(LLMProvider):
    """Answers from a recorded transcript; never touches the network."""

    def __init__(self, entries: List[Dict[str, Any]]):
        self._responses: Dict[str, Deque[Dict[str, Any]]] = defaultdict(deque)
        for entry in entries:
            key = entry.get("key") or request_key(entry["request"])
            self._responses[key].append(entry["response"])
        self._lock = threading.Lock()
        logger.info(f"Replay provider loaded: entries={len(entries)}, distinct_requests={len(self._responses)}")

    @classmethod
    def from_file(cls, path: str) -> "ReplayLLM":
        return cls(Transcript.load(path))

    def chat(self, messages, model, temperature=0.7, max_tokens=None, **kwargs) -> LLMResponse:
        key = request_key(_request_payload(messages, model, temperature, max_tokens))
        with self._lock:
            queue: Optional[Deque] = self._responses.get(key)
            if not queue:
                raise ProviderError(f"no recorded response for request {key}", retryable=False, key=key)
            response = queue.popleft()
        return LLMResponse(
            content=response.get("content", ""),
            tokens_in=response.get("tokens_in", 0),
            tokens_out=response.get("tokens_out", 0),
            model=response.get("model", model),
            metadata={"replayed": True},
        )
