"""
JSONL manifests: one JSON object per line.
"""
import json
import logging
from pathlib import Path
from typing import Iterable, List, Type, TypeVar

from pydantic import BaseModel, ValidationError

from tablesmith.core.errors import ConfigError, DuplicateId, ManifestError
from tablesmith.schemas.table import AnnotationRecord

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)


def read_jsonl(path: str, model: Type[ModelT], unique_ids: bool = True) -> List[ModelT]:
    """
    Parse every line of ``path`` into ``model``.

    Raises:
        ConfigError: the file does not exist
        ManifestError: a line is not valid JSON or does not fit ``model``
        DuplicateId: two lines share an id
    """
    manifest_path = Path(path)
    if not manifest_path.is_file():
        raise ConfigError(f"manifest not found: {path}", path=str(path))

    items: List[ModelT] = []
    seen = {}
    with manifest_path.open(encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                item = model.model_validate(json.loads(line))
            except json.JSONDecodeError as e:
                raise ManifestError(f"{path} line {line_no}: invalid JSON ({e.msg})", path=str(path), line=line_no)
            except ValidationError as e:
                raise ManifestError(
                    f"{path} line {line_no}: {e.error_count()} schema error(s)",
                    path=str(path), line=line_no, errors=e.errors(include_url=False),
                )
            record_id = getattr(item, "id", None)
            if unique_ids and record_id is not None:
                if record_id in seen:
                    raise DuplicateId(
                        f"{path} line {line_no}: id {record_id!r} already used on line {seen[record_id]}",
                        path=str(path), line=line_no, id=record_id,
                    )
                seen[record_id] = line_no
            items.append(item)
    logger.debug(f"Loaded manifest: path={path}, records={len(items)}")
    return items


def write_jsonl(items: Iterable[BaseModel], path: str) -> int:
    """Write one object per line; returns the number of lines."""
    manifest_path = Path(path)
    manifest_path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with manifest_path.open("w", encoding="utf-8") as f:
        for item in items:
            f.write(json.dumps(item.model_dump(mode="json"), ensure_ascii=False) + "\n")
            count += 1
    return count


def load_manifest(path: str) -> List[AnnotationRecord]:
    return read_jsonl(path, AnnotationRecord)


def write_manifest(records: Iterable[AnnotationRecord], path: str) -> int:
    return write_jsonl(records, path)
