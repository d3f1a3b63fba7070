"""Tweet corpus ingestion: parsing, deduplication, windowing and tagging."""

from __future__ import annotations

import dataclasses
import json
import re
import unicodedata
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Sequence, TextIO

from .errors import ConfigError, DataError

REQUIRED_FIELDS = ("id", "author", "timestamp", "text")
_WS = re.compile(r"\s+")


@dataclass(frozen=True)
class CandidateSpec:
    id: str
    group: str
    name_patterns: tuple[str, ...]

    def __post_init__(self):
        if not self.id:
            raise ConfigError("candidate id must be non-empty")
        if not self.group:
            raise ConfigError(f"candidate {self.id!r} has no group")
        patterns = tuple(p for p in self.name_patterns if p and p.strip())
        if not patterns:
            raise ConfigError(f"candidate {self.id!r} has no name patterns")
        object.__setattr__(self, "name_patterns", patterns)


@dataclass(frozen=True)
class TweetRecord:
    id: str
    author: str
    timestamp: datetime
    text: str
    mentions: frozenset[str] = field(default_factory=frozenset)


@dataclass(frozen=True)
class LineError:
    lineno: int
    message: str

    def __str__(self):
        return f"line {self.lineno}: {self.message}"


def parse_timestamp(value: str) -> datetime:
    """Parse an ISO-8601 timestamp into an aware UTC datetime.

    Naive timestamps are taken to be UTC already.
    """
    value = value.strip()
    if value.endswith(("Z", "z")):
        value = value[:-1] + "+00:00"
    ts = datetime.fromisoformat(value)
    if ts.tzinfo is None:
        return ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def _record_from_obj(obj) -> TweetRecord:
    if not isinstance(obj, dict):
        raise ValueError("record is not an object")
    for name in REQUIRED_FIELDS:
        if name not in obj:
            raise ValueError(f"missing field {name!r}")
        if not isinstance(obj[name], str):
            raise ValueError(f"field {name!r} must be a string")
    if not obj["id"]:
        raise ValueError("empty id")
    try:
        ts = parse_timestamp(obj["timestamp"])
    except ValueError:
        raise ValueError(f"bad timestamp {obj['timestamp']!r}") from None
    mentions = obj.get("mentions") or ""
    if isinstance(mentions, str):
        mentions = [m for m in mentions.split(",") if m]
    return TweetRecord(
        id=obj["id"],
        author=obj["author"],
        timestamp=ts,
        text=obj["text"],
        mentions=frozenset(mentions),
    )


def parse_tweet_stream(lines: Iterable[str]) -> tuple[list[TweetRecord], list[LineError]]:
    """Parse line-delimited JSON tweet records.

    Malformed lines do not stop parsing; each one yields a ``LineError``
    carrying its 1-based line number. Blank lines are skipped silently.
    """
    records: list[TweetRecord] = []
    errors: list[LineError] = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            records.append(_record_from_obj(json.loads(line)))
        except json.JSONDecodeError as exc:
            errors.append(LineError(lineno, f"invalid JSON: {exc.msg}"))
        except ValueError as exc:
            errors.append(LineError(lineno, str(exc)))
    return records, errors


def read_tweets(path: str | Path) -> tuple[list[TweetRecord], list[LineError]]:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_tweet_stream(fh)
    except (OSError, UnicodeDecodeError) as exc:
        raise DataError(f"cannot read tweets file {path}: {exc}") from exc


def record_to_obj(record: TweetRecord) -> dict:
    return {
        "id": record.id,
        "author": record.author,
        "timestamp": record.timestamp.isoformat(),
        "text": record.text,
        "mentions": ",".join(sorted(record.mentions)),
    }


def write_corpus(records: Iterable[TweetRecord], fh: TextIO) -> None:
    for record in records:
        fh.write(json.dumps(record_to_obj(record), ensure_ascii=False, sort_keys=True))
        fh.write("\n")


def normalize_text(text: str) -> str:
    """Key used for author+text duplicate detection."""
    text = unicodedata.normalize("NFC", text).lower()
    return _WS.sub(" ", text).strip()


def dedup(records: Sequence[TweetRecord]) -> list[TweetRecord]:
    """Drop repeated ids and repeated (author, normalized text) pairs.

    Records are considered in (timestamp, id) order and the first one wins,
    so the result is sorted the same way.
    """
    ordered = sorted(records, key=lambda r: (r.timestamp, r.id))
    seen_ids: set[str] = set()
    seen_posts: set[tuple[str, str]] = set()
    kept = []
    for record in ordered:
        post = (record.author, normalize_text(record.text))
        if record.id in seen_ids or post in seen_posts:
            continue
        seen_ids.add(record.id)
        seen_posts.add(post)
        kept.append(record)
    return kept


def _as_utc(ts: datetime) -> datetime:
    if ts.tzinfo is None:
        return ts.replace(tzinfo=timezone.utc)
    return ts


def filter_window(records: Iterable[TweetRecord], start: datetime, end: datetime) -> list[TweetRecord]:
    """Keep records with ``start <= timestamp <= end`` (both inclusive)."""
    start, end = _as_utc(start), _as_utc(end)
    if start > end:
        raise ConfigError(f"window start {start.isoformat()} is after end {end.isoformat()}")
    return [r for r in records if start <= r.timestamp <= end]


def _fold(text: str) -> str:
    return unicodedata.normalize("NFC", text).casefold()


def tag_candidates(record: TweetRecord, specs: Sequence[CandidateSpec]) -> TweetRecord:
    """Return a copy of ``record`` whose mentions are the matching candidate ids."""
    if not specs:
        raise ConfigError("no candidate specs to tag against")
    text = _fold(record.text)
    mentions = frozenset(
        spec.id for spec in specs if any(_fold(p) in text for p in spec.name_patterns)
    )
    return dataclasses.replace(record, mentions=mentions)
