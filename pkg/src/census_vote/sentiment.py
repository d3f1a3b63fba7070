"""Lexicon scoring of tweets and per-group sentiment splits."""

from __future__ import annotations

import json
import math
import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corpus import CandidateSpec, TweetRecord
from .errors import DataError

DEFAULT_MAX_PHRASE_LEN = 3

# letters and digits (no underscore), plus hashtag and mention markers
_TOKEN = re.compile(r"(?:[^\W_]|[#@])+")


def tokenize(text: str) -> list[str]:
    text = unicodedata.normalize("NFC", text).lower()
    return _TOKEN.findall(text)


def normalize_term(term: str) -> str:
    return " ".join(tokenize(term))


@dataclass(frozen=True)
class Lexicon:
    """Term to polarity weight table. Multiword terms are space-joined tokens."""

    entries: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for term, weight in self.entries.items():
            if not term or term != normalize_term(term):
                raise DataError(f"lexicon term {term!r} is not normalized")
            if not math.isfinite(weight):
                raise DataError(f"lexicon weight for {term!r} is not finite")

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, float]) -> Lexicon:
        entries: dict[str, float] = {}
        for raw, weight in mapping.items():
            term = normalize_term(raw)
            if not term:
                raise DataError(f"lexicon term {raw!r} has no tokens")
            if term in entries:
                raise DataError(f"duplicate lexicon term {term!r}")
            entries[term] = float(weight)
        return cls(entries)

    def __len__(self):
        return len(self.entries)

    def get(self, term: str) -> float | None:
        return self.entries.get(term)

    def scaled(self, factor: float) -> Lexicon:
        return Lexicon({t: w * factor for t, w in self.entries.items()})


def parse_lexicon(lines: Iterable[str]) -> Lexicon:
    """Parse tab-separated ``term<TAB>weight`` lines; ``#`` lines are comments."""
    entries: dict[str, float] = {}
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise DataError(f"lexicon line {lineno}: expected 2 tab-separated columns")
        raw, weight_text = parts
        term = normalize_term(raw)
        if not term:
            raise DataError(f"lexicon line {lineno}: empty term")
        if term in entries:
            raise DataError(f"lexicon line {lineno}: duplicate term {term!r}")
        try:
            weight = float(weight_text)
        except ValueError:
            raise DataError(f"lexicon line {lineno}: bad weight {weight_text!r}") from None
        if not math.isfinite(weight):
            raise DataError(f"lexicon line {lineno}: weight is not finite")
        entries[term] = weight
    return Lexicon(entries)


def load_lexicon(path: str | Path) -> Lexicon:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_lexicon(fh)
    except (OSError, UnicodeDecodeError) as exc:
        raise DataError(f"cannot read lexicon {path}: {exc}") from exc


def score_tweet(tokens: Sequence[str], lexicon: Lexicon, max_phrase_len: int = DEFAULT_MAX_PHRASE_LEN) -> float:
    """Sum lexicon weights over a greedy longest-first, left-to-right match.

    Each token is consumed by at most one match; unmatched tokens are skipped.
    """
    if max_phrase_len < 1:
        raise ValueError("max_phrase_len must be >= 1")
    total = 0.0
    i, n = 0, len(tokens)
    while i < n:
        for width in range(min(max_phrase_len, n - i), 0, -1):
            weight = lexicon.get(" ".join(tokens[i:i + width]))
            if weight is not None:
                total += weight
                i += width
                break
        else:
            i += 1
    return total


@dataclass(frozen=True)
class SentimentTally:
    candidate: str
    value: float
    tweet_count: int = 0

    def __post_init__(self):
        if self.value < 0 or self.tweet_count < 0:
            raise ValueError(f"negative tally for {self.candidate!r}")


@dataclass(frozen=True)
class GroupSplit:
    group: str
    splits: dict[str, float]


def attribute(scored: Iterable[tuple[TweetRecord, float]], specs: Sequence[CandidateSpec]) -> list[SentimentTally]:
    """Accrue each tweet's score to every candidate it mentions.

    Tweets with no mentions, and tweets mentioning every candidate, carry no
    discriminating signal and are dropped. Net-negative totals floor at 0.
    """
    ids = [s.id for s in specs]
    known = frozenset(ids)
    scores: dict[str, list[float]] = {c: [] for c in ids}
    for record, score in scored:
        mentioned = record.mentions & known
        if not mentioned:
            continue
        if len(known) > 1 and mentioned == known:
            continue
        for c in mentioned:
            scores[c].append(score)
    # fsum is exactly rounded, so the tally does not depend on record order
    return [
        SentimentTally(c, max(math.fsum(scores[c]), 0.0), len(scores[c]))
        for c in ids
    ]


def tallies_from_values(values: Mapping[str, float], specs: Sequence[CandidateSpec]) -> list[SentimentTally]:
    """Build tallies from precomputed per-candidate sentiment values."""
    missing = [s.id for s in specs if s.id not in values]
    if missing:
        raise DataError(f"no sentiment value for candidates: {', '.join(missing)}")
    return [SentimentTally(s.id, max(float(values[s.id]), 0.0), 0) for s in specs]


def groups_of(specs: Sequence[CandidateSpec]) -> dict[str, list[str]]:
    groups: dict[str, list[str]] = {}
    for spec in specs:
        groups.setdefault(spec.group, []).append(spec.id)
    return groups


def group_split(tallies: Sequence[SentimentTally], specs: Sequence[CandidateSpec]) -> list[GroupSplit]:
    """Within-group share of sentiment for each candidate.

    A group whose total is zero is split equally among its members.
    """
    values = {t.candidate: t.value for t in tallies}
    missing = [s.id for s in specs if s.id not in values]
    if missing:
        raise DataError(f"no tally for candidates: {', '.join(missing)}")
    result = []
    for group, members in groups_of(specs).items():
        total = math.fsum(values[c] for c in members)
        if total > 0:
            splits = {c: values[c] / total for c in members}
        else:
            splits = {c: 1.0 / len(members) for c in members}
        result.append(GroupSplit(group, splits))
    return result


def split_lookup(splits: Iterable[GroupSplit]) -> dict[str, float]:
    return {c: e for g in splits for c, e in g.splits.items()}


def parse_injection(lines: Iterable[str]) -> dict[str, float]:
    """Parse ``ID=value`` lines of precomputed sentiment values."""
    values: dict[str, float] = {}
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, raw = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise DataError(f"injection line {lineno}: expected ID=value")
        if key in values:
            raise DataError(f"injection line {lineno}: duplicate candidate {key!r}")
        try:
            value = float(raw)
        except ValueError:
            raise DataError(f"injection line {lineno}: bad value {raw.strip()!r}") from None
        if not math.isfinite(value):
            raise DataError(f"injection line {lineno}: value is not finite")
        values[key] = value
    return values


def load_injection(path: str | Path) -> dict[str, float]:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_injection(fh)
    except (OSError, UnicodeDecodeError) as exc:
        raise DataError(f"cannot read injection file {path}: {exc}") from exc


def sentiment_to_obj(tallies: Sequence[SentimentTally], splits: Sequence[GroupSplit], source: str) -> dict:
    return {
        "source": source,
        "candidates": [
            {"id": t.candidate, "value": t.value, "tweet_count": t.tweet_count}
            for t in tallies
        ],
        "groups": [{"group": g.group, "splits": g.splits} for g in splits],
    }


def write_sentiment(path: str | Path, tallies, splits, source: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(sentiment_to_obj(tallies, splits, source), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_sentiment(path: str | Path) -> tuple[list[SentimentTally], list[GroupSplit]]:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
        tallies = [
            SentimentTally(c["id"], float(c["value"]), int(c["tweet_count"]))
            for c in obj["candidates"]
        ]
        splits = [
            GroupSplit(g["group"], {k: float(v) for k, v in g["splits"].items()})
            for g in obj["groups"]
        ]
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read sentiment file {path}: {exc}") from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed sentiment file {path}: {exc}") from exc
    return tallies, splits
