"""Pipeline configuration file (TOML)."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from datetime import date, datetime, time, timezone
from pathlib import Path
from typing import Any, Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .census import DEFAULT_VOTING_FLOOR
from .corpus import CandidateSpec, parse_timestamp
from .errors import ConfigError
from .sentiment import DEFAULT_MAX_PHRASE_LEN
from .support import BASES, DEFAULT_TARGET, FAMILIES

PATH_KEYS = (
    "tweets", "corpus", "lexicon", "census", "survey", "injection",
    "actuals", "sentiment", "support", "tables", "prediction",
)


@dataclass(frozen=True)
class PipelineConfig:
    candidates: tuple[CandidateSpec, ...]
    window_start: datetime | None = None
    window_end: datetime | None = None
    target_mean: float = DEFAULT_TARGET
    family: str = "geometric"
    family_params: Mapping[str, float] = field(default_factory=dict)
    basis: str = "off_twitter"
    voting_floor_label: str = DEFAULT_VOTING_FLOOR
    party_group: str | None = None
    max_phrase_len: int = DEFAULT_MAX_PHRASE_LEN
    paths: Mapping[str, Path] = field(default_factory=dict)

    @property
    def groups(self) -> list[str]:
        """Group ids, party line first."""
        groups = list(dict.fromkeys(c.group for c in self.candidates))
        if self.party_group is not None:
            groups.remove(self.party_group)
            groups.insert(0, self.party_group)
        return groups

    def path(self, key: str) -> Path | None:
        return self.paths.get(key)


def _window_bound(value: Any, *, end: bool) -> datetime:
    """Dates widen to the whole day; datetimes are used as given (UTC if naive)."""
    if isinstance(value, datetime):
        return value if value.tzinfo else value.replace(tzinfo=timezone.utc)
    if isinstance(value, date):
        return datetime.combine(value, time.max if end else time.min, tzinfo=timezone.utc)
    if isinstance(value, str):
        text = value.strip()
        try:
            if len(text) == 10:
                return _window_bound(date.fromisoformat(text), end=end)
            return parse_timestamp(text)
        except ValueError:
            raise ConfigError(f"bad window bound {value!r}") from None
    raise ConfigError(f"bad window bound {value!r}")


def _candidates(raw: Any) -> tuple[CandidateSpec, ...]:
    if not isinstance(raw, list) or not raw:
        raise ConfigError("config needs at least one [[candidates]] entry")
    specs = []
    for n, item in enumerate(raw, start=1):
        if not isinstance(item, dict):
            raise ConfigError(f"candidate entry {n} is not a table")
        patterns = item.get("name_patterns", [])
        if isinstance(patterns, str):
            patterns = [patterns]
        specs.append(CandidateSpec(str(item.get("id", "")), str(item.get("group", "")), tuple(patterns)))
    ids = [s.id for s in specs]
    dupes = sorted({i for i in ids if ids.count(i) > 1})
    if dupes:
        raise ConfigError(f"duplicate candidate ids: {', '.join(dupes)}")
    return tuple(specs)


def parse_config(data: Mapping[str, Any], base_dir: Path | str = ".",
                 overrides: Mapping[str, str | Path | None] | None = None) -> PipelineConfig:
    base_dir = Path(base_dir)
    candidates = _candidates(data.get("candidates"))
    groups = list(dict.fromkeys(c.group for c in candidates))
    if len(groups) > 2:
        raise ConfigError(f"party-line model supports at most two groups, got {len(groups)}: {groups}")

    window = data.get("window", {})
    start = _window_bound(window["start"], end=False) if "start" in window else None
    end = _window_bound(window["end"], end=True) if "end" in window else None
    if start and end and start > end:
        raise ConfigError(f"window start {start.isoformat()} is after end {end.isoformat()}")

    model = data.get("model", {})
    target = float(model.get("target_mean", DEFAULT_TARGET))
    if not 0.0 < target < 1.0:
        raise ConfigError(f"model.target_mean {target} must lie in (0, 1)")
    family = model.get("family", "geometric")
    if family not in FAMILIES:
        raise ConfigError(f"model.family {family!r} not one of {FAMILIES}")
    basis = model.get("basis", "off_twitter")
    if basis not in BASES:
        raise ConfigError(f"model.basis {basis!r} not one of {BASES}")
    try:
        params = {str(k): float(v) for k, v in model.get("params", {}).items()}
    except (TypeError, ValueError):
        raise ConfigError("model.params values must be numbers") from None
    party_group = model.get("party_group")
    if party_group is not None:
        party_group = str(party_group)
        if party_group not in groups:
            raise ConfigError(f"model.party_group {party_group!r} is not a candidate group {groups}")
    max_phrase_len = model.get("max_phrase_len", DEFAULT_MAX_PHRASE_LEN)
    if not isinstance(max_phrase_len, int) or max_phrase_len < 1:
        raise ConfigError("model.max_phrase_len must be a positive integer")

    raw_paths = dict(data.get("paths", {}))
    unknown = sorted(set(raw_paths) - set(PATH_KEYS))
    if unknown:
        raise ConfigError(f"unknown [paths] keys: {', '.join(unknown)}")
    paths = {k: base_dir / str(v) for k, v in raw_paths.items()}
    for k, v in (overrides or {}).items():
        if v is not None:
            paths[k] = Path(v)

    return PipelineConfig(
        candidates=candidates,
        window_start=start,
        window_end=end,
        target_mean=target,
        family=family,
        family_params=params,
        basis=basis,
        voting_floor_label=str(model.get("voting_floor_label", DEFAULT_VOTING_FLOOR)),
        party_group=party_group,
        max_phrase_len=max_phrase_len,
        paths=paths,
    )


def load_config(path: str | Path, overrides: Mapping[str, str | Path | None] | None = None) -> PipelineConfig:
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config {path} is not valid TOML: {exc}") from exc
    return parse_config(data, path.parent, overrides)
