"""Age-band census tables and their online / social-media partitions."""

from __future__ import annotations

import csv
import dataclasses
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import DataError

DEFAULT_VOTING_FLOOR = "20 - 24"
CENSUS_COLUMNS = ("label", "population_thousands", "literacy_pct", "social_media_pct")

_RANGE = re.compile(r"^\s*(\d+)\s*-\s*(\d+)\s*$")
_OPEN = re.compile(r"^\s*(\d+)\s*(?:\+|&\s*over|and\s*over)\s*$", re.IGNORECASE)


def parse_band_label(label: str) -> tuple[int, int | None]:
    """``"20 - 24"`` -> ``(20, 24)``; ``"85 & Over"`` -> ``(85, None)``."""
    m = _RANGE.match(label)
    if m:
        lower, upper = int(m.group(1)), int(m.group(2))
        if upper < lower:
            raise ValueError(f"band {label!r} has upper < lower")
        return lower, upper
    m = _OPEN.match(label)
    if m:
        return int(m.group(1)), None
    raise ValueError(f"unrecognised age band label {label!r}")


@dataclass(frozen=True)
class AgeBand:
    label: str
    lower: int
    upper: int | None
    population: float
    pop_share: float
    literacy: float
    social_media: float | None

    def require_social_media(self) -> float:
        if self.social_media is None:
            raise DataError(f"band {self.label!r} has no social-media rate")
        return self.social_media


@dataclass(frozen=True)
class BandPartition:
    """A band's population split three ways, as fractions of the national total."""

    label: str
    offline: float
    online_nonsocial: float
    online_social: float

    @property
    def online(self) -> float:
        return self.online_nonsocial + self.online_social


@dataclass(frozen=True)
class CensusTable:
    bands: tuple[AgeBand, ...]
    voting_floor_label: str = DEFAULT_VOTING_FLOOR

    def __post_init__(self):
        labels = [b.label for b in self.bands]
        if self.voting_floor_label not in labels:
            raise DataError(f"voting floor band {self.voting_floor_label!r} not in census")

    def band(self, label: str) -> AgeBand:
        for b in self.bands:
            if b.label == label:
                return b
        raise KeyError(label)

    @property
    def floor_index(self) -> int:
        return [b.label for b in self.bands].index(self.voting_floor_label)

    def voting_bands(self) -> tuple[AgeBand, ...]:
        return self.bands[self.floor_index:]

    def is_voting(self, label: str) -> bool:
        return label in {b.label for b in self.voting_bands()}

    def voting_share(self) -> float:
        return math.fsum(b.pop_share for b in self.voting_bands())


def _fraction(value: str, what: str) -> float | None:
    value = value.strip().rstrip("%").strip()
    if not value:
        return None
    frac = float(value) / 100.0
    if not math.isfinite(frac) or not 0.0 <= frac <= 1.0:
        raise ValueError(f"{what} {value}% outside [0, 100]")
    return frac


def build_census(rows: Sequence[Mapping[str, object]], voting_floor_label: str = DEFAULT_VOTING_FLOOR) -> CensusTable:
    """Validate raw rows and compute population shares from the raw counts.

    Each row needs ``label``, ``population`` (any unit), ``literacy`` and
    ``social_media`` as fractions; ``social_media`` may be ``None``.
    """
    if not rows:
        raise DataError("census has no bands")
    parsed = []
    for n, row in enumerate(rows, start=1):
        label = str(row["label"]).strip()
        try:
            lower, upper = parse_band_label(label)
        except ValueError as exc:
            raise DataError(f"census row {n}: {exc}") from None
        population = float(row["population"])
        if not math.isfinite(population) or population < 0:
            raise DataError(f"census row {n}: population must be >= 0")
        literacy = float(row["literacy"])
        social = row.get("social_media")
        social = None if social is None else float(social)
        for name, v in (("literacy", literacy), ("social media rate", social)):
            if v is not None and not 0.0 <= v <= 1.0:
                raise DataError(f"census row {n}: {name} {v} outside [0, 1]")
        if parsed:
            prev = parsed[-1]
            if prev[2] is None or lower <= prev[2] or lower <= prev[1]:
                raise DataError(f"census row {n}: band {label!r} overlaps or precedes {prev[0]!r}")
        parsed.append((label, lower, upper, population, literacy, social))
    if len({p[0] for p in parsed}) != len(parsed):
        raise DataError("census has duplicate band labels")
    total = math.fsum(p[3] for p in parsed)
    if total <= 0:
        raise DataError("census total population is zero")
    bands = tuple(
        AgeBand(label, lower, upper, pop, pop / total, lit, soc)
        for label, lower, upper, pop, lit, soc in parsed
    )
    return CensusTable(bands, voting_floor_label)


def _data_lines(fh: Iterable[str]) -> Iterable[str]:
    for line in fh:
        if not line.lstrip().startswith("#"):
            yield line


def load_census(path: str | Path, voting_floor_label: str = DEFAULT_VOTING_FLOOR) -> CensusTable:
    """Read a census CSV (``#`` comment lines allowed above the header).

    ``social_media_pct`` may be left blank for bands whose rate is unknown;
    those bands cannot be partitioned.
    """
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(_data_lines(fh))
            missing = [c for c in CENSUS_COLUMNS if c not in (reader.fieldnames or ())]
            if missing:
                raise DataError(f"census {path}: missing columns {', '.join(missing)}")
            rows = []
            for n, rec in enumerate(reader, start=1):
                try:
                    population = float(rec["population_thousands"].replace(",", ""))
                    literacy = _fraction(rec["literacy_pct"], "literacy")
                    social = _fraction(rec["social_media_pct"] or "", "social media rate")
                except (ValueError, AttributeError) as exc:
                    raise DataError(f"census {path} row {n}: {exc}") from None
                if literacy is None:
                    raise DataError(f"census {path} row {n}: literacy_pct is blank")
                rows.append({"label": rec["label"], "population": population,
                             "literacy": literacy, "social_media": social})
    except OSError as exc:
        raise DataError(f"cannot read census {path}: {exc}") from exc
    return build_census(rows, voting_floor_label)


def load_survey(path: str | Path) -> dict[str, float]:
    """Read per-band social-media rates (columns ``label``, ``social_media_pct``)."""
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(_data_lines(fh))
            if not {"label", "social_media_pct"} <= set(reader.fieldnames or ()):
                raise DataError(f"survey {path}: needs label and social_media_pct columns")
            rates = {}
            for n, rec in enumerate(reader, start=1):
                try:
                    rate = _fraction(rec["social_media_pct"], "social media rate")
                except ValueError as exc:
                    raise DataError(f"survey {path} row {n}: {exc}") from None
                if rate is None:
                    raise DataError(f"survey {path} row {n}: blank social_media_pct")
                rates[rec["label"].strip()] = rate
    except OSError as exc:
        raise DataError(f"cannot read survey {path}: {exc}") from exc
    return rates


def apply_survey(census: CensusTable, rates: Mapping[str, float]) -> CensusTable:
    unknown = set(rates) - {b.label for b in census.bands}
    if unknown:
        raise DataError(f"survey bands not in census: {', '.join(sorted(unknown))}")
    bands = tuple(
        dataclasses.replace(b, social_media=rates[b.label]) if b.label in rates else b
        for b in census.bands
    )
    return dataclasses.replace(census, bands=bands)


def partition(band: AgeBand) -> BandPartition:
    x, lit = band.pop_share, band.literacy
    social = band.require_social_media()
    return BandPartition(
        label=band.label,
        offline=x * (1.0 - lit),
        online_nonsocial=x * lit * (1.0 - social),
        online_social=x * lit * social,
    )


def off_twitter_share(band: AgeBand) -> float:
    """Fraction of the national population in this band that is not on social media."""
    p = partition(band)
    return p.offline + p.online_nonsocial
