"""Per-band, per-candidate support and normalised election shares."""

from __future__ import annotations

import csv
import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .census import CensusTable, off_twitter_share, partition
from .corpus import CandidateSpec
from .errors import DataError
from .support import SupportCurve


@dataclass(frozen=True)
class PartyLine:
    group: str
    shares: Mapping[str, float]


@dataclass(frozen=True)
class CandidateSupportCell:
    band: str
    candidate: str
    group: str
    twitter_part: float
    nontwitter_online_part: float
    offline_part: float

    @property
    def total(self) -> float:
        return self.twitter_part + self.nontwitter_online_part + self.offline_part

    @property
    def off_twitter_part(self) -> float:
        return self.nontwitter_online_part + self.offline_part


@dataclass(frozen=True)
class OffTwitterRow:
    band: str
    party: float
    opposition: float


@dataclass(frozen=True)
class OffTwitterTable:
    rows: tuple[OffTwitterRow, ...]

    @property
    def party_total(self) -> float:
        return math.fsum(r.party for r in self.rows)

    @property
    def opposition_total(self) -> float:
        return math.fsum(r.opposition for r in self.rows)


@dataclass(frozen=True)
class Comparison:
    actual: Mapping[str, float]
    delta: Mapping[str, float]
    mean_abs_error: float


@dataclass(frozen=True)
class PredictionReport:
    """All fractions are of the national population, or of the vote for ``election``."""

    cells: tuple[CandidateSupportCell, ...]
    candidates: tuple[str, ...]
    total_pop: Mapping[str, float]
    election: Mapping[str, float]
    comparison: Comparison | None = None


def party_lines(curve: SupportCurve, groups: Sequence[str]) -> list[PartyLine]:
    """Band shares for each party line.

    With two groups the first follows the curve and the second takes the
    remainder. A single group holds the whole band.
    """
    if len(groups) == 1:
        return [PartyLine(groups[0], {label: 1.0 for label in curve.labels})]
    if len(groups) != 2:
        raise DataError(f"party-line model needs one or two groups, got {len(groups)}")
    party, opposition = groups
    return [
        PartyLine(party, curve.as_dict()),
        PartyLine(opposition, {label: 1.0 - p for label, p in curve.entries}),
    ]


def component_support(
    census: CensusTable,
    band_label: str,
    candidate: str,
    group: str,
    share: float,
    split: float,
) -> CandidateSupportCell:
    """Support for one candidate in one band, split by how voters are reached.

    ``share`` is the band's support for the candidate's party line and
    ``split`` the candidate's within-group sentiment share. The same split
    applies to all three population segments.
    """
    if not census.is_voting(band_label):
        raise DataError(f"band {band_label!r} is below the voting floor {census.voting_floor_label!r}")
    part = partition(census.band(band_label))
    k = share * split
    return CandidateSupportCell(
        band=band_label,
        candidate=candidate,
        group=group,
        twitter_part=part.online_social * k,
        nontwitter_online_part=part.online_nonsocial * k,
        offline_part=part.offline * k,
    )


def project(
    census: CensusTable,
    curve: SupportCurve,
    splits: Mapping[str, float],
    specs: Sequence[CandidateSpec],
    groups: Sequence[str] | None = None,
) -> list[CandidateSupportCell]:
    """Cells for every voting band times every candidate.

    ``groups`` orders the party lines (first follows the curve); it defaults
    to the order groups first appear in ``specs``.
    """
    if groups is None:
        groups = list(dict.fromkeys(s.group for s in specs))
    voting = [b.label for b in census.voting_bands()]
    if curve.labels != voting:
        raise DataError(
            f"support curve bands {curve.labels} do not match census voting bands {voting}"
        )
    lines = {pl.group: pl.shares for pl in party_lines(curve, groups)}
    missing = [s.id for s in specs if s.id not in splits]
    if missing:
        raise DataError(f"no sentiment split for candidates: {', '.join(missing)}")
    cells = []
    for label in voting:
        for spec in specs:
            if spec.group not in lines:
                raise DataError(f"candidate {spec.id!r} belongs to unknown group {spec.group!r}")
            cells.append(component_support(
                census, label, spec.id, spec.group, lines[spec.group][label], splits[spec.id]
            ))
    return cells


def off_twitter_party_table(census: CensusTable, curve: SupportCurve) -> OffTwitterTable:
    support = curve.as_dict()
    rows = []
    for band in census.voting_bands():
        if band.label not in support:
            raise DataError(f"support curve has no value for band {band.label!r}")
        share = off_twitter_share(band)
        p = support[band.label]
        rows.append(OffTwitterRow(band.label, share * p, share * (1.0 - p)))
    return OffTwitterTable(tuple(rows))


def total_support(cells: Sequence[CandidateSupportCell]) -> PredictionReport:
    """Sum cells over bands per candidate and normalise to election shares."""
    if not cells:
        raise DataError("no support cells to aggregate")
    candidates = tuple(dict.fromkeys(c.candidate for c in cells))
    bands = tuple(dict.fromkeys(c.band for c in cells))
    seen = {(c.band, c.candidate) for c in cells}
    if len(seen) != len(cells) or len(seen) != len(bands) * len(candidates):
        raise DataError("support cells do not form a complete band x candidate grid")
    # fsum makes the totals independent of cell order
    totals = {
        cand: math.fsum(c.total for c in cells if c.candidate == cand) for cand in candidates
    }
    grand = math.fsum(totals.values())
    if not grand > 0:
        raise DataError("all candidate totals are zero; cannot normalise")
    election = {cand: totals[cand] / grand for cand in candidates}
    return PredictionReport(tuple(cells), candidates, totals, election)


def compare(report: PredictionReport, actuals: Mapping[str, float]) -> PredictionReport:
    """Attach predicted-minus-actual deltas (fractions) and their mean absolute value."""
    missing = [c for c in report.candidates if c not in actuals]
    if missing:
        raise DataError(f"no actual result for candidates: {', '.join(missing)}")
    delta = {c: report.election[c] - actuals[c] for c in report.candidates}
    mae = math.fsum(abs(d) for d in delta.values()) / len(delta)
    comparison = Comparison({c: actuals[c] for c in report.candidates}, delta, mae)
    return dataclasses.replace(report, comparison=comparison)


def load_actuals(path: str | Path) -> dict[str, float]:
    """Read ``candidate,actual_pct`` rows; values are percentages."""
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(line for line in fh if not line.lstrip().startswith("#"))
            if not {"candidate", "actual_pct"} <= set(reader.fieldnames or ()):
                raise DataError(f"actuals {path}: needs candidate and actual_pct columns")
            actuals = {}
            for n, rec in enumerate(reader, start=1):
                try:
                    actuals[rec["candidate"].strip()] = float(rec["actual_pct"].rstrip("% ")) / 100.0
                except ValueError:
                    raise DataError(f"actuals {path} row {n}: bad actual_pct") from None
    except OSError as exc:
        raise DataError(f"cannot read actuals {path}: {exc}") from exc
    return actuals


PREDICTION_COLUMNS = (
    "band", "candidate", "group", "twitter_pct", "nontwitter_online_pct", "offline_pct", "total_pct",
)


def _pct(x: float, places: int = 2) -> str:
    return f"{x * 100:.{places}f}"


def write_prediction_csv(path: str | Path, report: PredictionReport) -> None:
    """Cells first, then footer rows keyed by the ``band`` column."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(PREDICTION_COLUMNS)
        for c in report.cells:
            w.writerow([c.band, c.candidate, c.group, _pct(c.twitter_part),
                        _pct(c.nontwitter_online_part), _pct(c.offline_part), _pct(c.total)])
        for cand in report.candidates:
            w.writerow(["Total Pop %", cand, "", "", "", "", _pct(report.total_pop[cand])])
        for cand in report.candidates:
            w.writerow(["Election %", cand, "", "", "", "", _pct(report.election[cand])])
        cmp = report.comparison
        if cmp is not None:
            for cand in report.candidates:
                w.writerow(["Actual %", cand, "", "", "", "", _pct(cmp.actual[cand])])
            for cand in report.candidates:
                w.writerow(["Delta pp", cand, "", "", "", "", _pct(cmp.delta[cand])])
            w.writerow(["MAE pp", "", "", "", "", "", _pct(cmp.mean_abs_error)])


def format_summary(report: PredictionReport) -> str:
    """Plain-text table: off-twitter, twitter and overall support per band."""
    cands = report.candidates
    by_key = {(c.band, c.candidate): c for c in report.cells}
    bands = list(dict.fromkeys(c.band for c in report.cells))
    width = max([len("Total Pop %")] + [len(b) for b in bands])

    def row(label, values):
        return f"{label:<{width}}  " + " ".join(f"{v:>7}" for v in values)

    lines = [row("", [f"off:{c}" for c in cands] + [f"on:{c}" for c in cands] + [f"all:{c}" for c in cands])]
    for band in bands:
        cells = [by_key[(band, c)] for c in cands]
        lines.append(row(band, [_pct(x.off_twitter_part) for x in cells]
                         + [_pct(x.twitter_part) for x in cells]
                         + [_pct(x.total) for x in cells]))
    blank = [""] * (2 * len(cands))
    lines.append(row("Total Pop %", blank + [_pct(report.total_pop[c]) for c in cands]))
    lines.append(row("Election %", blank + [_pct(report.election[c], 1) for c in cands]))
    cmp = report.comparison
    if cmp is not None:
        lines.append("")
        lines.append(f"{'':<10} {'Predicted':>10} {'Actual':>10} {'Delta pp':>10}")
        for c in cands:
            lines.append(f"{c:<10} {_pct(report.election[c]):>10} {_pct(cmp.actual[c]):>10} {_pct(cmp.delta[c]):>10}")
        lines.append(f"mean absolute error: {_pct(cmp.mean_abs_error)} pp")
    return "\n".join(lines)
