"""Monotone per-band party support curves with a fixed national mean.

The feasible set (strictly increasing with age, inside (0, 1), weighted mean
equal to the target) has many members. Solutions are picked from a
one-parameter family whose scale is found by bisection on the mean.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .census import CensusTable, off_twitter_share
from .errors import DataError, InfeasibleError

DEFAULT_TARGET = 0.60
DEFAULT_RATIO = 1.0617
DEFAULT_STEP = 0.039
MARGIN = 1e-9
MEAN_TOL = 1e-12
MAX_BISECT = 400
FAMILIES = ("geometric", "arithmetic")
BASES = ("off_twitter", "population")


@dataclass(frozen=True)
class SupportCurve:
    entries: tuple[tuple[str, float], ...]
    target_mean: float
    family: str
    family_params: Mapping[str, float] = field(default_factory=dict)
    basis: str = "off_twitter"

    @property
    def labels(self) -> list[str]:
        return [label for label, _ in self.entries]

    @property
    def values(self) -> list[float]:
        return [p for _, p in self.entries]

    def as_dict(self) -> dict[str, float]:
        return dict(self.entries)


@dataclass(frozen=True)
class MonotoneViolation:
    index: int
    labels: tuple[str, ...]
    values: tuple[float, ...]
    reason: str

    def __str__(self):
        return f"{self.reason} at {' / '.join(self.labels)}"


def band_weights(census: CensusTable, basis: str = "off_twitter") -> list[tuple[str, float]]:
    """Per voting band weight used in the national mean.

    ``population`` weights by population share. ``off_twitter`` weights by the
    share not on social media, the part of each band whose party split the
    national figure describes.
    """
    if basis == "population":
        return [(b.label, b.pop_share) for b in census.voting_bands()]
    if basis == "off_twitter":
        return [(b.label, off_twitter_share(b)) for b in census.voting_bands()]
    raise ValueError(f"unknown weighting basis {basis!r}; expected one of {BASES}")


def _shape(family: str, params: Mapping[str, float]):
    """Return ``(f, param)`` with P_i = f(a, i) for scale ``a`` and band index ``i``."""
    if family == "geometric":
        r = float(params.get("ratio", DEFAULT_RATIO))
        if not r > 1.0:
            raise InfeasibleError(f"geometric ratio {r} must exceed 1 for strictly increasing support")
        return (lambda a, i: a * r ** i), r
    if family == "arithmetic":
        d = float(params.get("step", DEFAULT_STEP))
        if not d > 0.0:
            raise InfeasibleError(f"arithmetic step {d} must be positive for strictly increasing support")
        return (lambda a, i: a + d * i), d
    raise ValueError(f"unknown support family {family!r}; expected one of {FAMILIES}")


def _scale_bounds(family: str, param: float, n: int) -> tuple[float, float]:
    # a range over which first band >= MARGIN and last band <= 1 - MARGIN
    if family == "geometric":
        return MARGIN, (1.0 - MARGIN) / param ** (n - 1)
    return MARGIN, 1.0 - MARGIN - param * (n - 1)


def _mean(values: Sequence[float], weights: Sequence[float]) -> float:
    return math.fsum(v * w for v, w in zip(values, weights)) / math.fsum(weights)


def solve_support(
    census: CensusTable,
    target_mean: float = DEFAULT_TARGET,
    family: str = "geometric",
    params: Mapping[str, float] | None = None,
    basis: str = "off_twitter",
) -> SupportCurve:
    """Find the family member whose weighted mean over voting bands hits the target."""
    if not 0.0 < target_mean < 1.0:
        raise DataError(f"target mean {target_mean} outside (0, 1)")
    params = dict(params or {})
    weighted = band_weights(census, basis)
    if not weighted:
        raise DataError("census has no voting-age bands")
    labels = [label for label, _ in weighted]
    weights = [w for _, w in weighted]
    if math.fsum(weights) <= 0:
        raise DataError(f"voting-age bands have zero total {basis} weight")
    n = len(labels)
    f, param = _shape(family, params)
    if family == "geometric":
        params.setdefault("ratio", param)
    else:
        params.setdefault("step", param)

    if n == 1:
        return SupportCurve(((labels[0], target_mean),), target_mean, family, params, basis)

    lo, hi = _scale_bounds(family, param, n)
    top, bottom = labels[-1], labels[0]
    if hi < lo:
        raise InfeasibleError(
            f"{family} parameter {param} cannot fit {n} bands: P[{top}] < 1 forces P[{bottom}] <= 0"
        )

    def mean_at(a):
        return _mean([f(a, i) for i in range(n)], weights)

    if mean_at(hi) < target_mean - MEAN_TOL:
        raise InfeasibleError(
            f"upper bound P[{top}] < 1 is reached at mean {mean_at(hi):.6f} before target {target_mean}"
        )
    if mean_at(lo) > target_mean + MEAN_TOL:
        raise InfeasibleError(
            f"lower bound P[{bottom}] > 0 forces mean {mean_at(lo):.6f} above target {target_mean}"
        )
    a = 0.5 * (lo + hi)
    for _ in range(MAX_BISECT):
        a = 0.5 * (lo + hi)
        m = mean_at(a)
        if abs(m - target_mean) <= MEAN_TOL:
            break
        if m < target_mean:
            lo = a
        else:
            hi = a
    entries = tuple((label, f(a, i)) for i, label in enumerate(labels))
    return SupportCurve(entries, target_mean, family, params, basis)


def weighted_mean(curve: SupportCurve, census: CensusTable, basis: str | None = None) -> float:
    """Weighted mean of the curve; uses the curve's own basis unless overridden."""
    weighted = dict(band_weights(census, basis or curve.basis))
    extra = [label for label in curve.labels if label not in weighted]
    if extra:
        raise DataError(f"curve bands not among census voting bands: {', '.join(extra)}")
    return _mean(curve.values, [weighted[label] for label in curve.labels])


def validate_monotone(curve: SupportCurve, margin: float = MARGIN) -> MonotoneViolation | None:
    """First bound or ordering problem scanning from the youngest band, or None."""
    entries = curve.entries
    for i, (label, p) in enumerate(entries):
        if not margin <= p <= 1.0 - margin:
            return MonotoneViolation(i, (label,), (p,), "value outside (0, 1)")
        if i > 0:
            prev_label, prev = entries[i - 1]
            if p < prev + margin:
                return MonotoneViolation(i - 1, (prev_label, label), (prev, p), "not strictly increasing")
    return None


def _format_params(params: Mapping[str, float]) -> str:
    return ",".join(f"{k}={params[k]!r}" for k in sorted(params))


def write_support_csv(path: str | Path, curve: SupportCurve) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# family: {curve.family}\n")
        fh.write(f"# params: {_format_params(curve.family_params)}\n")
        fh.write(f"# target: {curve.target_mean!r}\n")
        fh.write(f"# basis: {curve.basis}\n")
        fh.write("label,support\n")
        for label, p in curve.entries:
            fh.write(f"{label},{p:.6f}\n")


def read_support_csv(path: str | Path) -> SupportCurve:
    meta: dict[str, str] = {}
    entries = []
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except (OSError, UnicodeDecodeError) as exc:
        raise DataError(f"cannot read support file {path}: {exc}") from exc
    header_seen = False
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            meta[key.strip()] = value.strip()
            continue
        if not header_seen:
            if line.strip() != "label,support":
                raise DataError(f"support file {path} line {lineno}: expected header 'label,support'")
            header_seen = True
            continue
        label, sep, value = line.rpartition(",")
        try:
            entries.append((label.strip(), float(value)))
        except ValueError:
            raise DataError(f"support file {path} line {lineno}: bad value {value!r}") from None
    if not entries:
        raise DataError(f"support file {path} has no bands")
    params = {}
    for item in filter(None, meta.get("params", "").split(",")):
        k, _, v = item.partition("=")
        params[k.strip()] = float(v)
    try:
        target = float(meta.get("target", "nan"))
    except ValueError:
        raise DataError(f"support file {path}: bad target") from None
    return SupportCurve(
        tuple(entries), target, meta.get("family", "unknown"), params, meta.get("basis", "off_twitter")
    )
