"""Command-line entry point: ``census-vote ingest|score|estimate|predict``."""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from .census import CensusTable, apply_survey, load_census, load_survey, partition
from .config import PATH_KEYS, PipelineConfig, load_config
from .corpus import dedup, filter_window, read_tweets, tag_candidates, write_corpus
from .errors import ConfigError, DataError
from .projection import (
    compare, format_summary, load_actuals, off_twitter_party_table, project,
    total_support, write_prediction_csv,
)
from .sentiment import (
    attribute, group_split, load_injection, load_lexicon, read_sentiment, score_tweet,
    split_lookup, tallies_from_values, tokenize, write_sentiment,
)
from .support import read_support_csv, solve_support, validate_monotone, weighted_mean, write_support_csv
from .synthetic import write_fixture

log = logging.getLogger("census_vote")

EXIT_USAGE = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _available(cfg: PipelineConfig, key: str) -> Path | None:
    path = cfg.path(key)
    return path if path is not None and path.exists() else None


def _require(cfg: PipelineConfig, key: str) -> Path:
    path = cfg.path(key)
    if path is None:
        raise ConfigError(f"config has no paths.{key} (or pass --{key})")
    if not path.exists():
        raise DataError(f"{key} file not found: {path}")
    return path


def _output(cfg: PipelineConfig, key: str, out: str | None) -> Path:
    path = Path(out) if out else cfg.path(key)
    if path is None:
        raise ConfigError(f"no output path: set paths.{key} or pass --out")
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _census(cfg: PipelineConfig) -> CensusTable:
    census = load_census(_require(cfg, "census"), cfg.voting_floor_label)
    if cfg.path("survey") is not None:
        census = apply_survey(census, load_survey(_require(cfg, "survey")))
    return census


def cmd_ingest(cfg: PipelineConfig, out: str | None) -> int:
    src = _require(cfg, "tweets")
    dest = _output(cfg, "corpus", out)
    records, errors = read_tweets(src)
    for err in errors:
        log.warning("%s: %s", src, err)
    n_read = len(records)
    if cfg.window_start is not None and cfg.window_end is not None:
        records = filter_window(records, cfg.window_start, cfg.window_end)
    n_window = len(records)
    records = [tag_candidates(r, cfg.candidates) for r in dedup(records)]
    with open(dest, "w", encoding="utf-8", newline="\n") as fh:
        write_corpus(records, fh)
    print(f"read {n_read} records ({len(errors)} rejected), {n_window} in window, "
          f"{len(records)} after dedup -> {dest}")
    return 0


def cmd_score(cfg: PipelineConfig, out: str | None) -> int:
    injection = _available(cfg, "injection")
    corpus = _available(cfg, "corpus")
    if injection is None and corpus is None:
        raise DataError("neither a sentiment injection file nor a cleaned corpus is available")
    dest = _output(cfg, "sentiment", out)
    if injection is not None:
        tallies = tallies_from_values(load_injection(injection), cfg.candidates)
        source = "injection"
    else:
        if cfg.path("injection") is not None:
            log.warning("injection file %s not found; scoring corpus instead", cfg.path("injection"))
        lexicon = load_lexicon(_require(cfg, "lexicon"))
        if not len(lexicon):
            log.warning("lexicon %s is empty; every tweet scores 0", cfg.path("lexicon"))
        records, errors = read_tweets(corpus)
        for err in errors:
            log.warning("%s: %s", corpus, err)
        scored = []
        for r in records:
            r = tag_candidates(r, cfg.candidates)
            scored.append((r, score_tweet(tokenize(r.text), lexicon, cfg.max_phrase_len)))
        tallies = attribute(scored, cfg.candidates)
        source = "corpus"
    splits = group_split(tallies, cfg.candidates)
    write_sentiment(dest, tallies, splits, source)
    for g in splits:
        shown = ", ".join(f"{c} {e * 100:.1f}%" for c, e in g.splits.items())
        print(f"group {g.group}: {shown}")
    return 0


def _write_tables(path: Path, census: CensusTable, curve) -> None:
    table = off_twitter_party_table(census, curve)
    support = curve.as_dict()
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["label", "support_pct", "online_pct", "nonsocial_pct", "social_pct",
                    "off_twitter_party_pct", "off_twitter_opposition_pct"])
        for band, row in zip(census.voting_bands(), table.rows):
            p = partition(band)
            w.writerow([band.label] + [f"{v * 100:.2f}" for v in (
                support[band.label], p.online, p.online_nonsocial, p.online_social, row.party, row.opposition)])
        w.writerow(["Total", f"{weighted_mean(curve, census) * 100:.2f}", "", "", "",
                    f"{table.party_total * 100:.2f}", f"{table.opposition_total * 100:.2f}"])


def cmd_estimate(cfg: PipelineConfig, out: str | None) -> int:
    census = _census(cfg)
    dest = _output(cfg, "support", out)
    curve = solve_support(census, cfg.target_mean, cfg.family, cfg.family_params, cfg.basis)
    log.debug("solved %s curve %s on %s weights", curve.family, dict(curve.family_params), curve.basis)
    write_support_csv(dest, curve)
    if cfg.path("tables") is not None:
        tables = _output(cfg, "tables", None)
        _write_tables(tables, census, curve)
    for label, p in curve.entries:
        print(f"{label:<10} {p * 100:6.2f}%")
    print(f"weighted mean ({curve.basis}): {weighted_mean(curve, census) * 100:.2f}%")
    return 0


def cmd_predict(cfg: PipelineConfig, out: str | None) -> int:
    census = _census(cfg)
    curve = read_support_csv(_require(cfg, "support"))
    _, splits = read_sentiment(_require(cfg, "sentiment"))
    actuals = load_actuals(_require(cfg, "actuals")) if cfg.path("actuals") else None
    dest = _output(cfg, "prediction", out)
    violation = validate_monotone(curve)
    if violation is not None:
        raise DataError(f"support curve invalid: {violation}")
    cells = project(census, curve, split_lookup(splits), cfg.candidates, cfg.groups)
    report = total_support(cells)
    if actuals is not None:
        report = compare(report, actuals)
    write_prediction_csv(dest, report)
    if len(cfg.groups) == 2:
        table = off_twitter_party_table(census, curve)
        print(f"off-twitter population: party {table.party_total * 100:.1f}%, "
              f"opposition {table.opposition_total * 100:.1f}%")
    print(format_summary(report))
    return 0


COMMANDS = {
    "ingest": cmd_ingest,
    "score": cmd_score,
    "estimate": cmd_estimate,
    "predict": cmd_predict,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", "-v", action="store_true", default=argparse.SUPPRESS,
                        help="debug logging on stderr")

    with_config = argparse.ArgumentParser(add_help=False, parents=[common])
    with_config.add_argument("--config", required=True, help="pipeline TOML file")
    with_config.add_argument("--out", help="output path for this step")
    for key in PATH_KEYS:
        with_config.add_argument(f"--{key}", dest=f"path_{key}", metavar="PATH",
                                 help=f"override paths.{key}")

    parser = _Parser(prog="census-vote", description=__doc__, parents=[common])
    parser.set_defaults(verbose=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("ingest", parents=[with_config], help="clean and tag a tweet file")
    sub.add_parser("score", parents=[with_config], help="sentiment tallies and group splits")
    sub.add_parser("estimate", parents=[with_config], help="solve the age-band support curve")
    sub.add_parser("predict", parents=[with_config], help="project vote shares")
    synth = sub.add_parser("synth", parents=[common], help="write a seeded synthetic input set")
    synth.add_argument("--seed", type=int, required=True)
    synth.add_argument("--out", required=True, help="directory to create")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(format="%(levelname)s: %(message)s", stream=sys.stderr)
    log.setLevel(logging.DEBUG if args.verbose else logging.INFO)
    try:
        if args.command == "synth":
            print(write_fixture(args.out, args.seed))
            return 0
        overrides = {k: getattr(args, f"path_{k}") for k in PATH_KEYS}
        cfg = load_config(args.config, overrides)
        for key, path in sorted(cfg.paths.items()):
            log.debug("paths.%s = %s", key, path)
        return COMMANDS[args.command](cfg, args.out)
    except ConfigError as exc:
        print(f"census-vote: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"census-vote: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
