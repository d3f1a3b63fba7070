"""Seeded synthetic input sets for end-to-end tests and demos."""

from __future__ import annotations

import json
import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

CANDIDATES = (
    ("AL", "1", "alice lim"),
    ("BO", "1", "bob ong"),
    ("CH", "2", "chandra"),
    ("DT", "2", "dina tay"),
)

LEXICON = {
    "good": 1.0,
    "not good": -1.0,
    "great leader": 2.0,
    "support": 1.0,
    "lousy": -2.0,
    "trust": 1.5,
    "no way": -1.5,
}

PHRASES = (
    "good", "not good", "great leader", "support", "lousy", "trust", "no way",
    "ok lah", "#ge", "see how", "vote",
)

BANDS = (
    ("0 - 19", 900.0, 99.0, 80.0),
    ("20 - 34", 800.0, 96.0, 45.0),
    ("35 - 49", 850.0, 80.0, 20.0),
    ("50 - 64", 700.0, 45.0, 8.0),
    ("65 & Over", 450.0, 15.0, 4.0),
)

WINDOW_START = datetime(2024, 3, 1, tzinfo=timezone.utc)
WINDOW_DAYS = 7


def make_tweets(rng: random.Random, n: int = 80) -> list[dict]:
    authors = [f"user{k:03d}" for k in range(25)]
    tweets = []
    for k in range(n):
        names = rng.sample([c[2] for c in CANDIDATES], rng.choice((1, 1, 1, 2, 4)))
        words = rng.sample(PHRASES, rng.randint(1, 4))
        text = " ".join(words[:1] + [n.title() for n in names] + words[1:])
        offset = timedelta(hours=rng.uniform(-30, 24 * WINDOW_DAYS + 30))
        tweets.append({
            "id": f"t{k:05d}",
            "author": rng.choice(authors),
            "timestamp": (WINDOW_START + offset).replace(microsecond=0).isoformat(),
            "text": text,
        })
    # exact re-posts and cross-search id collisions
    for src in rng.sample(tweets, 6):
        tweets.append(dict(src, id=f"r{src['id']}", text=src["text"].upper() + "  "))
    for src in rng.sample(tweets, 4):
        tweets.append(dict(src))
    rng.shuffle(tweets)
    return tweets


def write_fixture(out_dir: str | Path, seed: int) -> Path:
    """Write tweets, lexicon, census, actuals and a config into ``out_dir``.

    Returns the config path. Output is a pure function of ``seed``.
    """
    rng = random.Random(seed)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "tweets.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        for t in make_tweets(rng):
            fh.write(json.dumps(t, sort_keys=True) + "\n")
    with open(out / "lexicon.tsv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# synthetic lexicon\n")
        for term, weight in LEXICON.items():
            fh.write(f"{term}\t{weight}\n")
    with open(out / "census.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("label,population_thousands,literacy_pct,social_media_pct\n")
        for label, pop, lit, soc in BANDS:
            fh.write(f"{label},{pop},{lit},{soc}\n")
    shares = [rng.uniform(5, 40) for _ in CANDIDATES]
    total = sum(shares)
    with open(out / "actuals.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("candidate,actual_pct\n")
        for (cid, _, _), s in zip(CANDIDATES, shares):
            fh.write(f"{cid},{100 * s / total:.2f}\n")
    end = WINDOW_START + timedelta(days=WINDOW_DAYS)
    lines = [
        "[window]",
        f'start = "{WINDOW_START.isoformat()}"',
        f'end = "{end.isoformat()}"',
        "",
        "[model]",
        "target_mean = 0.55",
        'family = "geometric"',
        'voting_floor_label = "20 - 34"',
        'party_group = "1"',
        "",
        "[model.params]",
        "ratio = 1.2",
        "",
    ]
    for cid, group, name in CANDIDATES:
        lines += ["[[candidates]]", f'id = "{cid}"', f'group = "{group}"',
                  f'name_patterns = ["{name}"]', ""]
    lines += [
        "[paths]",
        'tweets = "tweets.jsonl"',
        'lexicon = "lexicon.tsv"',
        'census = "census.csv"',
        'actuals = "actuals.csv"',
        'corpus = "out/corpus.jsonl"',
        'sentiment = "out/sentiment.json"',
        'support = "out/support.csv"',
        'tables = "out/tables.csv"',
        'prediction = "out/prediction.csv"',
    ]
    config = out / "pipeline.toml"
    config.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return config
