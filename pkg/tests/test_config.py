from datetime import datetime, timezone
from pathlib import Path

import pytest

from census_vote.config import load_config, parse_config
from census_vote.errors import ConfigError

from conftest import DATA

BASE = {"candidates": [{"id": "A", "group": "1", "name_patterns": ["a"]},
                       {"id": "B", "group": "2", "name_patterns": "b"}]}


def cfg(**sections):
    return parse_config({**BASE, **sections}, "/base")


def test_bundled_config():
    c = load_config(DATA / "pipeline.toml")
    assert [s.id for s in c.candidates] == ["TT", "TCB", "TJS", "TKL"]
    assert c.groups == ["1", "2"]
    assert c.path("census") == DATA / "census.csv"
    assert c.window_start == datetime(2011, 8, 17, tzinfo=timezone.utc)
    assert c.window_end == datetime(2011, 8, 25, 23, 59, 59, 999999, tzinfo=timezone.utc)
    assert c.basis == "off_twitter"


def test_defaults():
    c = cfg()
    assert (c.target_mean, c.family, c.voting_floor_label, c.max_phrase_len) == (0.6, "geometric", "20 - 24", 3)
    assert c.window_start is None and c.paths == {}
    assert c.candidates[1].name_patterns == ("b",)


def test_party_group_orders_groups():
    assert cfg(model={"party_group": "2"}).groups == ["2", "1"]


def test_datetime_window_and_overrides():
    c = parse_config({**BASE, "window": {"start": "2011-08-17T08:00:00+08:00", "end": "2011-08-18T00:00:00"},
                      "paths": {"census": "c.csv"}}, "/base", {"census": "/x/other.csv", "lexicon": None})
    assert c.window_start == datetime(2011, 8, 17, tzinfo=timezone.utc)
    assert c.window_end == datetime(2011, 8, 18, tzinfo=timezone.utc)
    assert c.path("census") == Path("/x/other.csv")
    assert c.path("lexicon") is None


@pytest.mark.parametrize("sections, fragment", [
    ({"candidates": []}, "at least one"),
    ({"candidates": [{"id": "A", "group": "1", "name_patterns": []}]}, "no name patterns"),
    ({"candidates": [{"id": "A", "group": "1", "name_patterns": ["a"]}] * 2}, "duplicate"),
    ({"window": {"start": "2011-08-26", "end": "2011-08-25"}}, "after end"),
    ({"window": {"start": "soon"}}, "bad window"),
    ({"model": {"target_mean": 1.5}}, "target_mean"),
    ({"model": {"family": "spline"}}, "family"),
    ({"model": {"basis": "online"}}, "basis"),
    ({"model": {"party_group": "9"}}, "party_group"),
    ({"model": {"max_phrase_len": 0}}, "max_phrase_len"),
    ({"model": {"params": {"ratio": "steep"}}}, "params"),
    ({"paths": {"twets": "x"}}, "unknown"),
])
def test_invalid(sections, fragment):
    with pytest.raises(ConfigError, match=fragment):
        cfg(**sections)


def test_bad_toml(tmp_path):
    (tmp_path / "c.toml").write_text("[[candidates]\n")
    with pytest.raises(ConfigError, match="TOML"):
        load_config(tmp_path / "c.toml")
