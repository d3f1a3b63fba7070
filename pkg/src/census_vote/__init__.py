"""Census-corrected vote-share projection from tweet sentiment."""

from .census import (
    AgeBand, BandPartition, CensusTable, build_census, load_census, off_twitter_share, partition,
)
from .corpus import CandidateSpec, TweetRecord, dedup, filter_window, parse_tweet_stream, tag_candidates
from .errors import CensusVoteError, ConfigError, DataError, InfeasibleError
from .projection import (
    CandidateSupportCell, PredictionReport, compare, component_support, off_twitter_party_table,
    project, total_support,
)
from .sentiment import (
    GroupSplit, Lexicon, SentimentTally, attribute, group_split, score_tweet, tokenize,
)
from .support import SupportCurve, solve_support, validate_monotone, weighted_mean

__version__ = "0.1.0"
