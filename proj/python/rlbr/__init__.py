from ._rlbr import (  # noqa: F401
    MetricsReport,
    RewardBreakdown,
    TaggedTranscript,
    TagParseError,
    align,
    biasing_reward,
    compute_advantages,
    levenshtein,
    parse_biasing_tags,
    score_pairs,
    standard_reward,
    train_toy,
)
