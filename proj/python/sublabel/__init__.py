"""Subtitle-driven labeling of exercise video clips."""

from ._core import (
    ConfigError,
    Error,
    Lexicon,
    ParseError,
    Token,
    TrainingError,
    TrigramModel,
    UsageError,
    ValidationError,
    ingest,
    kmeans,
    load_lexicon,
    mark_coarse,
    mark_words,
    normalize_words,
    rank_sum_test,
    read_manifest,
    run_pipeline,
    split_sentences,
    summarize,
    vote,
)

__all__ = [name for name in dir() if not name.startswith("_")]
