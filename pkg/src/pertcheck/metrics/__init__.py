"""Reference-based metrics and score ingestion."""

from .embedding import WordVectors, embedding_metric, load_vectors
from .scores import (
    EMBEDDING, NATIVE, ORACLE, MetricScore, load_external_scores, load_scores, metric_function,
    oracle_scores, score_suite, scoring_references, write_scores,
)
from .surface import bleu, chrf_pp, rouge_l
from .ter import ter, ter_raw

__all__ = [
    "EMBEDDING", "NATIVE", "ORACLE", "MetricScore", "WordVectors", "bleu", "chrf_pp",
    "embedding_metric", "load_external_scores", "load_scores", "load_vectors", "metric_function",
    "oracle_scores", "rouge_l", "score_suite", "scoring_references", "ter", "ter_raw", "write_scores",
]
