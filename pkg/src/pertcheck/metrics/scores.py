"""Metric registry, suite scoring and external score ingestion."""

from __future__ import annotations

import json
import math
import multiprocessing as mp
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

from ..exceptions import ConfigError, MissingSample, ParseError, RangeViolation
from .embedding import embedding_metric
from .surface import bleu, chrf_pp, rouge_l
from .ter import ter

ORIGINAL, PERTURBED = "original", "perturbed"
NATIVE = ("bleu", "rouge_l", "chrf_pp", "ter")
EMBEDDING = ("emb_average", "emb_greedy", "emb_extrema")
ORACLE = "oracle"


@dataclass(frozen=True)
class MetricScore:
    """One metric's score for one variant of one suite item.

    ``template_id`` is None for external scores of an original that apply
    to every item of the sample.
    """

    metric_id: str
    sample_id: str
    template_id: str | None
    variant: str
    raw: float
    normalized: float

    def __post_init__(self):
        if self.variant not in (ORIGINAL, PERTURBED):
            raise ValueError(f"variant must be {ORIGINAL!r} or {PERTURBED!r}")
        if not (0.0 <= self.normalized <= 1.0) or math.isnan(self.normalized):
            raise RangeViolation(f"normalized score {self.normalized} outside [0, 1]")

    @property
    def key(self):
        return (self.metric_id, self.sample_id, self.template_id, self.variant)

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return cls(d["metric_id"], d["sample_id"], d.get("template_id"), d["variant"],
                   float(d["raw"]), float(d["normalized"]))


def metric_function(metric_id, vectors=None):
    """A callable (candidate, references) -> (raw, normalized)."""
    if metric_id == "bleu":
        return lambda c, r: (lambda v: (v, v))(bleu(c, r))
    if metric_id == "rouge_l":
        return lambda c, r: (lambda v: (v, v))(rouge_l(c, r))
    if metric_id == "chrf_pp":
        return lambda c, r: (lambda v: (v, v))(chrf_pp(c, r))
    if metric_id == "ter":
        return ter
    if metric_id in EMBEDDING:
        if vectors is None:
            raise ConfigError(f"metric {metric_id} needs word vectors")
        kind = metric_id.split("_", 1)[1]

        def emb(c, r):
            v = embedding_metric(c, r, vectors, kind)
            return 2 * v - 1, v

        return emb
    raise ConfigError(f"unknown metric {metric_id!r}; native metrics are "
                      + ", ".join(NATIVE + EMBEDDING))


def scoring_references(sample) -> tuple:
    """References an item is scored against: all but the perturbed first one, if there are others."""
    refs = tuple(sample.references)
    return refs[1:] if len(refs) > 1 else refs


_WORKER = {}


def _score_item(index):
    w = _WORKER
    item = w["items"][index]
    refs = scoring_references(w["samples"][item.sample_id])
    out = []
    for mid in w["metrics"]:
        fn = w["functions"][mid]
        for variant, text in ((ORIGINAL, item.original), (PERTURBED, item.perturbed)):
            raw, norm = fn(text, refs)
            out.append(MetricScore(mid, item.sample_id, item.template_id, variant, raw, norm))
    return out


def score_suite(suite, dataset, metrics, *, vectors=None, jobs=1) -> list[MetricScore]:
    """Score original and perturbed variants of every suite item with every metric.

    Output order is item order, then metric order, then original before
    perturbed, independent of ``jobs``.
    """
    samples = {s.id: s for s in dataset}
    items = list(suite.items if hasattr(suite, "items") else suite)
    missing = sorted({it.sample_id for it in items} - samples.keys())
    if missing:
        raise MissingSample("suite items reference samples absent from the dataset: " + ", ".join(missing))
    metrics = list(metrics)
    functions = {m: metric_function(m, vectors) for m in metrics}
    _WORKER.update(items=items, samples=samples, metrics=metrics, functions=functions)
    try:
        jobs = max(1, int(jobs or 1))
        if jobs == 1 or len(items) < 2 or "fork" not in mp.get_all_start_methods():
            parts = [_score_item(i) for i in range(len(items))]
        else:
            chunk = max(1, len(items) // (jobs * 4))
            with ProcessPoolExecutor(jobs, mp_context=mp.get_context("fork")) as ex:
                parts = list(ex.map(_score_item, range(len(items)), chunksize=chunk))
    finally:
        _WORKER.clear()
    return [s for part in parts for s in part]


def oracle_scores(suite, h_perturbed) -> list[MetricScore]:
    """Scores of a metric that agrees with humans exactly: f(original)=1, f(perturbed)=h.

    ``h_perturbed`` maps template_id to the human quality of its outputs.
    """
    out = []
    for item in (suite.items if hasattr(suite, "items") else suite):
        h = h_perturbed[item.template_id]
        out.append(MetricScore(ORACLE, item.sample_id, item.template_id, ORIGINAL, 1.0, 1.0))
        out.append(MetricScore(ORACLE, item.sample_id, item.template_id, PERTURBED, h, h))
    return out


def _parse_variant(rec, path, n):
    variant = rec.get("variant")
    tid = rec.get("template_id")
    if not isinstance(variant, str):
        raise ParseError("record needs a string 'variant'", path, n)
    if variant.startswith(PERTURBED + ":"):
        variant, tid = PERTURBED, variant.split(":", 1)[1]
    if variant not in (ORIGINAL, PERTURBED):
        raise ParseError(f"variant must be 'original' or 'perturbed:<template_id>', got {variant!r}", path, n)
    if variant == PERTURBED and not tid:
        raise ParseError("perturbed records need a template id", path, n)
    return variant, tid


def load_external_scores(path) -> list[MetricScore]:
    """Read externally computed scores and normalize them per the file header.

    Header: ``{"metric_id", "range": [lo, hi], "higher_better": bool}``;
    then one ``{"sample_id", "variant", "raw"}`` object per line, with
    variant ``original`` or ``perturbed:<template_id>``.
    """
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ParseError(f"cannot read scores: {exc.strerror}", path) from None
    recs = []
    for n, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            recs.append((n, json.loads(line)))
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", path, n) from None
    if not recs:
        raise ParseError("empty scores file", path)
    n, head = recs[0]
    try:
        mid = head["metric_id"]
        lo, hi = (float(x) for x in head["range"])
        higher = head["higher_better"]
    except (KeyError, TypeError, ValueError):
        raise ParseError('header must be {"metric_id", "range": [lo, hi], "higher_better": bool}', path, n) from None
    if not isinstance(mid, str) or not mid or not isinstance(higher, bool) or not hi > lo:
        raise ParseError("header has a bad metric_id, range or higher_better", path, n)
    out, seen = [], set()
    for n, rec in recs[1:]:
        if not isinstance(rec, dict) or not isinstance(rec.get("sample_id"), str):
            raise ParseError("record needs a string 'sample_id'", path, n)
        variant, tid = _parse_variant(rec, path, n)
        raw = rec.get("raw")
        if isinstance(raw, bool) or not isinstance(raw, (int, float)) or math.isnan(raw):
            raise ParseError("record needs a numeric 'raw'", path, n)
        if not lo <= raw <= hi:
            raise RangeViolation(f"{path}:{n}: raw {raw} outside declared range [{lo}, {hi}]")
        norm = (raw - lo) / (hi - lo)
        if not higher:
            norm = 1.0 - norm
        s = MetricScore(mid, rec["sample_id"], tid, variant, float(raw), norm)
        if s.key in seen:
            raise ParseError(f"duplicate score for {rec['sample_id']} {variant} {tid or ''}".rstrip(), path, n)
        seen.add(s.key)
        out.append(s)
    return out


def format_scores(scores) -> str:
    from ..perturb.io import dumps

    return "".join(dumps(s.to_dict()) + "\n" for s in scores)


def write_scores(scores, path) -> None:
    Path(path).write_text(format_scores(scores), encoding="utf-8", newline="\n")


def load_scores(path) -> list[MetricScore]:
    path = Path(path)
    out = []
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ParseError(f"cannot read scores: {exc.strerror}", path) from None
    for n, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            if "manifest" in rec:
                continue
            out.append(MetricScore.from_dict(rec))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad score record: {exc}", path, n) from None
    return out
