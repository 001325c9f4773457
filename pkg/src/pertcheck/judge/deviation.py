"""Per-template aggregation of deviation scores."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from ..exceptions import MissingPenalty
from .human import H_ORIGINAL, deviation


@dataclass(frozen=True)
class DeviationRecord:
    metric_id: str
    template_id: str
    criteria: str
    mean_s: float
    mean_abs_s: float
    n_items: int

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class CoverageGap:
    metric_id: str
    sample_id: str
    template_id: str
    variant: str

    def to_dict(self):
        return asdict(self)


def _items(suite):
    return list(suite.items if hasattr(suite, "items") else suite)


def check_penalties(suite, penalties) -> None:
    missing = []
    for it in _items(suite):
        if it.template_id not in penalties and it.template_id not in missing:
            missing.append(it.template_id)
    if missing:
        raise MissingPenalty("penalty table has no entry for template(s): " + ", ".join(missing))


def aggregate_deviation(suite, scores, penalties, metrics=None):
    """Mean s and mean |s| per (metric, template).

    Returns ``(records, gaps)``. Items lacking either variant's score are
    listed in ``gaps`` and left out of their record's mean. Originals fall
    back to a template-free score for the sample (external files).
    """
    items = _items(suite)
    check_penalties(suite, penalties)
    table = {}
    order = []
    for s in scores:
        table[s.key] = s.normalized
        if s.metric_id not in order:
            order.append(s.metric_id)
    metrics = list(metrics) if metrics is not None else order
    templates, criteria = [], {}
    for it in items:
        if it.template_id not in criteria:
            templates.append(it.template_id)
            criteria[it.template_id] = it.criteria
    h = {t: penalties.quality(t).h_perturbed for t in templates}

    records, gaps = [], []
    for mid in metrics:
        per = {t: [] for t in templates}
        for it in items:
            f_o = table.get((mid, it.sample_id, it.template_id, "original"))
            if f_o is None:
                f_o = table.get((mid, it.sample_id, None, "original"))
            f_p = table.get((mid, it.sample_id, it.template_id, "perturbed"))
            if f_o is None:
                gaps.append(CoverageGap(mid, it.sample_id, it.template_id, "original"))
            if f_p is None:
                gaps.append(CoverageGap(mid, it.sample_id, it.template_id, "perturbed"))
            if f_o is None or f_p is None:
                continue
            per[it.template_id].append(deviation(H_ORIGINAL, h[it.template_id], f_o, f_p))
        for t in templates:
            vals = per[t]
            if not vals:
                continue
            records.append(DeviationRecord(
                mid, t, criteria[t], math.fsum(vals) / len(vals),
                math.fsum(abs(v) for v in vals) / len(vals), len(vals),
            ))
    return records, gaps
