"""Penalty tables, human quality and the deviation score."""

from __future__ import annotations

import csv
import io
import math
import statistics
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

from ..exceptions import MissingPenalty, OutOfRange, ParseError

H_ORIGINAL = 1.0


@dataclass
class PenaltyTable:
    """template_id -> list of (annotator_id, penalty 0..10)."""

    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        for tid, rows in self.entries.items():
            if not rows:
                raise OutOfRange(f"template {tid} has no annotator penalties")
            for _, p in rows:
                _check_penalty(p)

    def penalties(self, template_id) -> list[int]:
        try:
            return [p for _, p in self.entries[template_id]]
        except KeyError:
            raise MissingPenalty(f"no penalties for template {template_id!r}") from None

    def __contains__(self, template_id):
        return template_id in self.entries

    def quality(self, template_id) -> "HumanQuality":
        return human_quality(self.penalties(template_id), template_id)


@dataclass(frozen=True)
class HumanQuality:
    template_id: str | None
    h_perturbed: float
    std_dev: float
    h_original: float = H_ORIGINAL


def _check_penalty(p):
    if isinstance(p, bool) or not isinstance(p, (int, float)) or not 0 <= p <= 10 or p != int(p):
        raise OutOfRange(f"penalty {p!r} must be an integer in [0, 10]")


def human_quality(penalties, template_id=None) -> HumanQuality:
    """h = 1 - mean(penalty / 10); std_dev is the population std of normalized penalties."""
    penalties = list(penalties)
    if not penalties:
        raise OutOfRange("need at least one penalty")
    for p in penalties:
        _check_penalty(p)
    norm = [p / 10 for p in penalties]
    return HumanQuality(template_id, 1.0 - math.fsum(norm) / len(norm), statistics.pstdev(norm))


def deviation(h_orig, h_pert, f_orig, f_pert) -> float:
    """(h_pert - h_orig) - (f_pert - f_orig)."""
    for name, v in (("h_orig", h_orig), ("h_pert", h_pert), ("f_orig", f_orig), ("f_pert", f_pert)):
        if not 0.0 <= v <= 1.0:
            raise OutOfRange(f"{name}={v} outside [0, 1]")
    return (h_pert - h_orig) - (f_pert - f_orig)


def parse_penalties(text, path="<penalties>") -> PenaltyTable:
    """CSV ``template_id,annotator_id,penalty``."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != ["template_id", "annotator_id", "penalty"]:
        raise ParseError("header must be template_id,annotator_id,penalty", path, 1)
    entries = defaultdict(list)
    seen = set()
    for n, row in enumerate(rows[1:], 2):
        if not row or not "".join(row).strip():
            continue
        if len(row) != 3:
            raise ParseError(f"expected 3 columns, got {len(row)}", path, n)
        tid, ann, pen = (c.strip() for c in row)
        try:
            p = int(pen)
        except ValueError:
            raise ParseError(f"penalty {pen!r} is not an integer", path, n) from None
        if not 0 <= p <= 10:
            raise OutOfRange(f"{path}:{n}: penalty {p} outside [0, 10]")
        if (tid, ann) in seen:
            raise ParseError(f"duplicate penalty for {tid}/{ann}", path, n)
        seen.add((tid, ann))
        entries[tid].append((ann, p))
    if not entries:
        raise ParseError("penalty table is empty", path)
    return PenaltyTable(dict(entries))


def load_penalties(path) -> PenaltyTable:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read penalties: {exc.strerror}", path) from None
    return parse_penalties(text, path)


def format_penalties(table: PenaltyTable) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["template_id", "annotator_id", "penalty"])
    for tid, rows in table.entries.items():
        for ann, p in rows:
            w.writerow([tid, ann, p])
    return out.getvalue()


def load_criteria_scores(path) -> dict:
    """CSV ``sample_id,criteria,score`` -> {criteria: {sample_id: score}}."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read criteria scores: {exc.strerror}", path) from None
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != ["sample_id", "criteria", "score"]:
        raise ParseError("header must be sample_id,criteria,score", path, 1)
    out = defaultdict(dict)
    for n, row in enumerate(rows[1:], 2):
        if not row or not "".join(row).strip():
            continue
        if len(row) != 3:
            raise ParseError(f"expected 3 columns, got {len(row)}", path, n)
        sid, crit, score = (c.strip() for c in row)
        try:
            v = float(score)
        except ValueError:
            raise ParseError(f"score {score!r} is not a number", path, n) from None
        if math.isnan(v):
            raise ParseError("score is NaN", path, n)
        if sid in out[crit]:
            raise ParseError(f"duplicate score for {sid}/{crit}", path, n)
        out[crit][sid] = v
    if not out:
        raise ParseError("criteria score file is empty", path)
    return dict(out)


def align(columns: dict):
    """Restrict {name: {sample_id: value}} to samples present in every column.

    Returns (sample_ids, {name: [values]}, dropped sample ids).
    """
    if not columns:
        return [], {}, []
    common = set.intersection(*(set(c) for c in columns.values()))
    every = set().union(*(set(c) for c in columns.values()))
    ids = sorted(common)
    return ids, {k: [c[s] for s in ids] for k, c in columns.items()}, sorted(every - common)
