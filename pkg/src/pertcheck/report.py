"""Heatmap rendering and machine-readable summaries."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, fields
from xml.sax.saxutils import escape

from .exceptions import EmptyMatrix, ParseError
from .judge.deviation import CoverageGap, DeviationRecord
from .judge.stats import bucket

CORRELATION, DEVIATION = "correlation", "deviation"
CELL_W, CELL_H, CHAR_W = 64, 28, 7


@dataclass
class Heatmap:
    """Grid of values with a colour convention.

    correlation: darker means lower correlation, over [-1, 1].
    deviation: darker means larger absolute deviation, over [0, 1] (clamped).
    """

    row_labels: list
    col_labels: list
    values: list
    title: str = ""
    scale: str = CORRELATION

    def __post_init__(self):
        self.values = [[float(v) for v in row] for row in self.values]
        if len(self.values) != len(self.row_labels) or any(len(r) != len(self.col_labels) for r in self.values):
            raise EmptyMatrix("cell grid does not match the label counts")
        if self.scale not in (CORRELATION, DEVIATION):
            raise ValueError(f"scale must be {CORRELATION!r} or {DEVIATION!r}")


@dataclass(frozen=True)
class CorrelationCell:
    row: str
    col: str
    method: str
    value: float
    bucket: str

    def to_dict(self):
        return asdict(self)


def shade(value, scale=CORRELATION) -> int:
    """Gray level 0..255 (lower is darker); NaN renders white."""
    if math.isnan(value):
        return 255
    if scale == CORRELATION:
        t = (max(-1.0, min(1.0, value)) + 1) / 2
    else:
        t = 1 - min(abs(value), 1.0)
    return int(round(40 + 215 * t))


def _fmt(v):
    return "n/a" if math.isnan(v) else f"{v:.2f}"


def _svg(h: Heatmap) -> str:
    left = CHAR_W * max(len(str(r)) for r in h.row_labels) + 12
    top = CHAR_W * max(len(str(c)) for c in h.col_labels) + 12 + (24 if h.title else 0)
    width = left + CELL_W * len(h.col_labels) + 8
    height = top + CELL_H * len(h.row_labels) + 8
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        'font-family="monospace" font-size="11">',
    ]
    if h.title:
        out.append(f'<text x="4" y="16" font-size="13">{escape(h.title)}</text>')
    for j, c in enumerate(h.col_labels):
        x = left + CELL_W * j + CELL_W // 2
        out.append(f'<text x="{x}" y="{top - 6}" transform="rotate(-60 {x} {top - 6})">{escape(str(c))}</text>')
    for i, r in enumerate(h.row_labels):
        y = top + CELL_H * i
        out.append(f'<text x="{left - 6}" y="{y + CELL_H // 2 + 4}" text-anchor="end">{escape(str(r))}</text>')
        for j, v in enumerate(h.values[i]):
            x = left + CELL_W * j
            g = shade(v, h.scale)
            ink = "#ffffff" if g < 128 else "#000000"
            dash = ' stroke-dasharray="3,2"' if math.isnan(v) else ""
            out.append(f'<rect x="{x}" y="{y}" width="{CELL_W}" height="{CELL_H}" '
                       f'fill="#{g:02x}{g:02x}{g:02x}" stroke="#808080"{dash}/>')
            out.append(f'<text x="{x + CELL_W // 2}" y="{y + CELL_H // 2 + 4}" text-anchor="middle" '
                       f'fill="{ink}">{_fmt(v)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _text(h: Heatmap) -> str:
    lw = max(len(str(r)) for r in h.row_labels)
    cw = [max(len(str(c)), 5) for c in h.col_labels]
    lines = [h.title] if h.title else []
    lines.append(" " * lw + " | " + " ".join(str(c).rjust(w) for c, w in zip(h.col_labels, cw)))
    lines.append("-" * len(lines[-1]))
    for r, row in zip(h.row_labels, h.values):
        lines.append(str(r).ljust(lw) + " | " + " ".join(_fmt(v).rjust(w) for v, w in zip(row, cw)))
    return "\n".join(lines) + "\n"


def render_heatmap(heatmap: Heatmap, fmt="svg") -> bytes:
    if not heatmap.row_labels or not heatmap.col_labels:
        raise EmptyMatrix("heatmap has no cells")
    if fmt == "svg":
        return _svg(heatmap).encode("utf-8")
    if fmt == "text":
        return _text(heatmap).encode("utf-8")
    raise ValueError(f"unknown heatmap format {fmt!r}")


def correlation_heatmap(matrix, title="") -> Heatmap:
    return Heatmap(list(matrix.row_labels), list(matrix.col_labels), matrix.values.tolist(), title, CORRELATION)


def deviation_heatmap(records, title="", value="mean_abs_s") -> Heatmap:
    """Metrics (rows) by templates (columns); missing cells are NaN."""
    metrics, templates, cell = [], [], {}
    for r in records:
        if r.metric_id not in metrics:
            metrics.append(r.metric_id)
        if r.template_id not in templates:
            templates.append(r.template_id)
        cell[r.metric_id, r.template_id] = getattr(r, value)
    grid = [[cell.get((m, t), math.nan) for t in templates] for m in metrics]
    return Heatmap(metrics, templates, grid, title, DEVIATION)


def correlation_cells(matrix) -> list[CorrelationCell]:
    return [CorrelationCell(r, c, matrix.method, v, bucket(v) or "degenerate") for r, c, v in matrix.cells()]


@dataclass
class Summary:
    kind: str
    records: list
    gaps: list
    manifest: dict
    bucket_counts: dict | None = None


_KINDS = {"deviation": DeviationRecord, "correlation": CorrelationCell}


def _kind_of(records):
    for kind, cls in _KINDS.items():
        if records and all(isinstance(r, cls) for r in records):
            return kind
    raise ValueError("records must all be DeviationRecord or all CorrelationCell")


def _json_safe(d):
    return {k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in d.items()}


def export_summary(records, fmt="csv", *, gaps=(), manifest=None, bucket_counts=None) -> bytes:
    """Serialize records with coverage gaps, bucket counts and the run manifest."""
    records = list(records)
    kind = _kind_of(records)
    manifest = manifest or {}
    if kind == "correlation" and bucket_counts is None:
        bucket_counts = {"poor": 0, "moderate": 0, "high": 0}
        for r in records:
            if r.bucket in bucket_counts:
                bucket_counts[r.bucket] += 1
    if fmt == "json":
        doc = {
            "kind": kind,
            "records": [_json_safe(r.to_dict()) for r in records],
            "gaps": [g.to_dict() for g in gaps],
            "manifest": manifest,
        }
        if bucket_counts is not None:
            doc["bucket_counts"] = bucket_counts
        return (json.dumps(doc, sort_keys=True, indent=1, ensure_ascii=False) + "\n").encode("utf-8")
    if fmt != "csv":
        raise ValueError(f"unknown summary format {fmt!r}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    names = [f.name for f in fields(_KINDS[kind])]
    w.writerow(names)
    for r in records:
        w.writerow(["" if isinstance(v, float) and math.isnan(v) else repr(v) if isinstance(v, float) else v
                    for v in (getattr(r, n) for n in names)])
    if bucket_counts is not None:
        w.writerow(["#bucket_counts", json.dumps(bucket_counts, sort_keys=True)])
    for g in gaps:
        w.writerow(["#gap", g.metric_id, g.sample_id, g.template_id, g.variant])
    w.writerow(["#manifest", json.dumps(manifest, sort_keys=True, ensure_ascii=False)])
    return buf.getvalue().encode("utf-8")


def _typed(cls, d):
    out = {}
    for f in fields(cls):
        v = d[f.name]
        if f.type in ("float", float):
            v = math.nan if v in (None, "") else float(v)
        elif f.type in ("int", int):
            v = int(v)
        out[f.name] = v
    return cls(**out)


def parse_summary(data, fmt="csv") -> Summary:
    """Inverse of :func:`export_summary`."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    if fmt == "json":
        doc = json.loads(text)
        cls = _KINDS[doc["kind"]]
        return Summary(doc["kind"], [_typed(cls, r) for r in doc["records"]],
                       [CoverageGap(**g) for g in doc["gaps"]], doc["manifest"], doc.get("bucket_counts"))
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ParseError("empty summary")
    header = rows[0]
    kind = next((k for k, c in _KINDS.items() if header == [f.name for f in fields(c)]), None)
    if kind is None:
        raise ParseError("unrecognized summary header", line=1)
    recs, gaps, manifest, counts = [], [], {}, None
    for row in rows[1:]:
        if row and row[0].startswith("#"):
            if row[0] == "#gap":
                gaps.append(CoverageGap(*row[1:5]))
            elif row[0] == "#manifest":
                manifest = json.loads(row[1])
            elif row[0] == "#bucket_counts":
                counts = json.loads(row[1])
            continue
        recs.append(_typed(_KINDS[kind], dict(zip(header, row))))
    return Summary(kind, recs, gaps, manifest, counts)
