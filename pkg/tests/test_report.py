import math
import re

import numpy as np
import pytest

from pertcheck.exceptions import EmptyMatrix
from pertcheck.judge import CoverageGap, DeviationRecord, criteria_matrix
from pertcheck.report import (
    Heatmap, correlation_cells, correlation_heatmap, deviation_heatmap, export_summary, parse_summary,
    render_heatmap, shade,
)


def _recs():
    return [DeviationRecord("bleu", "T1", "fluency", -0.25, 0.5, 3),
            DeviationRecord("bleu", "T2", "invariance", 0.125, 0.125, 2),
            DeviationRecord("ter", "T1", "fluency", 0.0, 0.0, 3)]


def test_svg_cells_and_determinism():
    h = Heatmap(["a", "b"], ["a", "b"], [[1, 0.5], [0.5, 1]], "corr")
    svg = render_heatmap(h, "svg")
    assert svg == render_heatmap(h, "svg")
    assert svg.count(b"<rect") == 4
    assert b"0.50" in svg and b"1.00" in svg
    fills = re.findall(rb'fill="#([0-9a-f]{2})', svg)
    # diagonal (1.0) lighter than the 0.5 cells
    assert int(fills[0], 16) > int(fills[1], 16)


def test_text_grid():
    h = Heatmap(["row1", "r2"], ["c1", "c2"], [[0.123, -1], [math.nan, 0.5]])
    text = render_heatmap(h, "text").decode()
    assert "0.12" in text and "-1.00" in text and "n/a" in text
    assert len(text.splitlines()) == 4


def test_empty_matrix():
    with pytest.raises(EmptyMatrix):
        render_heatmap(Heatmap([], [], []), "svg")
    with pytest.raises(EmptyMatrix):
        Heatmap(["a"], ["b", "c"], [[1]])


def test_shading_direction():
    corr = [shade(v) for v in np.linspace(-1, 1, 21)]
    assert corr == sorted(corr)  # darker (lower) for lower correlation
    dev = [shade(v, "deviation") for v in np.linspace(0, 1, 11)]
    assert dev == sorted(dev, reverse=True)  # darker for larger deviation
    assert shade(-0.4, "deviation") == shade(0.4, "deviation")


def test_deviation_heatmap_layout():
    h = deviation_heatmap(_recs())
    assert h.row_labels == ["bleu", "ter"] and h.col_labels == ["T1", "T2"]
    assert math.isnan(h.values[1][1])


def test_csv_summary_round_trip():
    gaps = [CoverageGap("bleu", "s1", "T1", "perturbed")]
    data = export_summary(_recs(), "csv", gaps=gaps, manifest={"seed": 7, "catalog_version": "abc"})
    lines = data.decode().splitlines()
    assert lines[0] == "metric_id,template_id,criteria,mean_s,mean_abs_s,n_items"
    assert sum(1 for ln in lines[1:] if not ln.startswith("#")) == 3
    back = parse_summary(data, "csv")
    assert back.records == _recs() and back.gaps == gaps and back.manifest["seed"] == 7


def test_json_summary_round_trip():
    data = export_summary(_recs(), "json", manifest={"seed": 7})
    back = parse_summary(data, "json")
    assert back.records == _recs() and back.kind == "deviation"
    assert data == export_summary(_recs(), "json", manifest={"seed": 7})


def test_correlation_summary_bucket_counts():
    m = criteria_matrix({"a": [1, 2, 3, 4, 5], "b": [1, 2, 3, 5, 4], "c": [5, 1, 4, 2, 3]})
    cells = correlation_cells(m)
    for fmt in ("csv", "json"):
        back = parse_summary(export_summary(cells, fmt), fmt)
        recount = {"poor": 0, "moderate": 0, "high": 0}
        for c in back.records:
            recount[c.bucket] += 1
        assert back.bucket_counts == recount == m.buckets()
    h = correlation_heatmap(m)
    assert h.scale == "correlation"
