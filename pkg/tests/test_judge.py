import itertools
import math
import random

import numpy as np
import pytest

from pertcheck.exceptions import DegenerateInput, MissingPenalty, OutOfRange, ParseError
from pertcheck.judge import (
    PenaltyTable, aggregate_deviation, align, bucket, criteria_matrix, deviation, human_quality, iaa_runs,
    iaa_split, kendall_tau_b, load_criteria_scores, metric_criteria_corr, parse_penalties, pearson,
)
from pertcheck.metrics import MetricScore
from pertcheck.metrics.scores import oracle_scores
from pertcheck.perturb import PerturbedSample, TestSuite

from oracles import tau_b_bruteforce


# human quality and deviation

def test_human_quality():
    assert human_quality([0, 0]).h_perturbed == 1.0
    assert human_quality([10]).h_perturbed == 0.0
    hq = human_quality([2, 4, 6])
    assert hq.h_perturbed == pytest.approx(0.6)
    assert hq.h_original == 1.0
    assert hq.std_dev == pytest.approx(np.std([0.2, 0.4, 0.6]))
    for bad in ([], [11], [-1], [2.5]):
        with pytest.raises(OutOfRange):
            human_quality(bad)


def test_deviation_examples():
    assert deviation(1.0, 0.6, 0.9, 0.8) == pytest.approx(-0.3)
    assert deviation(1.0, 1.0, 0.9, 0.4) == pytest.approx(0.5)
    assert deviation(1.0, 0.7, 1.0, 0.7) == 0.0
    with pytest.raises(OutOfRange):
        deviation(1.0, 1.2, 0.5, 0.5)


def test_deviation_antisymmetry():
    rng = random.Random(1)
    for _ in range(50):
        a, b, c, d = (rng.random() for _ in range(4))
        assert deviation(a, b, c, d) == pytest.approx(-deviation(c, d, a, b))


def test_penalty_csv():
    t = parse_penalties("template_id,annotator_id,penalty\nA,x,2\nA,y,4\nB,x,10\n")
    assert t.penalties("A") == [2, 4]
    assert t.quality("B").h_perturbed == 0.0
    with pytest.raises(MissingPenalty):
        t.penalties("C")
    with pytest.raises(OutOfRange):
        parse_penalties("template_id,annotator_id,penalty\nA,x,12\n")
    with pytest.raises(ParseError, match="<penalties>:2"):
        parse_penalties("template_id,annotator_id,penalty\nA,x,two\n")
    with pytest.raises(ParseError):
        parse_penalties("template,who,score\n")
    with pytest.raises(ParseError, match="duplicate"):
        parse_penalties("template_id,annotator_id,penalty\nA,x,1\nA,x,2\n")


# aggregation

def _suite(n_per=3):
    items = [PerturbedSample(f"s{i}", t, "fluency", "o", "p", (), 0) for t in ("A", "B") for i in range(n_per)]
    return TestSuite("d", "v", 7, items)


def _scores(suite, f):
    out = []
    for it in suite.items:
        fo, fp = f(it)
        out.append(MetricScore("m", it.sample_id, it.template_id, "original", fo, fo))
        out.append(MetricScore("m", it.sample_id, it.template_id, "perturbed", fp, fp))
    return out


def test_oracle_metric_gives_zero():
    suite = _suite()
    table = parse_penalties("template_id,annotator_id,penalty\nA,x,3\nA,y,5\nB,x,9\n")
    h = {t: table.quality(t).h_perturbed for t in ("A", "B")}
    recs, gaps = aggregate_deviation(suite, oracle_scores(suite, h), table)
    assert not gaps and len(recs) == 2
    assert all(r.mean_abs_s == 0.0 and r.mean_s == 0.0 for r in recs)


def test_single_item_record():
    suite = TestSuite("d", "v", 7, [PerturbedSample("s", "A", "adequacy", "o", "p", (), 0)])
    table = PenaltyTable({"A": [("x", 4)]})
    recs, _ = aggregate_deviation(suite, _scores(suite, lambda it: (0.9, 0.8)), table)
    (r,) = recs
    assert r.mean_s == pytest.approx(-0.3) and r.mean_abs_s == pytest.approx(0.3) and r.n_items == 1
    assert r.criteria == "adequacy"


def test_missing_penalty_names_template():
    table = PenaltyTable({"A": [("x", 1)]})
    with pytest.raises(MissingPenalty, match="B"):
        aggregate_deviation(_suite(), [], table)


def test_missing_scores_are_gaps():
    suite = _suite()
    table = PenaltyTable({"A": [("x", 0)], "B": [("x", 0)]})
    scores = _scores(suite, lambda it: (1.0, 0.5))
    scores = [s for s in scores if not (s.sample_id == "s0" and s.template_id == "A" and s.variant == "perturbed")]
    recs, gaps = aggregate_deviation(suite, scores, table)
    assert [(g.sample_id, g.template_id, g.variant) for g in gaps] == [("s0", "A", "perturbed")]
    assert {r.template_id: r.n_items for r in recs} == {"A": 2, "B": 3}


def test_external_original_fallback():
    suite = _suite(1)
    table = PenaltyTable({"A": [("x", 0)], "B": [("x", 0)]})
    scores = [MetricScore("m", "s0", None, "original", 0.8, 0.8),
              MetricScore("m", "s0", "A", "perturbed", 0.8, 0.8),
              MetricScore("m", "s0", "B", "perturbed", 0.6, 0.6)]
    recs, gaps = aggregate_deviation(suite, scores, table)
    assert not gaps
    assert [round(r.mean_s, 12) for r in recs] == [0.0, 0.2]


def test_record_invariant():
    rng = random.Random(3)
    suite = _suite(10)
    table = PenaltyTable({"A": [("x", 3)], "B": [("x", 8)]})
    recs, _ = aggregate_deviation(suite, _scores(suite, lambda it: (rng.random(), rng.random())), table)
    for r in recs:
        assert abs(r.mean_s) <= r.mean_abs_s + 1e-15 <= 2


# correlations

def test_tau_b_examples():
    assert kendall_tau_b([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(4 / 6, abs=1e-12)
    assert kendall_tau_b([1, 2, 3], [1, 2, 3]) == 1.0
    assert kendall_tau_b([1, 2, 3], [3, 2, 1]) == -1.0
    with pytest.raises(DegenerateInput):
        kendall_tau_b([1, 1, 1], [1, 2, 3])
    with pytest.raises(DegenerateInput):
        kendall_tau_b([1], [1])
    with pytest.raises(DegenerateInput):
        kendall_tau_b([1, 2], [1, 2, 3])


def test_tau_b_small_instances_exact():
    rng = random.Random(5)
    for _ in range(300):
        n = rng.randint(2, 10)
        x = [rng.randint(0, 3) for _ in range(n)]
        y = [rng.randint(0, 3) for _ in range(n)]
        if len(set(x)) < 2 or len(set(y)) < 2:
            continue
        assert kendall_tau_b(x, y) == tau_b_bruteforce(x, y)


def test_tau_b_properties():
    rng = random.Random(8)
    x = [rng.random() for _ in range(20)]
    y = [rng.randint(0, 5) for _ in range(20)]
    t = kendall_tau_b(x, y)
    assert kendall_tau_b(y, x) == pytest.approx(t)
    assert kendall_tau_b([math.exp(v) for v in x], [3 * v + 1 for v in y]) == pytest.approx(t)


def test_pearson():
    x = [1.0, 2.0, 4.0, 7.0]
    assert pearson(x, [2 * v + 3 for v in x]) == pytest.approx(1.0)
    assert pearson(x, [-v for v in x]) == pytest.approx(-1.0)
    with pytest.raises(DegenerateInput):
        pearson([1, 1, 1], [1, 2, 3])
    y = [0.3, -1.0, 2.0, 0.5]
    assert pearson([5 * v - 2 for v in x], y) == pytest.approx(pearson(x, y))
    assert pearson(x, y) == pytest.approx(np.corrcoef(x, y)[0, 1])


@pytest.mark.parametrize("value,label", [(0.29, "poor"), (0.3, "moderate"), (0.5, "moderate"),
                                         (0.51, "high"), (-0.8, "poor"), (float("nan"), None)])
def test_bucket(value, label):
    assert bucket(value) == label


def test_criteria_matrix():
    x = [1, 2, 3, 4, 5]
    m = criteria_matrix({"a": x, "b": list(x), "c": [5, 3, 4, 1, 2]})
    assert m.values[0, 1] == 1.0 and m.buckets()["high"] >= 1
    np.testing.assert_array_equal(m.values, m.values.T)
    np.testing.assert_array_equal(np.diag(m.values), 1.0)


def test_criteria_matrix_flags_degenerate():
    m = criteria_matrix({"a": [1, 2, 3], "b": [2, 2, 2]}, "pearson")
    assert m.flagged == [("a", "b")]
    assert math.isnan(m.values[0, 1])
    assert sum(m.buckets().values()) == 0


def test_criteria_matrix_random_symmetry():
    rng = np.random.default_rng(0)
    cols = {k: rng.integers(0, 5, 30).tolist() for k in "abcd"}
    m = criteria_matrix(cols)
    np.testing.assert_allclose(m.values, m.values.T)
    assert np.all(np.abs(m.values) <= 1)


def test_metric_criteria_corr():
    crit = {"fluency": [1, 2, 3, 4], "coherence": [4, 1, 3, 2]}
    m = metric_criteria_corr({"bleu": [1, 2, 3, 4]}, crit)
    assert m.values.shape == (1, 2)
    assert m.values[0, 0] == 1.0
    assert len(list(m.cells())) == 2


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_independent_columns_have_small_tau(seed):
    rng = np.random.default_rng(seed)
    m = metric_criteria_corr({"m": rng.random(1000).tolist()}, {"c": rng.random(1000).tolist()})
    assert abs(m.values[0, 0]) < 0.1


def test_planted_bucket_grid():
    # every permutation of 5 items against the identity has tau (C - D) / 10
    base = list(range(5))
    perms = list(itertools.permutations(base))
    taus = [tau_b_bruteforce(base, p) for p in perms]
    cols = {f"p{i}": list(p) for i, p in enumerate(perms[:40])}
    m = metric_criteria_corr({"id": base}, cols)
    want = {"poor": 0, "moderate": 0, "high": 0}
    for t in taus[:40]:
        want[bucket(t)] += 1
    assert m.buckets() == want


# agreement

def test_iaa():
    rows = [[1, 5, 2, 4], [1, 5, 2, 4], [1, 5, 2, 4]]
    assert iaa_runs(rows) == [1.0] * 5
    assert iaa_split([[1, 2, 3], [3, 2, 1]]) == -1.0
    with pytest.raises(DegenerateInput):
        iaa_split([[1, 2, 3]])
    with pytest.raises(DegenerateInput):
        iaa_split([[1, 1], [1, 1]])


def test_iaa_seeded():
    rng = np.random.default_rng(4)
    rows = rng.integers(0, 10, (6, 12))
    assert iaa_runs(rows, 5, 3) == iaa_runs(rows, 5, 3)
    assert iaa_runs(rows, 3, 3) == iaa_runs(rows, 5, 3)[:3]


# criteria scores file

def test_criteria_scores_and_align(tmp_path):
    p = tmp_path / "c.csv"
    p.write_text("sample_id,criteria,score\na,flu,1\nb,flu,2\na,coh,3\nc,coh,1\n")
    cols = load_criteria_scores(p)
    ids, aligned, dropped = align(cols)
    assert ids == ["a"] and aligned == {"flu": [1.0], "coh": [3.0]} and dropped == ["b", "c"]
    p.write_text("sample_id,criteria,score\na,flu,x\n")
    with pytest.raises(ParseError):
        load_criteria_scores(p)
