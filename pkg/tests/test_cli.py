import json

import pytest

from pertcheck.cli import main
from pertcheck.metrics import load_scores
from pertcheck.perturb import load_suite
from pertcheck.report import parse_summary


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory, demo_path, demo_penalties_path):
    out = tmp_path_factory.mktemp("run")
    assert main(["perturb", "--dataset", str(demo_path), "--out-dir", str(out)]) == 0
    assert main(["score", "--dataset", str(demo_path), "--out-dir", str(out)]) == 0
    assert main(["deviate", "--penalties", str(demo_penalties_path), "--metrics", "bleu,oracle",
                 "--format", "svg", "--format", "csv", "--format", "json", "--out-dir", str(out)]) == 0
    return out


def test_pipeline_outputs(pipeline):
    suite = load_suite(pipeline / "suite.jsonl")
    scores = load_scores(pipeline / "scores.jsonl")
    assert len(scores) == 2 * len(suite.items) * 4
    for name in ("perturb", "score", "deviate"):
        m = json.loads((pipeline / f"{name}.manifest.json").read_text())
        assert m["command"] == name and m["outputs"]
    summary = parse_summary((pipeline / "deviation.json").read_bytes(), "json")
    assert summary.manifest["master_seed"] == 7
    assert {r.metric_id for r in summary.records} == {"bleu", "oracle"}
    assert all(r.mean_abs_s == 0 for r in summary.records if r.metric_id == "oracle")
    assert (pipeline / "deviation.svg").read_bytes().startswith(b"<?xml")


def test_replay_is_byte_identical(pipeline, tmp_path):
    for name in ("perturb", "score", "deviate"):
        assert main(["replay", str(pipeline / f"{name}.manifest.json")]) == 0


def test_replay_detects_changed_input(tmp_path, demo_path):
    data = tmp_path / "d.jsonl"
    data.write_bytes(demo_path.read_bytes())
    out = tmp_path / "o"
    assert main(["perturb", "--dataset", str(data), "--templates", "ALL.punctuation", "--out-dir", str(out)]) == 0
    data.write_text(data.read_text().replace("rain", "snow", 1))
    assert main(["replay", str(out / "perturb.manifest.json")]) == 2


def test_tasks_filter(tmp_path, demo_path):
    assert main(["perturb", "--dataset", str(demo_path), "--tasks", "MT", "--out-dir", str(tmp_path)]) == 0
    suite = load_suite(tmp_path / "suite.jsonl")
    assert {it.template_id.split(".")[0] for it in suite.items} == {"ALL", "MT"}


def test_missing_lexicon_exit_2(tmp_path, demo_path, capsys):
    bad = tmp_path / "nolex"
    assert main(["perturb", "--dataset", str(demo_path), "--lexicon-dir", str(bad), "--out-dir", str(tmp_path)]) == 2
    assert str(bad) in capsys.readouterr().err


def test_env_lexicon_dir(tmp_path, demo_path, monkeypatch):
    monkeypatch.setenv("PERTCHECK_LEXICON_DIR", str(tmp_path / "missing"))
    assert main(["perturb", "--dataset", str(demo_path), "--out-dir", str(tmp_path)]) == 2


def test_bad_args_exit_2(tmp_path):
    assert main(["perturb"]) == 2
    assert main(["nonsense"]) == 2
    assert main(["perturb", "--dataset", str(tmp_path / "none.jsonl"), "--out-dir", str(tmp_path)]) == 2


def test_bad_catalog_exit_2(tmp_path, demo_path, capsys):
    cat = tmp_path / "c.tsv"
    cat.write_text("template_id\ttask\tcriteria\tprimitive\tparams\nX\tMT\tadequacy\tdrop_span\tkind=q\n")
    assert main(["perturb", "--dataset", str(demo_path), "--catalog", str(cat), "--out-dir", str(tmp_path)]) == 2
    assert "c.tsv:2" in capsys.readouterr().err


def test_score_missing_sample_exit_3(pipeline, tmp_path):
    ds = tmp_path / "small.jsonl"
    ds.write_text(json.dumps({"id": "mt-01", "task": "MT", "references": ["x"]}) + "\n")
    code = main(["score", "--suite", str(pipeline / "suite.jsonl"), "--dataset", str(ds), "--out-dir", str(tmp_path)])
    assert code == 3


def test_score_external(pipeline, tmp_path):
    ext = tmp_path / "ext.jsonl"
    ext.write_text(json.dumps({"metric_id": "x", "range": [0, 10], "higher_better": True}) + "\n"
                   + json.dumps({"sample_id": "mt-01", "variant": "original", "raw": 5}) + "\n")
    assert main(["score", "--suite", str(pipeline / "suite.jsonl"), "--external-scores", str(ext),
                 "--out-dir", str(tmp_path)]) == 0
    assert load_scores(tmp_path / "scores.jsonl")[0].normalized == 0.5
    ext.write_text('{"metric": "bad"}\n')
    assert main(["score", "--suite", str(pipeline / "suite.jsonl"), "--external-scores", str(ext),
                 "--out-dir", str(tmp_path)]) == 2


def test_score_unknown_metric(pipeline, tmp_path, demo_path):
    assert main(["score", "--suite", str(pipeline / "suite.jsonl"), "--dataset", str(demo_path),
                 "--metrics", "meteor", "--out-dir", str(tmp_path)]) == 2


def test_deviate_missing_penalty_exit_3(pipeline, tmp_path, capsys):
    pen = tmp_path / "p.csv"
    pen.write_text("template_id,annotator_id,penalty\nALL.punctuation,a,3\n")
    code = main(["deviate", "--suite", str(pipeline / "suite.jsonl"), "--scores", str(pipeline / "scores.jsonl"),
                 "--penalties", str(pen), "--out-dir", str(tmp_path)])
    assert code == 3
    assert "ALL.jumble_word_order" in capsys.readouterr().err


def _criteria_file(path, cols):
    lines = ["sample_id,criteria,score"]
    for name, vals in cols.items():
        lines += [f"s{i},{name},{v}" for i, v in enumerate(vals)]
    path.write_text("\n".join(lines) + "\n")


def test_correlate(tmp_path, capsys):
    crit = tmp_path / "c.csv"
    _criteria_file(crit, {"a": [1, 2, 3, 4], "b": [1, 2, 3, 4], "c": [2, 4, 6, 8]})
    assert main(["correlate", "--criteria-scores", str(crit), "--method", "pearson", "--format", "json",
                 "--out-dir", str(tmp_path)]) == 0
    s = parse_summary((tmp_path / "criteria_corr.json").read_bytes(), "json")
    assert all(c.value == pytest.approx(1.0) for c in s.records)
    assert s.bucket_counts == {"poor": 0, "moderate": 0, "high": 3}


def test_correlate_degenerate_is_flagged(tmp_path, capsys):
    crit = tmp_path / "c.csv"
    _criteria_file(crit, {"a": [1, 2, 3], "b": [5, 5, 5]})
    assert main(["correlate", "--criteria-scores", str(crit), "--out-dir", str(tmp_path)]) == 0
    assert "degenerate" in capsys.readouterr().err


def test_correlate_with_metric_scores(pipeline, tmp_path):
    crit = tmp_path / "c.csv"
    lines = ["sample_id,criteria,score"] + [f"mt-{i:02d},adequacy,{i % 4}" for i in range(1, 11)]
    crit.write_text("\n".join(lines) + "\n")
    assert main(["correlate", "--criteria-scores", str(crit), "--scores", str(pipeline / "scores.jsonl"),
                 "--out-dir", str(tmp_path)]) == 0
    assert (tmp_path / "metric_corr.csv").exists() and (tmp_path / "metric_corr.svg").exists()


def test_iaa(tmp_path):
    pen = tmp_path / "p.csv"
    rows = ["template_id,annotator_id,penalty"]
    for t, v in zip("ABCD", (1, 4, 2, 9)):
        rows += [f"{t},x,{v}", f"{t},y,{v}"]
    pen.write_text("\n".join(rows) + "\n")
    assert main(["iaa", "--penalties", str(pen), "--out-dir", str(tmp_path)]) == 0
    res = json.loads((tmp_path / "iaa.json").read_text())
    assert res["runs"] == [1.0] * 5 and res["mean"] == 1.0
    pen.write_text("template_id,annotator_id,penalty\nA,x,1\nA,y,1\nB,x,1\nB,y,1\n")
    assert main(["iaa", "--penalties", str(pen), "--out-dir", str(tmp_path)]) == 3


def test_fill_provider_flags(tmp_path, demo_path):
    assert main(["perturb", "--dataset", str(demo_path), "--fill-provider", "remote", "--out-dir", str(tmp_path)]) == 2
    assert main(["perturb", "--dataset", str(demo_path), "--fill-provider", "remote", "--fill-url", "nope",
                 "--out-dir", str(tmp_path)]) == 2
