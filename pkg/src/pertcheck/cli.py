"""Command-line front end: perturb, score, deviate, correlate, iaa, replay.

Every command writes its outputs plus ``<command>.manifest.json`` into
``--out-dir``. A manifest records the arguments, the content hashes of
inputs and outputs, and the package version; ``pertcheck replay`` reruns
it and checks the outputs are byte-identical.

Exit codes: 0 success, 2 configuration or validation error, 3 data
coverage failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from pathlib import Path

from . import __version__
from .exceptions import (
    ConfigError, DegenerateInput, EmptyMatrix, EmptyPool, MalformedParams, MissingPenalty, MissingSample,
    OutOfRange, ParseError, PertcheckError, ProviderError, RangeViolation, UnknownPrimitive,
)
from .fillmask import make_provider
from .judge import (
    aggregate_deviation, align, criteria_matrix, iaa_runs, load_criteria_scores, load_penalties,
    metric_criteria_corr,
)
from .metrics import load_external_scores, load_scores, load_vectors, oracle_scores, score_suite, write_scores
from .metrics.scores import ORACLE
from .perturb import generate_suite, load_catalog, load_dataset, load_suite, select_templates, write_suite
from .perturb.catalog import catalog_version, default_catalog_path
from .perturb.io import dumps
from .report import (
    correlation_cells, correlation_heatmap, deviation_heatmap, export_summary, render_heatmap,
)
from .textkit.lexicon import ENV_VAR, load_lexicon, resolve_lexicon_dir
from .validation import check_consistent, check_jobs, check_metrics, check_seed

EXIT_OK, EXIT_CONFIG, EXIT_COVERAGE = 0, 2, 3
DEFAULT_SEED = 7
DEFAULT_METRICS = "bleu,rouge_l,chrf_pp,ter"
COVERAGE_ERRORS = (MissingSample, MissingPenalty, DegenerateInput)
CONFIG_ERRORS = (ConfigError, ParseError, MalformedParams, UnknownPrimitive, OutOfRange, RangeViolation,
                 EmptyPool, ProviderError, EmptyMatrix)

# manifest keys for path-valued arguments whose content is hashed
INPUT_ARGS = ("dataset", "catalog", "suite", "scores", "penalties", "criteria_scores", "vectors",
              "external_scores", "lexicon_dir")


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def sha256_dir(path) -> str:
    h = hashlib.sha256()
    for p in sorted(Path(path).iterdir()):
        if p.is_file():
            h.update(p.name.encode("utf-8") + b"\0" + p.read_bytes() + b"\0")
    return h.hexdigest()


def _csv_list(value):
    return [v.strip() for v in value.split(",") if v.strip()] if value else None


def _require(path, what):
    if path is None:
        raise ConfigError(f"--{what} is required")
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"--{what}: path does not exist: {p}")
    return p


def _out_dir(args) -> Path:
    d = Path(args.out_dir)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _lexicon_dir(args):
    if args.lexicon_dir is not None:
        p = Path(args.lexicon_dir)
        if not p.is_dir():
            raise ConfigError(f"--lexicon-dir: directory does not exist: {p}")
        return p
    env = os.environ.get(ENV_VAR)
    if env and not Path(env).is_dir():
        raise ConfigError(f"{ENV_VAR}: directory does not exist: {env}")
    return resolve_lexicon_dir(None)


def _default(args, name, out, filename):
    """Path argument with a fallback to a file in the output directory."""
    value = getattr(args, name)
    return Path(value) if value is not None else out / filename


def _write(out: Path, name: str, data, written: dict):
    if isinstance(data, str):
        data = data.encode("utf-8")
    (out / name).write_bytes(data)
    written[name] = hashlib.sha256(data).hexdigest()


def _write_manifest(args, out: Path, written: dict, extra=None):
    inputs = {}
    for name in INPUT_ARGS:
        value = getattr(args, name, None)
        if value is None:
            continue
        for v in value if isinstance(value, list) else [value]:
            p = Path(v)
            if p.is_dir():
                inputs.setdefault(name, []).append({"path": str(v), "sha256": sha256_dir(p)})
            elif p.is_file():
                inputs.setdefault(name, []).append({"path": str(v), "sha256": sha256_file(p)})
    recorded = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out_dir")}
    manifest = {
        "command": args.command,
        "version": __version__,
        "args": recorded,
        "inputs": inputs,
        "outputs": dict(sorted(written.items())),
    }
    manifest.update(extra or {})
    text = json.dumps(manifest, sort_keys=True, indent=1, ensure_ascii=False) + "\n"
    (out / f"{args.command}.manifest.json").write_text(text, encoding="utf-8")
    return manifest


def _provider(args, lexicon):
    kind = args.fill_provider
    if kind == "lexicon":
        return make_provider("lexicon", {"lexicon": lexicon})
    if kind == "file":
        if not args.fill_url:
            raise ConfigError("--fill-provider file needs --fill-url pointing at a fills file")
        path = args.fill_url[len("file://"):] if args.fill_url.startswith("file://") else args.fill_url
        return make_provider("file", {"path": str(_require(path, "fill-url"))})
    if not args.fill_url:
        raise ConfigError("--fill-provider remote needs --fill-url")
    return make_provider("remote", {"url": args.fill_url})


# commands


def cmd_perturb(args) -> int:
    dataset_path = _require(args.dataset, "dataset")
    catalog_path = _require(args.catalog, "catalog") if args.catalog else default_catalog_path()
    seed = check_seed(args.seed)
    jobs = check_jobs(args.jobs)
    lexdir = _lexicon_dir(args)
    lexicon = load_lexicon(lexdir)
    dataset = load_dataset(dataset_path)
    specs = select_templates(load_catalog(catalog_path), _csv_list(args.templates), _csv_list(args.tasks))
    suite = generate_suite(dataset, specs, seed, lexicon=lexicon, fill_provider=_provider(args, lexicon),
                           jobs=jobs, dataset_id=dataset_path.stem)
    out = _out_dir(args)
    written = {}
    write_suite(suite, out / "suite.jsonl")
    written["suite.jsonl"] = sha256_file(out / "suite.jsonl")
    _write_manifest(args, out, written, {"seed": seed, "catalog_version": catalog_version(specs),
                                         "lexicon": {"path": str(lexdir), "sha256": sha256_dir(lexdir)}})
    c = suite.counts()
    print(f"suite: {c['items']} items, {c['skipped']} skipped -> {out / 'suite.jsonl'}")
    return EXIT_OK


def _human_table(args, suite):
    table = load_penalties(_require(args.penalties, "penalties"))
    h = {}
    for it in suite.items:
        if it.template_id not in h:
            h[it.template_id] = table.quality(it.template_id).h_perturbed
    return table, h


def cmd_score(args) -> int:
    out = _out_dir(args)
    suite = load_suite(_require(_default(args, "suite", out, "suite.jsonl"), "suite"))
    metrics = _csv_list(args.metrics) if args.metrics is not None else _csv_list(DEFAULT_METRICS)
    if args.external_scores and args.metrics is None:
        metrics = []
    vectors = load_vectors(_require(args.vectors, "vectors")) if args.vectors else None
    metrics = check_metrics(metrics or [], vectors, allow_oracle=True)
    scores = []
    native = [m for m in metrics if m != ORACLE]
    if native:
        dataset = load_dataset(_require(args.dataset, "dataset"))
        check_consistent(suite, dataset)
        scores += score_suite(suite, dataset, native, vectors=vectors, jobs=check_jobs(args.jobs))
    if ORACLE in metrics:
        scores += oracle_scores(suite, _human_table(args, suite)[1])
    for path in args.external_scores or []:
        scores += load_external_scores(_require(path, "external-scores"))
    if not scores:
        raise ConfigError("nothing to score: give --metrics and/or --external-scores")
    written = {}
    write_scores(scores, out / "scores.jsonl")
    written["scores.jsonl"] = sha256_file(out / "scores.jsonl")
    _write_manifest(args, out, written)
    print(f"scores: {len(scores)} rows -> {out / 'scores.jsonl'}")
    return EXIT_OK


def _formats(args, choices, default):
    picked = [f for f in (args.format or []) if f in choices]
    return picked or [default]


def cmd_deviate(args) -> int:
    out = _out_dir(args)
    suite = load_suite(_require(_default(args, "suite", out, "suite.jsonl"), "suite"))
    scores = load_scores(_require(_default(args, "scores", out, "scores.jsonl"), "scores"))
    table, h = _human_table(args, suite)
    metrics = _csv_list(args.metrics)
    if metrics and ORACLE in metrics and not any(s.metric_id == ORACLE for s in scores):
        scores = scores + oracle_scores(suite, h)
    records, gaps = aggregate_deviation(suite, scores, table, metrics)
    if not records:
        raise MissingSample("no item has scores for both variants")
    manifest = {"master_seed": suite.master_seed, "catalog_version": suite.catalog_version}
    written = {}
    for fmt in _formats(args, ("csv", "json"), "csv"):
        _write(out, f"deviation.{fmt}",
               export_summary(records, fmt, gaps=gaps, manifest=manifest), written)
    hm = deviation_heatmap(records, "absolute deviation from human scores (mean |s|)")
    for fmt in _formats(args, ("svg", "text"), "svg"):
        _write(out, "deviation." + ("svg" if fmt == "svg" else "txt"), render_heatmap(hm, fmt), written)
    _write_manifest(args, out, written, manifest)
    for r in records:
        print(f"{r.metric_id:10s} {r.template_id:32s} mean_s={r.mean_s:+.4f} mean_abs_s={r.mean_abs_s:.4f} n={r.n_items}")
    if gaps:
        print(f"coverage gaps: {len(gaps)} missing scores (listed in the summary)", file=sys.stderr)
    return EXIT_OK


def _sample_metric_columns(scores, sample_ids):
    """Per-sample metric value: mean normalized score of the sample's original variants."""
    acc = {}
    for s in scores:
        if s.variant == "original":
            acc.setdefault(s.metric_id, {}).setdefault(s.sample_id, []).append(s.normalized)
    return {m: {sid: math.fsum(v) / len(v) for sid, v in per.items() if sid in sample_ids} for m, per in acc.items()}


def _emit_matrix(args, out, name, matrix, title, written, manifest):
    cells = correlation_cells(matrix)
    for fmt in _formats(args, ("csv", "json"), "csv"):
        _write(out, f"{name}.{fmt}", export_summary(cells, fmt, manifest=manifest,
                                                     bucket_counts=matrix.buckets()), written)
    hm = correlation_heatmap(matrix, title)
    for fmt in _formats(args, ("svg", "text"), "svg"):
        _write(out, f"{name}." + ("svg" if fmt == "svg" else "txt"), render_heatmap(hm, fmt), written)
    b = matrix.buckets()
    print(f"{name}: poor={b['poor']} moderate={b['moderate']} high={b['high']}")
    for r, c in matrix.flagged:
        print(f"{name}: degenerate cell ({r}, {c}) flagged", file=sys.stderr)


def cmd_correlate(args) -> int:
    out = _out_dir(args)
    crit = load_criteria_scores(_require(args.criteria_scores, "criteria-scores"))
    method = "pearson" if args.method == "pearson" else "kendall_b"
    ids, cols, dropped = align(crit)
    if len(ids) < 2:
        raise DegenerateInput("fewer than 2 samples have scores for every criteria")
    manifest = {"method": method, "n_samples": len(ids), "dropped_samples": dropped}
    written = {}
    if len(cols) >= 2:
        _emit_matrix(args, out, "criteria_corr", criteria_matrix(cols, method),
                     "correlations between criteria", written, manifest)
    elif not args.scores:
        raise DegenerateInput("need at least 2 criteria, or --scores to correlate metrics against")
    if args.scores:
        scores = load_scores(_require(args.scores, "scores"))
        per = _sample_metric_columns(scores, set(ids))
        joint = {**{"metric:" + m: v for m, v in per.items()}, **{"criteria:" + c: dict(zip(ids, cols[c])) for c in cols}}
        jids, jcols, _ = align(joint)
        if len(jids) < 2:
            raise DegenerateInput("fewer than 2 samples have both metric and criteria scores")
        mcols = {k[7:]: v for k, v in jcols.items() if k.startswith("metric:")}
        ccols = {k[9:]: v for k, v in jcols.items() if k.startswith("criteria:")}
        _emit_matrix(args, out, "metric_corr", metric_criteria_corr(mcols, ccols, method),
                     "correlations of metrics with criteria", written, {**manifest, "n_samples": len(jids)})
    _write_manifest(args, out, written)
    return EXIT_OK


def cmd_iaa(args) -> int:
    out = _out_dir(args)
    table = load_penalties(_require(args.penalties, "penalties"))
    annotators = sorted({a for rows in table.entries.values() for a, _ in rows})
    items = [t for t, rows in table.entries.items() if len(rows) == len(annotators)]
    if len(annotators) < 2 or len(items) < 2:
        raise DegenerateInput("need at least 2 annotators who rated at least 2 common templates")
    lookup = {(t, a): p for t, rows in table.entries.items() for a, p in rows}
    matrix = [[lookup[t, a] for t in items] for a in annotators]
    runs = iaa_runs(matrix, args.runs, check_seed(args.seed))
    result = {"runs": runs, "mean": math.fsum(runs) / len(runs), "n_annotators": len(annotators),
              "n_items": len(items), "seed": args.seed}
    written = {}
    _write(out, "iaa.json", dumps(result) + "\n", written)
    _write_manifest(args, out, written)
    print(f"iaa (split-half kendall tau-b, {args.runs} runs): {result['mean']:.4f}")
    return EXIT_OK


def cmd_replay(args) -> int:
    mpath = _require(args.manifest, "manifest")
    manifest = json.loads(mpath.read_text(encoding="utf-8"))
    for name, entries in manifest["inputs"].items():
        for e in entries:
            p = Path(e["path"])
            now = sha256_dir(p) if p.is_dir() else sha256_file(p) if p.is_file() else None
            if now != e["sha256"]:
                raise ConfigError(f"input {e['path']} changed since the manifest was written")
    lex = manifest.get("lexicon")
    if lex and (not Path(lex["path"]).is_dir() or sha256_dir(lex["path"]) != lex["sha256"]):
        raise ConfigError(f"lexicon {lex['path']} changed since the manifest was written")
    out = Path(args.out_dir) if args.out_dir else mpath.parent
    argv = [manifest["command"]]
    if lex and manifest["args"].get("lexicon_dir") is None:
        argv += ["--lexicon-dir", lex["path"]]
    for k, v in manifest["args"].items():
        if k in ("command",) or v is None or v is False:
            continue
        flag = "--" + k.replace("_", "-")
        if v is True:
            argv.append(flag)
        elif isinstance(v, list):
            for x in v:
                argv += [flag, str(x)]
        else:
            argv += [flag, str(v)]
    argv += ["--out-dir", str(out)]
    code = main(argv)
    if code:
        return code
    bad = [n for n, h in manifest["outputs"].items() if sha256_file(out / n) != h]
    if bad:
        print("replay mismatch: " + ", ".join(bad), file=sys.stderr)
        return EXIT_CONFIG
    print(f"replay ok: {len(manifest['outputs'])} output(s) byte-identical")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pertcheck", description="Perturbation checklists for NLG evaluation metrics.")
    ap.add_argument("--version", action="version", version=f"pertcheck {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, seed=False):
        p.add_argument("--out-dir", default=".", help="output directory (default: current)")
        if seed:
            p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="master seed (default 7)")

    def fmt(p):
        p.add_argument("--format", action="append", choices=("svg", "text", "csv", "json"),
                       help="heatmap (svg/text) and summary (csv/json) formats; repeatable")

    p = sub.add_parser("perturb", help="generate a perturbation test suite")
    common(p, seed=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--catalog")
    p.add_argument("--lexicon-dir", help=f"lexicon directory (fallback: ${ENV_VAR}, then bundled)")
    p.add_argument("--tasks", help="comma-separated task tags, e.g. MT,AS")
    p.add_argument("--templates", help="comma-separated template ids")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--fill-provider", choices=("lexicon", "file", "remote"), default="lexicon")
    p.add_argument("--fill-url", help="fills file path (file provider) or server URL (remote provider)")
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("score", help="score suite items with metrics")
    common(p)
    p.add_argument("--suite", help="suite file (default: OUT/suite.jsonl)")
    p.add_argument("--dataset")
    p.add_argument("--metrics", help=f"comma-separated metric ids (default {DEFAULT_METRICS}); "
                                     "'oracle' needs --penalties")
    p.add_argument("--vectors", help="word vectors for emb_* metrics")
    p.add_argument("--external-scores", action="append", help="external scores JSON-lines; repeatable")
    p.add_argument("--penalties")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("deviate", help="deviation of metric scores from human penalties")
    common(p)
    fmt(p)
    p.add_argument("--suite", help="suite file (default: OUT/suite.jsonl)")
    p.add_argument("--scores", help="scores file (default: OUT/scores.jsonl)")
    p.add_argument("--penalties", required=True)
    p.add_argument("--metrics", help="restrict to these metric ids; 'oracle' adds the f == h control")
    p.set_defaults(func=cmd_deviate)

    p = sub.add_parser("correlate", help="criteria-criteria and metric-criteria correlations")
    common(p)
    fmt(p)
    p.add_argument("--criteria-scores", required=True)
    p.add_argument("--scores", help="metric scores to correlate with the criteria")
    p.add_argument("--method", choices=("kendall", "pearson"), default="kendall")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("iaa", help="split-half inter-annotator agreement of a penalty table")
    common(p, seed=True)
    p.add_argument("--penalties", required=True)
    p.add_argument("--runs", type=int, default=5)
    p.set_defaults(func=cmd_iaa)

    p = sub.add_parser("replay", help="rerun a manifest and check outputs are byte-identical")
    p.add_argument("manifest")
    p.add_argument("--out-dir", help="write outputs here instead of next to the manifest")
    p.set_defaults(func=cmd_replay)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        if getattr(args, "runs", 1) < 1:
            raise ConfigError("--runs must be >= 1")
        return args.func(args)
    except COVERAGE_ERRORS as exc:
        print(f"pertcheck: coverage error: {exc}", file=sys.stderr)
        return EXIT_COVERAGE
    except CONFIG_ERRORS as exc:
        print(f"pertcheck: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PertcheckError as exc:
        print(f"pertcheck: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
