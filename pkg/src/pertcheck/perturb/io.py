"""Dataset and suite JSON-lines I/O."""

from __future__ import annotations

import json
from pathlib import Path

from ..exceptions import ConfigError, ParseError
from .types import PerturbedSample, Sample, Skip, TestSuite


def dumps(obj) -> str:
    """Canonical JSON used for every file pertcheck writes."""
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def _jsonl(path):
    path = Path(path)
    try:
        fh = path.open(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read: {exc.strerror}", path) from None
    with fh:
        for n, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                yield n, json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}", path, n) from None


def load_dataset(path) -> list[Sample]:
    samples, seen = [], set()
    for n, rec in _jsonl(path):
        if not isinstance(rec, dict):
            raise ParseError("each line must be a JSON object", path, n)
        try:
            s = Sample.from_dict(rec)
        except ConfigError as exc:
            raise ParseError(str(exc), path, n) from None
        if s.id in seen:
            raise ParseError(f"duplicate sample id {s.id!r}", path, n)
        seen.add(s.id)
        samples.append(s)
    if not samples:
        raise ParseError("dataset is empty", path)
    return samples


def write_dataset(samples, path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        for s in samples:
            fh.write(dumps(s.to_dict()) + "\n")


def suite_manifest(suite: TestSuite) -> dict:
    return {
        "dataset_id": suite.dataset_id,
        "catalog_version": suite.catalog_version,
        "master_seed": suite.master_seed,
        "counts": suite.counts(),
        "skipped": [[s.sample_id, s.template_id, s.reason] for s in suite.skipped],
    }


def format_suite(suite: TestSuite) -> str:
    lines = [dumps(it.to_dict()) for it in suite.items]
    lines.append(dumps({"manifest": suite_manifest(suite)}))
    return "\n".join(lines) + "\n"


def write_suite(suite: TestSuite, path) -> None:
    Path(path).write_text(format_suite(suite), encoding="utf-8", newline="\n")


def load_suite(path) -> TestSuite:
    items, manifest = [], None
    for n, rec in _jsonl(path):
        if manifest is not None:
            raise ParseError("records after the manifest line", path, n)
        if "manifest" in rec:
            manifest = rec["manifest"]
            continue
        try:
            items.append(PerturbedSample.from_dict(rec))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad suite record: {exc}", path, n) from None
    if manifest is None:
        raise ParseError("suite has no trailing manifest line", path)
    return TestSuite(
        dataset_id=manifest["dataset_id"], catalog_version=manifest["catalog_version"],
        master_seed=int(manifest["master_seed"]), items=items,
        skipped=[Skip(*s) for s in manifest.get("skipped", ())],
    )
