"""Template catalog loading and validation."""

from __future__ import annotations

import csv
import hashlib
from importlib import resources
from pathlib import Path

from ..exceptions import MalformedParams, ParseError
from .registry import check_params, get_primitive
from .types import CRITERIA, TASKS, TemplateSpec, format_params, parse_params

COLUMNS = ("template_id", "task", "criteria", "primitive", "params")


def default_catalog_path() -> Path:
    return Path(str(resources.files("pertcheck") / "data" / "catalog.tsv"))


def parse_catalog(text: str, path="<catalog>") -> list[TemplateSpec]:
    rows = list(csv.reader(text.splitlines(), delimiter="\t", quoting=csv.QUOTE_NONE))
    if not rows or tuple(c.strip() for c in rows[0]) != COLUMNS:
        raise ParseError("catalog header must be: " + " | ".join(COLUMNS), path, 1)
    specs, ids, keys = [], set(), set()
    for n, row in enumerate(rows[1:], 2):
        if not row or not "".join(row).strip() or row[0].startswith("#"):
            continue
        if len(row) != len(COLUMNS):
            raise ParseError(f"expected {len(COLUMNS)} columns, got {len(row)}", path, n)
        tid, task, criteria, prim, params = (c.strip() for c in row)
        if task != "ALL" and task not in TASKS:
            raise ParseError(f"unknown task {task!r}", path, n)
        if criteria not in CRITERIA:
            raise ParseError(f"unknown criteria {criteria!r}", path, n)
        get_primitive(prim)
        try:
            pairs = parse_params(params)
            check_params(prim, pairs)
        except MalformedParams as exc:
            raise MalformedParams(f"{path}:{n}: {exc}") from None
        spec = TemplateSpec(tid, task, criteria, prim, pairs)
        if tid in ids:
            raise ParseError(f"duplicate template_id {tid!r}", path, n)
        if spec.key in keys:
            raise ParseError(f"duplicate (task, criteria, primitive, params) row for {tid!r}", path, n)
        ids.add(tid)
        keys.add(spec.key)
        specs.append(spec)
    return specs


def load_catalog(path=None) -> list[TemplateSpec]:
    """Load and validate a catalog TSV (the bundled one when ``path`` is None)."""
    p = Path(path) if path is not None else default_catalog_path()
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read catalog: {exc.strerror}", p) from None
    return parse_catalog(text, p)


def format_catalog(specs) -> str:
    lines = ["\t".join(COLUMNS)]
    for s in specs:
        lines.append("\t".join((s.template_id, s.task, s.criteria, s.primitive, format_params(s.params))))
    return "\n".join(lines) + "\n"


def catalog_version(specs) -> str:
    """Short content hash of the canonical catalog text."""
    return hashlib.sha256(format_catalog(specs).encode("utf-8")).hexdigest()[:12]


def select_templates(specs, templates=None, tasks=None) -> list[TemplateSpec]:
    """Filter by template ids and/or task tags (ALL templates match every task)."""
    out = list(specs)
    if templates:
        want = set(templates)
        unknown = want - {s.template_id for s in out}
        if unknown:
            from ..exceptions import ConfigError

            raise ConfigError(f"unknown template ids: {', '.join(sorted(unknown))}")
        out = [s for s in out if s.template_id in want]
    if tasks:
        want = set(tasks)
        out = [s for s in out if s.task == "ALL" or s.task in want]
    return out
