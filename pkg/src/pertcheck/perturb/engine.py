"""Applying templates to samples and building test suites."""

from __future__ import annotations

import difflib
import hashlib
import multiprocessing as mp
import random
from concurrent.futures import ProcessPoolExecutor
from importlib import resources

from ..exceptions import ConfigError, Inapplicable, NoCandidates
from ..textkit.lexicon import load_lexicon
from ..textkit.tokenize import split_sentences, tokenize
from .catalog import catalog_version
from .registry import ApplyContext, check_params, get_primitive
from .types import EditSpan, PerturbedSample, Skip, TestSuite

POOL_KINDS = ("wrong_info", "nonsense", "random_text", "random_response")
SHIPPED = ""  # owner id of shipped pool entries


def derive_seed(master_seed, sample_id, template_id) -> int:
    """64-bit seed from (master seed, sample id, template id)."""
    raw = f"{int(master_seed)}\x1f{sample_id}\x1f{template_id}".encode("utf-8")
    return int.from_bytes(hashlib.sha256(raw).digest()[:8], "big")


def shipped_pool(kind) -> list[str]:
    text = (resources.files("pertcheck") / "data" / "pools" / f"{kind}.txt").read_text(encoding="utf-8")
    return [ln.strip() for ln in text.splitlines() if ln.strip()]


def build_pools(dataset) -> dict:
    """Distractor pools as (owner sample id, text) pairs, in dataset order."""
    others = [(s.id, s.references[0]) for s in dataset]
    dg = [(s.id, s.references[0]) for s in dataset if s.task == "DG"]

    def shipped(kind):
        return [(SHIPPED, t) for t in shipped_pool(kind)]

    first_sentences = [(sid, split_sentences(text)[0].strip()) for sid, text in others if text.strip()]
    # wrong information should read as a statement
    first_sentences = [(sid, t) for sid, t in first_sentences if t.endswith(".")]
    return {
        "wrong_info": shipped("wrong_info") + first_sentences,
        "nonsense": shipped("nonsense"),
        "random_text": others + shipped("random_text"),
        "random_response": dg + shipped("random_response"),
    }


def edit_spans(original: str, perturbed: str) -> tuple:
    """Token-level diff as character spans of ``original`` and their replacements."""
    a, b = tokenize(original), tokenize(perturbed)
    sm = difflib.SequenceMatcher(a=[t.text for t in a], b=[t.text for t in b], autojunk=False)
    spans = []
    for op, i1, i2, j1, j2 in sm.get_opcodes():
        if op == "equal":
            continue
        if i1 < i2:
            start, end = a[i1].start, a[i2 - 1].end
        else:
            start = end = a[i1].start if i1 < len(a) else len(original.rstrip())
        rep = perturbed[b[j1].start:b[j2 - 1].end] if j1 < j2 else ""
        spans.append(EditSpan(start, end, original[start:end], rep))
    if not spans and original != perturbed:
        # whitespace-only change
        spans.append(EditSpan(0, len(original), original, perturbed))
    return tuple(spans)


def apply_template(spec, sample, seed, *, lexicon=None, pools=None, fill_provider=None):
    """Apply one template to the sample's first reference.

    Returns a :class:`PerturbedSample`, or an :class:`Inapplicable` instance
    (returned, not raised) when the primitive's preconditions fail.
    """
    if not spec.applies_to(sample.task):
        raise ConfigError(f"template {spec.template_id} ({spec.task}) does not apply to {sample.task} sample")
    prim = get_primitive(spec.primitive)
    check_params(spec.primitive, spec.params)
    item_seed = derive_seed(seed, sample.id, spec.template_id)
    original = sample.references[0]
    ctx = ApplyContext(
        sample=sample, text=original, rng=random.Random(item_seed),
        lexicon=lexicon or load_lexicon(), pools=pools if pools is not None else {},
        fill_provider=fill_provider, template_id=spec.template_id,
    )
    try:
        out = prim.run(ctx, **spec.param_dict)
    except Inapplicable as exc:
        return exc
    except NoCandidates as exc:
        return Inapplicable(f"no fill candidates: {exc}")
    if out == original:
        return Inapplicable("perturbation left the text unchanged")
    return PerturbedSample(
        sample_id=sample.id, template_id=spec.template_id, criteria=spec.criteria,
        original=original, perturbed=out, edit_spans=edit_spans(original, out), seed=item_seed,
        fills=tuple(tuple(f) for f in ctx.fills),
    )


# worker state, set before forking so children inherit the loaded lexicon
_WORKER = {}


def _run_sample(index):
    w = _WORKER
    sample = w["dataset"][index]
    items, skips = [], []
    for spec in w["catalog"]:
        if not spec.applies_to(sample.task):
            continue
        res = apply_template(spec, sample, w["seed"], lexicon=w["lexicon"], pools=w["pools"],
                             fill_provider=w["provider"])
        if isinstance(res, Inapplicable):
            skips.append(Skip(sample.id, spec.template_id, res.reason))
        else:
            items.append(res)
    return items, skips


def generate_suite(dataset, catalog, master_seed, *, lexicon=None, fill_provider=None, pools=None,
                   jobs=1, dataset_id="dataset", version=None) -> TestSuite:
    """Apply every task-compatible template to every sample.

    Output order is sample order then catalog order, whatever ``jobs`` is.
    """
    dataset = list(dataset)
    catalog = list(catalog)
    ids = [s.id for s in dataset]
    if len(set(ids)) != len(ids):
        raise ConfigError("sample ids must be unique within a dataset")
    suite = TestSuite(dataset_id, version or catalog_version(catalog), int(master_seed))
    if not dataset or not catalog:
        return suite
    _WORKER.update(
        dataset=dataset, catalog=catalog, seed=int(master_seed), lexicon=lexicon or load_lexicon(),
        pools=pools if pools is not None else build_pools(dataset), provider=fill_provider,
    )
    try:
        jobs = max(1, int(jobs or 1))
        if jobs == 1 or len(dataset) == 1 or "fork" not in mp.get_all_start_methods():
            results = map(_run_sample, range(len(dataset)))
            results = list(results)
        else:
            chunk = max(1, len(dataset) // (jobs * 4))
            with ProcessPoolExecutor(jobs, mp_context=mp.get_context("fork")) as ex:
                results = list(ex.map(_run_sample, range(len(dataset)), chunksize=chunk))
    finally:
        _WORKER.clear()
    for items, skips in results:
        suite.items.extend(items)
        suite.skipped.extend(skips)
    return suite
