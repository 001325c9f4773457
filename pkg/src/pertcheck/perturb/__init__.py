"""Perturbation templates, the catalog and the suite engine."""

from .catalog import catalog_version, default_catalog_path, load_catalog, select_templates
from .engine import apply_template, build_pools, derive_seed, edit_spans, generate_suite
from .io import load_dataset, load_suite, write_dataset, write_suite
from .primitives import (
    append_text, change_numbers, drop_span, inject_spelling_error, jumble_word_order, lexical_swap,
    mask_and_fill, negate, nouns_to_pronouns, numerals_to_words_template, perturb_punctuation,
    question_to_assertion, reorder_sentences, repeat_span, replace_whole, subject_verb_disagree,
    swap_object_order, toggle_contraction,
)
from .registry import PRIMITIVES
from .types import EditSpan, PerturbedSample, Sample, Skip, TemplateSpec, TestSuite

__all__ = [
    "PRIMITIVES", "EditSpan", "PerturbedSample", "Sample", "Skip", "TemplateSpec", "TestSuite",
    "append_text", "apply_template", "build_pools", "catalog_version", "change_numbers",
    "default_catalog_path", "derive_seed", "drop_span", "edit_spans", "generate_suite",
    "inject_spelling_error", "jumble_word_order", "lexical_swap", "load_catalog", "load_dataset",
    "load_suite", "mask_and_fill", "negate", "nouns_to_pronouns", "numerals_to_words_template",
    "perturb_punctuation", "question_to_assertion", "reorder_sentences", "repeat_span",
    "replace_whole", "select_templates", "subject_verb_disagree", "swap_object_order",
    "toggle_contraction", "write_dataset", "write_suite",
]
