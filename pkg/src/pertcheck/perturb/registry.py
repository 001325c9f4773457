"""Name -> primitive adapter table used by the catalog and the engine.

An adapter takes an :class:`ApplyContext` plus the template's params and
returns the perturbed text (or raises ``Inapplicable``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..exceptions import MalformedParams, UnknownPrimitive
from . import primitives as P


@dataclass
class ApplyContext:
    sample: object
    text: str
    rng: object
    lexicon: object
    pools: dict = field(default_factory=dict)
    fill_provider: object = None
    template_id: str = ""
    fills: list = field(default_factory=list)

    @property
    def key(self):
        return (self.sample.id, self.template_id)

    def pool(self, kind):
        """Pool entries for ``kind`` that come from other samples or the shipped list."""
        return [text for owner, text in self.pools.get(kind, ()) if owner != self.sample.id]


@dataclass(frozen=True)
class Primitive:
    name: str
    run: object
    params: dict  # param -> allowed values (None = free text)
    required: tuple = ()


def _prim(name, run, params=None, required=()):
    return Primitive(name, run, dict(params or {}), tuple(required))


def _needs_provider(ctx):
    if ctx.fill_provider is None:
        from ..fillmask import make_provider

        ctx.fill_provider = make_provider("lexicon", {"lexicon": ctx.lexicon})
    return ctx.fill_provider


PRIMITIVES = {p.name: p for p in (
    _prim("jumble_word_order", lambda c: P.jumble_word_order(c.text, c.rng, c.lexicon)),
    _prim("subject_verb_disagree", lambda c: P.subject_verb_disagree(c.text, c.lexicon)),
    _prim("inject_spelling_error", lambda c: P.inject_spelling_error(c.text, c.rng, c.lexicon)),
    _prim("perturb_punctuation", lambda c: P.perturb_punctuation(c.text, c.rng, c.lexicon)),
    _prim("drop_span", lambda c, kind: P.drop_span(c.text, kind, c.rng, c.lexicon),
          {"kind": ("function_words", "stopwords", "question_word", "content_phrase", "objects",
                    "words_or_phrases")}, ("kind",)),
    _prim("lexical_swap", lambda c, kind: P.lexical_swap(c.text, kind, c.rng, c.lexicon),
          {"kind": ("synonym", "antonym", "hyponym_sibling", "gender", "question_word", "name",
                    "attribute")}, ("kind",)),
    _prim("negate", lambda c, scope="this_sentence": P.negate(c.text, scope, c.sample.utterances, c.lexicon),
          {"scope": ("this_sentence", "previous_bot_utterance")}),
    _prim("repeat_span",
          lambda c, kind, joiner=",": P.repeat_span(c.text, kind, c.sample.utterances, c.rng, joiner, c.lexicon),
          {"kind": ("phrase", "sentence", "utterance", "object"), "joiner": (",", "and")}, ("kind",)),
    _prim("append_text", lambda c, kind: P.append_text(c.text, kind, c.pool(kind), c.rng, c.lexicon),
          {"kind": ("wrong_info", "nonsense")}, ("kind",)),
    _prim("replace_whole", lambda c, kind: P.replace_whole(c.text, kind, c.pool(kind), c.rng),
          {"kind": ("random_text", "random_response", "backoff")}, ("kind",)),
    _prim("toggle_contraction", lambda c, direction: P.toggle_contraction(c.text, direction, c.lexicon),
          {"direction": ("contract", "expand")}, ("direction",)),
    _prim("numerals_to_words_template", lambda c: P.numerals_to_words_template(c.text)),
    _prim("change_numbers", lambda c: P.change_numbers(c.text, c.rng)),
    _prim("reorder_sentences", lambda c: P.reorder_sentences(c.text, c.rng)),
    _prim("nouns_to_pronouns", lambda c: P.nouns_to_pronouns(c.text, c.lexicon)),
    _prim("question_to_assertion",
          lambda c: P.question_to_assertion(c.text, _needs_provider(c), c.lexicon, c.key, c.fills)),
    _prim("mask_and_fill",
          lambda c: P.mask_and_fill(c.text, _needs_provider(c), c.rng, c.lexicon, c.key, c.fills)),
    _prim("swap_object_order", lambda c: P.swap_object_order(c.text, c.lexicon)),
)}


def get_primitive(name: str) -> Primitive:
    try:
        return PRIMITIVES[name]
    except KeyError:
        raise UnknownPrimitive(f"unknown primitive {name!r}") from None


def check_params(name: str, params) -> None:
    """Raise MalformedParams unless ``params`` fit primitive ``name``."""
    prim = get_primitive(name)
    given = dict(params)
    for k, v in given.items():
        if k not in prim.params:
            raise MalformedParams(f"{name}: unexpected parameter {k!r}")
        allowed = prim.params[k]
        if allowed is not None and v not in allowed:
            raise MalformedParams(f"{name}: {k}={v!r} not in {list(allowed)}")
    for k in prim.required:
        if k not in given:
            raise MalformedParams(f"{name}: missing required parameter {k!r}")
