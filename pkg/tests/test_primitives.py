import random
from collections import Counter

import pytest

from pertcheck.exceptions import EmptyPool, Inapplicable
from pertcheck.perturb.primitives import (
    BACKOFF_RESPONSE, append_text, change_numbers, drop_span, inject_spelling_error, jumble_word_order,
    lexical_swap, negate, nouns_to_pronouns, numerals_to_words_template, perturb_punctuation,
    previous_bot_utterance, reorder_sentences, repeat_span, replace_whole, subject_verb_disagree,
    swap_object_order, toggle_contraction,
)
from pertcheck.textkit.tokenize import split_sentences, tokenize


def R(seed=0):
    return random.Random(seed)


def words(text):
    return [t.text for t in tokenize(text)]


# fluency

def test_jumble_moves_a_word_and_keeps_tokens():
    out = jumble_word_order("We play badminton every evening.", R())
    assert out != "We play badminton every evening."
    assert Counter(words(out)) == Counter(words("We play badminton every evening."))
    assert out.endswith(".")


def test_jumble_needs_two_words():
    with pytest.raises(Inapplicable):
        jumble_word_order("Hello.", R())


@pytest.mark.parametrize("src,out", [
    ("He doesn't know how to bake.", "He don't know how to bake."),
    ("She has a dog.", "She have a dog."),
])
def test_subject_verb_disagree(src, out):
    assert subject_verb_disagree(src) == out


def test_spelling_error_changes_one_word():
    src = "Make the most of every opportunity"
    out = inject_spelling_error(src, R())
    a, b = words(src), words(out)
    assert len(a) == len(b)
    diff = [(x, y) for x, y in zip(a, b) if x != y]
    assert len(diff) == 1
    x, y = diff[0]
    assert x[0] == y[0]  # first letter kept
    assert len(y) in (len(x), len(x) - 1)


def test_punctuation_edits():
    out = perturb_punctuation("Could you let me know if I can meet him now or later?", R())
    assert out == "Could you let me know, if I can meet him now or later."


# drops

@pytest.mark.parametrize("kind,src,out", [
    ("question_word", "When was he born?", "Was he born?"),
    ("function_words", "The bank is willing to approve the loan.", "Bank willing to approve the loan."),
    ("objects", "A small boy playing with a red ball", "A small playing with a red"),
    ("content_phrase", "A small boy playing with a red ball", "A small boy playing with a"),
    ("stopwords", "Who was not a world leader?", "Who world leader?"),
])
def test_drop_span(kind, src, out):
    assert drop_span(src, kind, R()) == out


def test_drop_question_word_needs_one():
    with pytest.raises(Inapplicable):
        drop_span("He was born in May.", "question_word", R())


def test_drop_unknown_kind():
    with pytest.raises(ValueError):
        drop_span("A cat.", "everything", R())


# lexical swaps

@pytest.mark.parametrize("kind,src,out", [
    ("gender", "Two girls are playing with a doll", "Two boys are playing with a doll"),
    ("gender", "A small boy playing with a red ball", "A small girl playing with a red ball"),
    ("antonym", "The food was delicious and cheap.", "The food was delicious and expensive."),
    ("question_word", "When was he born?", "Why was he born?"),
])
def test_lexical_swap_goldens(kind, src, out):
    assert lexical_swap(src, kind, R()) == out


def test_name_swap_keeps_gender(lexicon):
    out = lexical_swap("Phillips was a child prodigy.", "name", R())
    new = words(out)[0]
    assert new != "Phillips" and new in lexicon.gazetteer


def test_name_swap_needs_a_person():
    with pytest.raises(Inapplicable):
        lexical_swap("The cat sat on the mat.", "name", R())


def test_swap_fixes_articles():
    for seed in range(20):
        try:
            out = lexical_swap("I saw a girl with an apple.", "hyponym_sibling", R(seed))
        except Inapplicable:
            continue
        toks = words(out.lower())
        for i, t in enumerate(toks[:-1]):
            if t == "a":
                assert toks[i + 1][0] not in "aeio"


# negation

@pytest.mark.parametrize("src,out", [
    ("It will rain on Monday.", "It will not rain on Monday."),
    ("I don't like it.", "I do like it."),
    ("He can't swim.", "He can swim."),
    ("Do you know him?", "Don't you know him?"),
    ("She walked home.", "She didn't walk home."),
    ("I have a headache.", "I don't have a headache."),
])
def test_negate(src, out):
    assert negate(src) == out


def test_negate_is_an_involution_on_simple_aux():
    once = negate("It will rain on Monday.")
    assert negate(once) == "It will rain on Monday."


def test_negate_previous_bot_utterance():
    ctx = ({"speaker": "bot", "text": "I love hiking."}, {"speaker": "user", "text": "Me too!"})
    assert previous_bot_utterance(ctx) == "I love hiking."
    assert negate("Nice.", "previous_bot_utterance", ctx) == "I don't love hiking."


# repetition, additions, replacement

def test_repeat_spans():
    assert repeat_span("My relatives are in town.", "sentence", rng=R()) == \
        "My relatives are in town. My relatives are in town."
    assert repeat_span("A lady riding a horse.", "object", rng=R()) == "A lady riding a horse and a lady."
    out = repeat_span("I like ice creams", "phrase", rng=R())
    assert out.startswith("I like ice creams") and len(words(out)) > 4


def test_repeat_utterance_uses_context():
    ctx = ({"speaker": "user", "text": "Where do you live?"}, {"speaker": "bot", "text": "In Paris."})
    out = repeat_span("I live in a small town.", "utterance", ctx, R())
    assert out != "I live in a small town."
    assert any(u["text"] in out for u in ctx)


def test_append_text():
    assert append_text("This book is so inspiring.", "wrong_info", ["I forgot"], R()) == \
        "This book is so inspiring, I forgot."
    with pytest.raises(EmptyPool):
        append_text("This book is so inspiring.", "wrong_info", [], R())


def test_replace_whole():
    assert replace_whole("Sure, sounds good.", "backoff") == BACKOFF_RESPONSE
    assert replace_whole("a", "random_response", ["a", "b"], R()) == "b"
    with pytest.raises(EmptyPool):
        replace_whole("a", "random_response", [], R())


# invariance

def test_contraction_toggle():
    assert toggle_contraction("We are going to embark on an adventure.", "contract") == \
        "We're going to embark on an adventure."
    assert toggle_contraction("There weren't any clear winners of the contest", "expand") == \
        "There were not any clear winners of the contest"
    with pytest.raises(Inapplicable):
        toggle_contraction("Nothing to see.", "expand")


@pytest.mark.parametrize("src,out", [
    ("trapped for 127 hours.", "trapped for one hundred twenty seven hours."),
    ("I have 2 cats.", "I have two cats."),
])
def test_numerals_to_words(src, out):
    assert numerals_to_words_template(src) == out


def test_numerals_need_digits():
    with pytest.raises(Inapplicable):
        numerals_to_words_template("No digits here.")


def test_change_numbers_keeps_digit_count():
    out = change_numbers("The cricketer was born in 1990.", R())
    n = words(out)[-2]
    assert n.isdigit() and len(n) == 4 and n != "1990"


# discourse

def test_reorder_sentences():
    src = "The pandemic was spreading uncontrollably. Vaccines are being developed rapidly."
    out = reorder_sentences(src, R())
    assert out != src
    assert Counter(s.strip() for s in split_sentences(out)) == Counter(s.strip() for s in split_sentences(src))
    with pytest.raises(Inapplicable):
        reorder_sentences("Only one sentence.", R())


def test_nouns_to_pronouns():
    assert nouns_to_pronouns("The pandemic was spreading uncontrollably. Vaccines are being developed rapidly.") \
        == "It was spreading uncontrollably. They are being developed rapidly."
    assert nouns_to_pronouns("Mary sings.") == "She sings."
    with pytest.raises(Inapplicable):
        nouns_to_pronouns("Running is fun.")


def test_swap_object_order():
    assert swap_object_order("The man is standing in front of a tree") == "The tree is standing in front of a man"
    with pytest.raises(Inapplicable):
        swap_object_order("A dog runs.")


def test_primitives_are_deterministic_given_rng():
    src = "The old man bought a large house near the station."
    for fn in (jumble_word_order, inject_spelling_error):
        assert fn(src, R(42)) == fn(src, R(42))
    assert lexical_swap(src, "synonym", R(9)) == lexical_swap(src, "synonym", R(9))
