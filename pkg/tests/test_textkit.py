import random
from pathlib import Path

import pytest

from pertcheck.exceptions import EmptyResult, NotANumber, ParseError
from pertcheck.textkit.lexicon import ENV_VAR, load_lexicon, related_words, resolve_lexicon_dir
from pertcheck.textkit.numbers import number_to_words
from pertcheck.textkit.tagger import TAGSET, lemmatize, pos_tag, tag_text
from pertcheck.textkit.tokenize import detokenize, join_words, split_sentences, tokenize

from sentgen import random_corpus

ORACLE = Path(__file__).parent / "data" / "pos_oracle.txt"


# tokenizer

def test_clitics_are_split():
    assert [t.text for t in tokenize("He doesn't know.")] == ["He", "does", "n't", "know", "."]
    assert [t.text for t in tokenize("I can't go")] == ["I", "ca", "n't", "go"]
    assert [t.text for t in tokenize("We're here")] == ["We", "'re", "here"]


def test_offsets_index_the_source():
    text = "  Dr. Smith paid $5, didn't he?"
    for t in tokenize(text):
        assert text[t.start:t.end] == t.text


@pytest.mark.parametrize("text", random_corpus(100, seed=3) + ["  spaced   out  text ", "a\tb\nc", ""])
def test_detokenize_round_trip(text):
    assert detokenize(tokenize(text)) == text


def test_join_words_spacing():
    assert join_words(["He", "does", "n't", "know", ",", "right", "?"]) == "He doesn't know, right?"


def test_split_sentences_concatenates_back():
    text = "Dr. Smith arrived. He sat down! Then? ok"
    parts = split_sentences(text)
    assert parts == ["Dr. Smith arrived. ", "He sat down! ", "Then? ok"]
    assert "".join(parts) == text
    assert split_sentences("") == []


# numbers

@pytest.mark.parametrize("numeral,words", [
    ("127", "one hundred twenty seven"), ("2", "two"), ("0", "zero"), ("10", "ten"),
    ("1990", "one thousand nine hundred ninety"), ("1,000,000", "one million"), ("40", "forty"),
    ("115", "one hundred fifteen"),
])
def test_number_to_words(numeral, words):
    assert number_to_words(numeral) == words


@pytest.mark.parametrize("bad", ["", "-3", "3.5", "abc", "1,00", 12])
def test_number_to_words_rejects(bad):
    with pytest.raises(NotANumber):
        number_to_words(bad)


# lexicon

def test_related_words(lexicon):
    assert related_words("happy", "ADJ", "antonym", lexicon) == ["unhappy"]
    sibs = related_words("car", "NOUN", "sibling", lexicon)
    assert "car" not in sibs and sibs == sorted(sibs)
    with pytest.raises(EmptyResult):
        related_words("zzzqx", "NOUN", "synonym", lexicon)
    with pytest.raises(ValueError):
        related_words("car", "NOUN", "cousin", lexicon)


def test_gender_pairs_are_an_involution(lexicon):
    for a, b in lexicon.gender_pairs.items():
        assert lexicon.gender_pairs[b] == a


def test_lexicon_env_var_and_missing_dir(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_VAR, str(tmp_path))
    assert resolve_lexicon_dir() == tmp_path.resolve()
    with pytest.raises(ParseError):
        load_lexicon()  # empty directory lacks the required files
    with pytest.raises(ParseError):
        load_lexicon(tmp_path / "nope")


# tagger

def _oracle():
    for line in ORACLE.read_text(encoding="utf-8").splitlines():
        if line.strip() and not line.startswith("#"):
            pairs = [p.rsplit("/", 1) for p in line.split()]
            yield [w for w, _ in pairs], [t for _, t in pairs]


def test_pos_accuracy_on_hand_tagged_oracle(lexicon):
    right = total = 0
    for words, gold in _oracle():
        toks = tokenize(join_words(words))
        assert [t.text for t in toks] == words
        tags = pos_tag(toks, lexicon).tags
        right += sum(a == b for a, b in zip(tags, gold))
        total += len(gold)
    assert total > 1000
    assert right / total >= 0.90


def test_tags_come_from_tagset(lexicon):
    for text in random_corpus(50, seed=1):
        assert set(pos_tag(text, lexicon).tags) <= set(TAGSET)


def test_terminal_punct_index(lexicon):
    t = pos_tag("Is it raining?", lexicon)
    assert t.terminal_punct == len(t) - 1
    assert pos_tag("no stop here", lexicon).terminal_punct is None


def test_entities(lexicon):
    t = tag_text("Aaron visited Paris with Google engineers.", lexicon)
    ents = {x.text: x.entity for x in t}
    assert ents["Aaron"] == "PERSON"
    assert ents["Paris"] == "LOCATION"
    assert ents["Google"] == "ORG"
    assert ents["engineers"] == "NONE"
    assert all(x.entity == "NONE" for x in tag_text("the cat sat on the mat.", lexicon))


def test_lemmatize(lexicon):
    assert lemmatize("knows", "VERB", lexicon) == "know"
    assert lemmatize("girls", "NOUN", lexicon) == "girl"


def test_tagging_is_deterministic(lexicon):
    texts = random_corpus(20, seed=random.Random(5).randrange(100))
    assert [pos_tag(t, lexicon).tags for t in texts] == [pos_tag(t, lexicon).tags for t in texts]
