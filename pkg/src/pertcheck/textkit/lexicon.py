"""Read-only lexical resources loaded from a directory of TSV/TXT files.

Directory layout (UTF-8, tab separated, ``#`` starts a comment line):

``synsets.tsv``          word, pos, ``synonym``, target
``antonyms.tsv``         word, pos, ``antonym``, target
``hypernyms.tsv``        word, pos, ``hypernym``|``similar``, target synset id
``gender.tsv``           word, partner, gender (M/F); both directions listed
``contractions.tsv``     form, partner; both directions listed
``stopwords.txt``        one word per line
``verb_agreement.tsv``   form, disagreeing form
``gazetteer_person.txt`` name[, gender M/F/U]
``gazetteer_place.txt``  one place name per line

Optional: ``lemmas.tsv`` (word, pos, corpus count) and ``inflections.tsv``
(form, pos, lemma), used by the tagger and lemmatizer.
"""

from __future__ import annotations

import os
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from ..exceptions import EmptyResult, InvariantViolation, ParseError

OPEN_POS = ("NOUN", "VERB", "ADJ", "ADV")
RELATIONS = ("synonym", "antonym", "sibling")
REQUIRED_FILES = (
    "synsets.tsv",
    "antonyms.tsv",
    "hypernyms.tsv",
    "gender.tsv",
    "contractions.tsv",
    "stopwords.txt",
    "verb_agreement.tsv",
    "gazetteer_person.txt",
    "gazetteer_place.txt",
)
ENV_VAR = "PERTCHECK_LEXICON_DIR"


@dataclass(frozen=True, eq=False)
class Lexicon:
    synonyms: dict
    antonyms: dict
    hypernym_edges: dict
    hyponyms: dict
    gender_pairs: dict
    gender_of: dict
    contractions: dict
    stopwords: frozenset
    verb_agreement: dict
    gazetteer: dict
    places: frozenset
    lemmas: dict = field(default_factory=dict)
    inflections: dict = field(default_factory=dict)
    path: str = ""

    @property
    def n_synset_entries(self):
        return len(self.synonyms)

    def frequency(self, word, pos=None):
        counts = self.lemmas.get(word, {})
        if pos is None:
            return sum(counts.values())
        return counts.get(pos, 0)

    def person_gender(self, name):
        return self.gazetteer.get(name)

    def related_words(self, word, pos, relation):
        return related_words(word, pos, relation, self)


def _rows(path, n_min, n_max=None):
    n_max = n_max or n_min
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read lexicon file ({exc.strerror})", path) from exc
    with fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cols = line.split("\t")
            if not n_min <= len(cols) <= n_max:
                raise ParseError(f"expected {n_min}-{n_max} tab-separated columns, got {len(cols)}", path, lineno)
            if any(not c.strip() for c in cols):
                raise ParseError("empty column", path, lineno)
            yield lineno, [c.strip() for c in cols]


def _relation_file(path, expected_relations):
    table = defaultdict(set)
    for lineno, (word, pos, rel, target) in _rows(path, 4):
        if pos not in OPEN_POS:
            raise ParseError(f"unknown part of speech {pos!r}", path, lineno)
        if rel not in expected_relations:
            raise ParseError(f"unexpected relation {rel!r}", path, lineno)
        if word == target:
            raise InvariantViolation(f"{path}:{lineno}: {word!r} listed as its own {rel}")
        table[(word, pos)].add(target)
    return {k: frozenset(v) for k, v in table.items()}


def _involution(path, pairs, what):
    mapping = {}
    for lineno, a, b in pairs:
        if a == b:
            raise InvariantViolation(f"{path}:{lineno}: {what} maps {a!r} to itself")
        if a in mapping and mapping[a] != b:
            raise InvariantViolation(f"{path}:{lineno}: {what} maps {a!r} to both {mapping[a]!r} and {b!r}")
        mapping[a] = b
    for a, b in mapping.items():
        if mapping.get(b) != a:
            raise InvariantViolation(f"{path}: {what} is not an involution: {a!r}->{b!r} but {b!r}->{mapping.get(b)!r}")
    return mapping


def load_lexicon(path=None) -> Lexicon:
    """Load and validate a lexicon directory.

    ``path=None`` resolves ``$PERTCHECK_LEXICON_DIR`` and then the bundled data.
    Loaded lexicons are cached per resolved directory.
    """
    return _load_cached(str(resolve_lexicon_dir(path)))


def resolve_lexicon_dir(path=None) -> Path:
    if path is None:
        path = os.environ.get(ENV_VAR) or bundled_lexicon_dir()
    return Path(path).resolve()


def bundled_lexicon_dir() -> Path:
    return Path(str(resources.files("pertcheck") / "data" / "lexicon"))


@lru_cache(maxsize=8)
def _load_cached(path: str) -> Lexicon:
    d = Path(path)
    if not d.is_dir():
        raise ParseError("lexicon directory does not exist", d)
    for name in REQUIRED_FILES:
        if not (d / name).is_file():
            raise ParseError(f"missing lexicon file {name}", d)

    synonyms = _relation_file(d / "synsets.tsv", {"synonym"})
    antonyms = _relation_file(d / "antonyms.tsv", {"antonym"})
    hyper = _relation_file(d / "hypernyms.tsv", {"hypernym", "similar"})
    hyponyms = defaultdict(set)
    for (word, pos), targets in hyper.items():
        for t in targets:
            hyponyms[(t, pos)].add(word)

    gender_rows = list(_rows(d / "gender.tsv", 3))
    gender_pairs = _involution(d / "gender.tsv", [(n, a, b) for n, (a, b, _) in gender_rows], "gender map")
    gender_of = {}
    for lineno, (a, _, g) in gender_rows:
        if g not in ("M", "F"):
            raise ParseError(f"gender must be M or F, got {g!r}", d / "gender.tsv", lineno)
        gender_of[a] = g
    for a, b in gender_pairs.items():
        if gender_of[a] == gender_of[b]:
            raise InvariantViolation(f"gender map pairs {a!r} and {b!r} with the same gender")

    contractions = _involution(
        d / "contractions.tsv",
        [(n, a.lower(), b.lower()) for n, (a, b) in _rows(d / "contractions.tsv", 2)],
        "contraction map",
    )

    stopwords = frozenset(w.lower() for _, (w,) in _rows(d / "stopwords.txt", 1))
    verb_agreement = {}
    for lineno, (a, b) in _rows(d / "verb_agreement.tsv", 2):
        if a == b:
            raise InvariantViolation(f"{d / 'verb_agreement.tsv'}:{lineno}: {a!r} maps to itself")
        verb_agreement[a.lower()] = b.lower()

    gazetteer = {}
    for lineno, cols in _rows(d / "gazetteer_person.txt", 1, 2):
        g = cols[1] if len(cols) == 2 else "U"
        if g not in ("M", "F", "U"):
            raise ParseError(f"gender must be M, F or U, got {g!r}", d / "gazetteer_person.txt", lineno)
        gazetteer[cols[0]] = g
    places = frozenset(c[0] for _, c in _rows(d / "gazetteer_place.txt", 1))

    lemmas = defaultdict(dict)
    if (d / "lemmas.tsv").is_file():
        for lineno, (w, pos, cnt) in _rows(d / "lemmas.tsv", 3):
            try:
                lemmas[w][pos] = int(cnt)
            except ValueError:
                raise ParseError(f"count is not an integer: {cnt!r}", d / "lemmas.tsv", lineno) from None
    inflections = defaultdict(list)
    if (d / "inflections.tsv").is_file():
        for _, (form, pos, lemma) in _rows(d / "inflections.tsv", 3):
            inflections[form].append((pos, lemma))

    return Lexicon(
        synonyms=synonyms,
        antonyms=antonyms,
        hypernym_edges=hyper,
        hyponyms={k: frozenset(v) for k, v in hyponyms.items()},
        gender_pairs=gender_pairs,
        gender_of=gender_of,
        contractions=contractions,
        stopwords=stopwords,
        verb_agreement=verb_agreement,
        gazetteer=gazetteer,
        places=places,
        lemmas=dict(lemmas),
        inflections={k: tuple(v) for k, v in inflections.items()},
        path=str(d),
    )


def related_words(word, pos, relation, lexicon=None) -> list[str]:
    """Synonyms, antonyms or sibling words (co-hyponyms) of ``word``.

    Siblings share at least one recorded hypernym with ``word`` and exclude
    the word itself and anything standing in a synonym relation with it.
    Raises :class:`EmptyResult` when nothing is found.
    """
    lex = lexicon or load_lexicon()
    key = (word.lower(), pos)
    if relation == "synonym":
        found = set(lex.synonyms.get(key, ()))
    elif relation == "antonym":
        found = set(lex.antonyms.get(key, ()))
    elif relation == "sibling":
        found = set()
        for target in lex.hypernym_edges.get(key, ()):
            found |= lex.hyponyms.get((target, pos), set())
        own_syn = lex.synonyms.get(key, frozenset())
        found = {w for w in found if w not in own_syn and key[0] not in lex.synonyms.get((w, pos), ())}
    else:
        raise ValueError(f"unknown relation {relation!r}; expected one of {RELATIONS}")
    found.discard(key[0])
    if not found:
        raise EmptyResult(f"no {relation} for {word!r}/{pos}")
    return sorted(found)
