"""Perturbation primitives.

Every primitive takes text (plus an RNG and lexicon where needed) and either
returns the perturbed string or raises :class:`Inapplicable`. Primitives
never mutate their inputs and draw randomness only from the ``rng`` passed
in, so a fixed seed gives a fixed output.
"""

from __future__ import annotations

import re
from collections import Counter

from ..exceptions import EmptyPool, EmptyResult, Inapplicable, NoCandidates, NotANumber
from ..textkit.lexicon import load_lexicon, related_words
from ..textkit.numbers import number_to_words
from ..textkit.tagger import (
    AUX_WORDS, BE_FORMS, DO_FORMS, HAVE_FORMS, IRREGULAR_PLURALS, MODALS, TERMINALS, WH_WORDS,
    analyze, lemmatize, tag_text,
)
from ..textkit.tokenize import CLITICS, split_sentences, tokenize

BACKOFF_RESPONSE = "I'm sorry, can you repeat?"
QUESTION_WORDS = ("who", "what", "when", "where", "why", "how", "which")
ARTICLES = frozenset({"a", "an", "the"})
SUBORDINATORS = frozenset("if because when while although whether since unless though".split())
RELATIONAL_ADPOSITIONS = frozenset(
    """in on at behind near under above below beside with of by over inside across along around
    into onto through toward towards against between beneath next""".split()
)
NON_FINITE_AUX = frozenset({"be", "been", "being", "having"})
_NT_HOSTS = {"ca": "can", "wo": "will", "sha": "shall"}
_DIGITS = re.compile(r"^(\d+|\d{1,3}(?:,\d{3})+)$")
TOP_K = 10


# ---------------------------------------------------------------- helpers

class _Seq:
    """Editable token sequence that re-renders with the original spacing."""

    def __init__(self, tokens):
        self.lead = tokens[0].ws_before if tokens else ""
        self.items = [[t.text, t.ws] for t in tokens]

    def render(self):
        return self.lead + "".join(t + w for t, w in self.items)

    def __len__(self):
        return len(self.items)

    def text(self, i):
        return self.items[i][0]

    def replace(self, i, text):
        self.items[i][0] = text

    def delete(self, idxs):
        """Delete token indices; a gap before punctuation or the end closes up."""
        idxs = sorted(set(idxs))
        runs = []
        for i in idxs:
            if runs and runs[-1][1] == i - 1:
                runs[-1][1] = i
            else:
                runs.append([i, i])
        for a, b in reversed(runs):
            ws_last = self.items[b][1]
            del self.items[a:b + 1]
            if a > 0 and (a == len(self.items) or _is_glued(self.items[a][0]) or not self.items[a - 1][1]):
                self.items[a - 1][1] = ws_last

    def insert(self, pos, text):
        glued = _is_glued(text)
        if pos == len(self.items) and pos > 0:
            ws = self.items[pos - 1][1]
            self.items[pos - 1][1] = "" if glued else " "
        elif pos == 0:
            ws = " "
        elif glued:
            ws = self.items[pos - 1][1]
            self.items[pos - 1][1] = ""
        else:
            ws = "" if _is_glued(self.items[pos][0]) else (self.items[pos - 1][1] or " ")
            self.items[pos - 1][1] = self.items[pos - 1][1] or " "
        self.items.insert(pos, [text, ws])

    def capitalize_first(self):
        if self.items:
            self.items[0][0] = _upper_first(self.items[0][0])


def _is_glued(text):
    return bool(re.match(r"^[.,!?;:)\]}]+$", text)) or text.lower().replace("’", "'") in CLITICS


def _upper_first(s):
    return s[:1].upper() + s[1:]


def _lower_first(s):
    return s[:1].lower() + s[1:]


def match_case(src, new):
    """Give ``new`` the capitalization pattern of ``src``."""
    if len(src) > 1 and src.isupper():
        return new.upper()
    if src[:1].isupper():
        return _upper_first(new)
    return new


def _fix_article(seq, i):
    """Make an a/an at ``i - 1`` agree with the word now at ``i``."""
    if i > 0 and seq.text(i - 1).lower() in ("a", "an"):
        art = "an" if re.match(r"[aeiouAEIOU]", seq.text(i)) else "a"
        seq.replace(i - 1, match_case(seq.text(i - 1), art))


def _lex(lexicon):
    return lexicon or load_lexicon()


def _content_tokens(tokens):
    return [i for i, t in enumerate(tokens) if not t.is_punct]


def _split_terminal(text):
    """(body, terminal) where terminal is trailing sentence punctuation plus whitespace."""
    m = re.search(r"([.!?]+|\.\.\.)?(\s*)$", text)
    body = text[: m.start()]
    return body, text[m.start():]


def _soft_lower(text, lex):
    """Lowercase the first character unless the first word is a name or 'I'."""
    first = text.split(" ", 1)[0]
    if first in ("I", "I'm", "I'll", "I've", "I'd") or first in lex.gazetteer or first in lex.places:
        return text
    if len(first) > 1 and first[1:2].isupper():
        return text
    return _lower_first(text)


def _np_lower(toks, start, phrase, lex):
    """Lowercase a copied phrase only when it opened the sentence with a common word."""
    t = toks[start]
    if start == 0 and t.entity == "NONE" and t.text != "I" and (t.is_stopword or lex.frequency(t.lower) > 0):
        return _lower_first(phrase)
    return phrase


LOCATIVE_HEADS = frozenset("front top middle side back edge left right bottom center centre corner".split())


def object_phrases(tagged):
    """NP chunks minus locative heads that belong to a preposition ("in front of")."""
    toks = tagged.tokens
    return [np for np in noun_phrases(tagged)
            if not (toks[np[1] - 1].lower in LOCATIVE_HEADS and np[1] < len(toks) and toks[np[1]].lower == "of")]


def noun_phrases(tagged):
    """Base NP chunks as (start, end, det_end) half-open token ranges ending in a noun.

    ``det_end`` is the index after any leading determiners/numerals.
    """
    toks = tagged.tokens
    out = []
    i = 0
    n = len(toks)
    while i < n:
        if toks[i].pos in ("DET", "NUM", "ADJ", "NOUN"):
            j = i
            while j < n and (toks[j].pos in ("DET", "NUM", "ADJ", "NOUN")
                             or (toks[j].text == "'s" and toks[j].pos == "OTHER")):
                if j > i and toks[j].pos == "DET" and toks[j - 1].pos == "NOUN":
                    break
                j += 1
            end = j
            while end > i and toks[end - 1].pos != "NOUN":
                end -= 1
            if end > i:
                d = i
                while d < end and toks[d].pos in ("DET", "NUM"):
                    d += 1
                out.append((i, end, d))
            i = max(j, i + 1)
        else:
            i += 1
    return out


def _span_text(toks, a, b):
    if a >= b:
        return ""
    s = "".join(t.text + t.ws for t in toks[a:b])
    return s.rstrip()


def _rank_by_frequency(words, pos, lex):
    return sorted(words, key=lambda w: (-lex.frequency(w, pos), w))


def _plausible(words, original, pos, lex):
    """Attested, lowercase, single words that are not clipped forms of the original."""
    o = original.lower()
    keep = [w for w in words
            if w.isalpha() and w.islower() and lex.frequency(w, pos) > 0 and re.search(r"[aeiouy]", w)
            and not o.startswith(w) and not w.startswith(o)]
    return keep


def _pluralize(word):
    if re.search(r"[^aeiou]y$", word):
        return word[:-1] + "ies"
    if re.search(r"(s|x|z|ch|sh)$", word):
        return word + "es"
    return word + "s"


# ---------------------------------------------------------------- fluency

def jumble_word_order(sentence: str, rng, lexicon=None) -> str:
    """Move one randomly chosen later word to the end (before terminal punctuation)."""
    tokens = tokenize(sentence)
    content = _content_tokens(tokens)
    if len(content) < 4:
        raise Inapplicable("fewer than 4 words")
    end = len(tokens)
    while end > 0 and tokens[end - 1].is_punct:
        end -= 1
    last_word = content[-1]
    cands = [
        k for k in content
        if 1 <= k < last_word
        and tokens[k].lower not in CLITICS
        and not (k + 1 < len(tokens) and tokens[k + 1].lower in CLITICS)
    ]
    order = list(cands)
    rng.shuffle(order)
    for k in order:
        seq = _Seq(tokens)
        moved = seq.text(k)
        seq.delete([k])
        seq.insert(end - 1, moved)
        out = seq.render()
        if out != sentence:
            return out
    raise Inapplicable("no word can be moved")


def subject_verb_disagree(sentence: str, lexicon=None) -> str:
    """Replace the first agreeing verb form with its disagreeing partner."""
    lex = _lex(lexicon)
    tagged = tag_text(sentence, lex)
    toks = tagged.tokens
    for i, t in enumerate(toks):
        if t.pos not in ("VERB", "AUX"):
            continue
        if i + 1 < len(toks) and toks[i + 1].lower == "n't":
            form = t.lower + "n't"
            if form in lex.verb_agreement:
                new = lex.verb_agreement[form]
                seq = _Seq(toks)
                seq.replace(i, match_case(t.text, new[:-3]))
                return seq.render()
        if t.lower in lex.verb_agreement:
            seq = _Seq(toks)
            seq.replace(i, match_case(t.text, lex.verb_agreement[t.lower]))
            return seq.render()
    # any other present-tense verb: 3sg -> base form
    for i, t in enumerate(toks):
        if t.pos == "VERB" and t.entity == "NONE":
            a = analyze(t.lower, lex).get("VERB")
            if a and a[2] == "3sg" and a[0] != t.lower:
                seq = _Seq(toks)
                seq.replace(i, match_case(t.text, a[0]))
                return seq.render()
    raise Inapplicable("no verb form in the agreement table")


def inject_spelling_error(sentence: str, rng, lexicon=None) -> str:
    """Delete one letter or swap two adjacent letters inside one word."""
    lex = _lex(lexicon)
    tokens = tokenize(sentence)
    cands = [i for i, t in enumerate(tokens)
             if t.text.isalpha() and len(t.text) >= 4 and t.lower not in lex.stopwords]
    if not cands:
        raise Inapplicable("no alphabetic non-stopword of length >= 4")
    i = rng.choice(cands)
    word = tokens[i].text
    edits = []
    for p in range(1, len(word)):
        edits.append(word[:p] + word[p + 1:])
        if p + 1 < len(word) and word[p] != word[p + 1]:
            edits.append(word[:p] + word[p + 1] + word[p] + word[p + 2:])
    edits = [e for e in dict.fromkeys(edits) if e != word]
    # prefer non-words so the corruption is visible
    non_words = [e for e in edits if e.lower() not in lex.lemmas and e.lower() not in lex.inflections
                 and e.lower() not in lex.stopwords]
    edits = non_words or edits
    seq = _Seq(tokens)
    seq.replace(i, rng.choice(edits))
    return seq.render()


def perturb_punctuation(sentence: str, rng, lexicon=None) -> str:
    """Swap the terminal mark (? <-> .) and add a comma before a subordinate clause.

    Both edits are made when both sites exist; either alone is enough.
    """
    tokens = tokenize(sentence)
    content = _content_tokens(tokens)
    has_terminal = bool(tokens) and tokens[-1].text in ("?", ".", "!")
    if not has_terminal and len(content) < 8:
        raise Inapplicable("no terminal punctuation and fewer than 8 words")
    seq = _Seq(tokens)
    changed = False
    if has_terminal:
        seq.replace(len(tokens) - 1, {"?": ".", ".": "?", "!": "."}[tokens[-1].text])
        changed = True
    bounds = [k for k in content
              if k >= 2 and tokens[k].lower in SUBORDINATORS and not tokens[k - 1].is_punct]
    if bounds:
        k = rng.choice(bounds)
        seq.items[k - 1][1] = ""
        seq.items.insert(k, [",", " "])
        changed = True
    if not changed:
        raise Inapplicable("no punctuation site")
    return seq.render()


def drop_span(sentence: str, kind: str, rng=None, lexicon=None) -> str:
    """Remove tokens of one class: function_words, stopwords, question_word,
    content_phrase, objects or words_or_phrases."""
    lex = _lex(lexicon)
    tagged = tag_text(sentence, lex)
    toks = tagged.tokens
    drop = []
    if kind == "function_words":
        art = next((i for i, t in enumerate(toks) if t.lower in ARTICLES), None)
        aux = next((i for i, t in enumerate(toks) if t.pos == "AUX" and t.lower not in NON_FINITE_AUX
                    and not (i + 1 < len(toks) and toks[i + 1].lower == "n't")), None)
        drop = [i for i in (art, aux) if i is not None]
        if not drop:
            adp = next((i for i, t in enumerate(toks) if t.pos == "ADP"), None)
            drop = [adp] if adp is not None else []
    elif kind == "stopwords":
        drop = [i for i, t in enumerate(toks)
                if t.is_stopword and t.pos not in ("WH", "PUNCT")]
    elif kind == "question_word":
        wh = next((i for i, t in enumerate(toks) if t.pos == "WH"), None)
        drop = [wh] if wh is not None else []
    elif kind in ("content_phrase", "objects", "words_or_phrases"):
        nps = [np for np in object_phrases(tagged) if all(toks[k].entity == "NONE" for k in range(np[0], np[1]))]
        if kind == "content_phrase":
            pool = [np for np in nps if np[0] > 0] or nps
            if pool:
                a, b, d = pool[rng.randrange(len(pool))]
                drop = list(range(d, b))
        elif kind == "objects":
            drop = [b - 1 for a, b, d in nps]
        else:
            spans = []
            i = 0
            while i < len(toks):
                if toks[i].pos == "AUX" and toks[i].lower != "'s":
                    j = i
                    while j < len(toks) and toks[j].pos == "AUX":
                        j += 1
                    if j < len(toks) and toks[j].pos == "VERB":
                        spans.append(list(range(i, j)))
                    i = j
                else:
                    i += 1
            for a, b, d in nps:
                m = a + 1 if toks[a].pos == "DET" else a
                if b - 1 > m:
                    spans.append(list(range(m, b - 1)))
            spans += [[i] for i, t in enumerate(toks) if t.pos == "ADV" and t.lower not in ("not", "n't")]
            # prepositional phrases that are not the only complement
            for a, b, d in nps:
                if a > 1 and toks[a - 1].pos == "ADP":
                    spans.append(list(range(a - 1, b)))
            if spans:
                drop = spans[rng.randrange(len(spans))]
    else:
        raise ValueError(f"unknown drop kind {kind!r}")
    if not drop:
        raise Inapplicable(f"no {kind.replace('_', ' ')} to drop")
    if all(toks[i].is_punct for i in range(len(toks)) if i not in drop):
        raise Inapplicable("result would be empty")
    seq = _Seq(toks)
    seq.delete(drop)
    if 0 in drop:
        seq.capitalize_first()
    return seq.render()


# ---------------------------------------------------------------- lexical

def _swap_targets(tagged, kind, lex):
    """Candidate (index, replacements) pairs for lexical_swap."""
    toks = tagged.tokens
    out = []
    for i, t in enumerate(toks):
        low = t.lower
        if kind == "gender":
            if low in lex.gender_pairs:
                out.append((i, [lex.gender_pairs[low]]))
            continue
        if kind == "question_word":
            nxt = toks[i + 1] if i + 1 < len(toks) else None
            if t.pos == "WH" and low in QUESTION_WORDS and nxt is not None and nxt.pos in ("AUX", "VERB"):
                out.append((i, [w for w in QUESTION_WORDS if w != low]))
            continue
        if kind == "name":
            if t.entity == "PERSON" and t.text in lex.gazetteer:
                g = lex.gazetteer[t.text]
                names = [n for n, ng in lex.gazetteer.items()
                         if n != t.text and ng != "U" and (g == "U" or ng == g)]
                out.append((i, names))
            continue
        if t.entity != "NONE" or not t.text.isalpha() or t.is_stopword:
            continue
        if i > 0 and t.text[0].isupper():
            continue
        if kind in ("synonym", "antonym"):
            if t.pos not in ("NOUN", "VERB", "ADJ", "ADV"):
                continue
            a = analyze(low, lex).get(t.pos)
            if not a or a[2] not in ("base", "plural"):
                continue
            lemma, _, form = a
            try:
                words = related_words(lemma, t.pos, kind, lex)
            except EmptyResult:
                continue
            words = _rank_by_frequency(_plausible(words, lemma, t.pos, lex), t.pos, lex)[:TOP_K]
            if form == "plural" and lemma != low:
                words = [_pluralize(w) for w in words if not w.endswith("s")]
            out.append((i, words))
        elif kind == "hyponym_sibling":
            if t.pos != "NOUN":
                continue
            a = analyze(low, lex).get("NOUN")
            if not a or a[2] not in ("base", "plural"):
                continue
            lemma = a[0]
            try:
                words = related_words(lemma, "NOUN", "sibling", lex)
                words = _rank_by_frequency(_plausible(words, lemma, "NOUN", lex), "NOUN", lex)[:TOP_K]
            except EmptyResult:
                continue
            if a[2] == "plural" and lemma != low:
                words = [_pluralize(w) for w in words if not w.endswith("s")]
            out.append((i, words))
        elif kind == "attribute":
            if t.pos != "ADJ":
                continue
            try:
                words = related_words(low, "ADJ", "sibling", lex)
            except EmptyResult:
                try:
                    words = related_words(low, "ADJ", "antonym", lex)
                except EmptyResult:
                    continue
            out.append((i, _rank_by_frequency(_plausible(words, low, "ADJ", lex), "ADJ", lex)[:TOP_K]))
    return [(i, [w for w in ws if w.lower() != toks[i].lower]) for i, ws in out]


def lexical_swap(sentence: str, kind: str, rng, lexicon=None) -> str:
    """Replace exactly one targeted token: kind is synonym, antonym,
    hyponym_sibling, gender, question_word, name or attribute."""
    if kind not in ("synonym", "antonym", "hyponym_sibling", "gender", "question_word", "name", "attribute"):
        raise ValueError(f"unknown swap kind {kind!r}")
    lex = _lex(lexicon)
    tagged = tag_text(sentence, lex)
    targets = [(i, ws) for i, ws in _swap_targets(tagged, kind, lex) if ws]
    if not targets:
        raise Inapplicable(f"no {kind.replace('_', ' ')} target")
    i, words = targets[rng.randrange(len(targets))]
    new = words[rng.randrange(len(words))]
    seq = _Seq(tagged.tokens)
    seq.replace(i, match_case(tagged.tokens[i].text, new))
    _fix_article(seq, i)
    return seq.render()


def _negate_clause(text, lex):
    tagged = tag_text(text, lex)
    toks = tagged.tokens
    seq = _Seq(toks)
    # toggle: remove an existing negation
    for i, t in enumerate(toks):
        if t.lower == "not":
            seq.delete([i])
            return seq.render()
        if t.lower == "n't" and i > 0:
            host = toks[i - 1]
            seq.replace(i - 1, match_case(host.text, _NT_HOSTS.get(host.lower, host.text)))
            seq.delete([i])
            return seq.render()
    for i, t in enumerate(toks):
        if t.pos != "AUX" or t.lower in NON_FINITE_AUX or t.lower == "'s" and i == 0:
            continue
        nxt = toks[i + 1] if i + 1 < len(toks) else None
        if nxt is None or nxt.is_punct:
            continue
        if i > 0 and (t.lower in HAVE_FORMS or t.lower in DO_FORMS) and nxt.pos in ("DET", "NUM", "NOUN", "ADJ") \
                and toks[-1].text != "?":
            # main-verb have/do takes do-support
            lemma = "have" if t.lower in HAVE_FORMS else "do"
            aux = {"has": "does", "does": "does", "had": "did", "did": "did"}.get(t.lower, "do")
            seq.replace(i, lemma)
            seq.insert(i, "n't")
            seq.insert(i, match_case(t.text, aux))
            return seq.render()
        if i == 0 or (toks[-1].text == "?" and t.lower + " not" in lex.contractions):
            contracted = lex.contractions.get(t.lower + " not")
            if contracted is None:
                continue
            seq.replace(i, match_case(t.text, contracted[:-3]))
            seq.insert(i + 1, "n't")
            return seq.render()
        seq.insert(i + 1, "not")
        return seq.render()
    # do-support on the first finite main verb
    for i, t in enumerate(toks):
        if t.pos != "VERB":
            continue
        if any(toks[k].pos == "AUX" for k in range(i)):
            break
        a = analyze(t.lower, lex).get("VERB")
        if not a or a[2] == "ing":
            break
        lemma, _, form = a
        if form == "past" or (form == "base" and lemma != t.lower):
            aux = "did"
        elif form == "3sg":
            aux = "does"
        else:
            aux = "do"
        seq.replace(i, lemma)
        seq.insert(i, "n't")
        seq.insert(i, aux)
        return seq.render()
    # antonym swap on an adjective or verb
    for i, t in enumerate(toks):
        if t.pos in ("ADJ", "VERB") and t.entity == "NONE":
            try:
                ants = related_words(lemmatize(t.text, t.pos, lex), t.pos, "antonym", lex)
            except EmptyResult:
                continue
            seq.replace(i, match_case(t.text, _rank_by_frequency(ants, t.pos, lex)[0]))
            return seq.render()
    raise Inapplicable("no negation site")


def previous_bot_utterance(context):
    """Text of the latest turn by the speaker who is not the last speaker."""
    if not context:
        return None
    last_speaker = context[-1].get("speaker", "")
    for u in reversed(context):
        if u.get("speaker", "") != last_speaker:
            return u["text"]
    return None


def negate(sentence: str, scope: str = "this_sentence", context=None, lexicon=None) -> str:
    """Flip the polarity of one clause (toggling an existing negation).

    With ``scope="previous_bot_utterance"`` the result is the negated last
    turn of the other speaker in ``context``, which contradicts the dialogue.
    """
    lex = _lex(lexicon)
    if scope == "previous_bot_utterance":
        text = previous_bot_utterance(context or ())
        if not text:
            raise Inapplicable("no previous bot utterance")
    elif scope == "this_sentence":
        text = sentence
    else:
        raise ValueError(f"unknown negation scope {scope!r}")
    return _negate_clause(text, lex)


def toggle_contraction(sentence: str, direction: str, lexicon=None) -> str:
    """Contract (``are not`` -> ``aren't``) or expand the earliest table site."""
    if direction not in ("contract", "expand"):
        raise ValueError(f"unknown direction {direction!r}")
    lex = _lex(lexicon)
    want_contracted_source = direction == "expand"
    forms = [f for f in lex.contractions if ("'" in f) == want_contracted_source]
    if not forms:
        raise Inapplicable("empty contraction table")
    norm = sentence.replace("’", "'")
    pattern = re.compile(r"(?<![\w'])(" + "|".join(re.escape(f) for f in sorted(forms, key=len, reverse=True))
                         + r")(?![\w'])", re.IGNORECASE)
    m = pattern.search(norm)
    if not m:
        raise Inapplicable(f"nothing to {direction}")
    src = sentence[m.start():m.end()]
    new = lex.contractions[m.group(1).lower()]
    if src[:1].isupper():
        new = _upper_first(new)
    return sentence[: m.start()] + new + sentence[m.end():]


def numerals_to_words_template(sentence: str) -> str:
    """Spell out every digit token."""
    tokens = tokenize(sentence)
    seq = _Seq(tokens)
    hit = False
    for i, t in enumerate(tokens):
        if _DIGITS.match(t.text):
            try:
                seq.replace(i, number_to_words(t.text))
                hit = True
            except NotANumber:
                continue
    if not hit:
        raise Inapplicable("no digit token")
    return seq.render()


def change_numbers(sentence: str, rng) -> str:
    """Replace one digit token by a different number with the same digit count."""
    tokens = tokenize(sentence)
    cands = [i for i, t in enumerate(tokens) if _DIGITS.match(t.text)]
    if not cands:
        raise Inapplicable("no digit token")
    i = rng.choice(cands)
    old = tokens[i].text
    digits = old.replace(",", "")
    d = len(digits)
    if d == 1 or digits[0] == "0":
        lo, hi = 0, 10 ** d - 1
    else:
        lo, hi = 10 ** (d - 1), 10 ** d - 1
    while True:
        new = str(rng.randint(lo, hi)).zfill(d)
        if new != digits:
            break
    if "," in old:
        new = f"{int(new):,}"
    seq = _Seq(tokens)
    seq.replace(i, new)
    return seq.render()


# ---------------------------------------------------------------- structure

def reorder_sentences(text: str, rng) -> str:
    """Shuffle sentence order (never the identity permutation)."""
    sents = [s.strip() for s in split_sentences(text) if s.strip()]
    if len(sents) < 2:
        raise Inapplicable("fewer than 2 sentences")
    if len(set(sents)) == 1:
        raise Inapplicable("all sentences identical")
    order = list(sents)
    while order == sents:
        rng.shuffle(order)
    out = " ".join(order)
    lead = text[: len(text) - len(text.lstrip())]
    trail = text[len(text.rstrip()):]
    out = lead + out + trail
    if Counter(s.strip() for s in split_sentences(out) if s.strip()) != Counter(sents):
        raise Inapplicable("reordered text would re-split differently")
    return out


def _np_pronoun(toks, a, b, lex):
    head = toks[b - 1]
    if head.entity == "PERSON":
        for k in range(a, b):
            g = lex.gazetteer.get(toks[k].text)
            if g in ("M", "F"):
                return "He" if g == "M" else "She"
        return "They"
    if head.lower in lex.gender_of and head.lower not in IRREGULAR_PLURALS:
        a_ = analyze(head.lower, lex).get("NOUN")
        if not (a_ and a_[2] == "plural" and a_[0] != head.lower):
            return "He" if lex.gender_of[head.lower] == "M" else "She"
    a_ = analyze(head.lower, lex).get("NOUN")
    plural = head.lower in IRREGULAR_PLURALS or (a_ is not None and a_[2] == "plural" and a_[0] != head.lower)
    return "They" if plural else "It"


def nouns_to_pronouns(text: str, lexicon=None) -> str:
    """Replace sentence-initial subject NPs with They / He / She / It."""
    lex = _lex(lexicon)
    out = []
    changed = False
    for sent in split_sentences(text):
        tagged = tag_text(sent, lex)
        toks = tagged.tokens
        nps = noun_phrases(tagged)
        gerund = bool(nps) and nps[0][1] == 1 and toks[0].lower.endswith("ing") and "VERB" in analyze(toks[0].lower, lex)
        if nps and not gerund and nps[0][0] == 0 and nps[0][1] < len(toks) and toks[nps[0][1]].pos in ("AUX", "VERB"):
            a, b, _ = nps[0]
            pron = _np_pronoun(toks, a, b, lex)
            seq = _Seq(toks)
            seq.delete(list(range(a + 1, b)))
            seq.replace(0, pron)
            # keep the spacing after the dropped NP
            out.append(seq.render())
            changed = True
        else:
            out.append(sent)
    if not changed:
        raise Inapplicable("no subject noun phrase")
    return "".join(out)


def swap_object_order(caption: str, lexicon=None) -> str:
    """Exchange the contents of two NPs linked by a relational preposition.

    Determiners stay in place: "The man ... of a tree" -> "The tree ... of a man".
    """
    lex = _lex(lexicon)
    tagged = tag_text(caption, lex)
    toks = tagged.tokens
    nps = object_phrases(tagged)
    for (a1, b1, d1), (a2, b2, d2) in zip(nps, nps[1:]):
        between = toks[b1:a2]
        if not between or between[-1].pos != "ADP" or between[-1].lower not in RELATIONAL_ADPOSITIONS:
            continue
        if any(t.pos not in ("AUX", "VERB", "ADV", "ADP") and t.lower not in LOCATIVE_HEADS for t in between):
            continue
        c1 = [t.text for t in toks[d1:b1]]
        c2 = [t.text for t in toks[d2:b2]]
        if [w.lower() for w in c1] == [w.lower() for w in c2]:
            continue
        if d1 == 0:
            c2 = [_upper_first(c2[0])] + c2[1:]
            if toks[d1].entity == "NONE":
                c1 = [_lower_first(c1[0])] + c1[1:]
        seq = _Seq(toks)
        # replace the later span first so earlier indices stay valid
        for (d, b), words in (((d2, b2), c1), ((d1, b1), c2)):
            seq.delete(list(range(d + 1, b)))
            seq.replace(d, " ".join(words))
            _fix_article(seq, d)
        return seq.render()
    raise Inapplicable("no pair of noun phrases around a relational preposition")


# ---------------------------------------------------------------- repetition / addition

def repeat_span(text: str, kind: str, context=None, rng=None, joiner: str = ",", lexicon=None) -> str:
    """Duplicate a span: phrase, sentence, utterance or object."""
    lex = _lex(lexicon)
    if kind == "utterance":
        prior = [u["text"] for u in (context or ()) if u["text"].strip() and u["text"].strip() != text.strip()]
        if not prior:
            raise Inapplicable("no prior utterance")
        return prior[rng.randrange(len(prior))]
    if not text.strip():
        raise Inapplicable("empty text")
    if kind == "sentence":
        sents = [s.strip() for s in split_sentences(text) if s.strip()]
        pick = sents[rng.randrange(len(sents))]
        stripped = text.rstrip()
        return stripped + " " + pick + text[len(stripped):]
    tagged = tag_text(text, lex)
    toks = tagged.tokens
    nps = noun_phrases(tagged)
    if not nps:
        raise Inapplicable("no noun phrase")
    if kind == "phrase":
        a, b, d = nps[rng.randrange(len(nps))]
        start = d if joiner == "and" and d < b else a
        phrase = _span_text(toks, start, b)
        phrase = _np_lower(toks, start, phrase, lex)
        sep = ", " if joiner == "," else f" {joiner} "
    elif kind == "object":
        a, b, d = nps[0]
        phrase = _span_text(toks, a, b)
        phrase = _np_lower(toks, a, phrase, lex)
        sep = " and "
    else:
        raise ValueError(f"unknown repeat kind {kind!r}")
    body, terminal = _split_terminal(text)
    return body + sep + phrase + terminal


def append_text(sentence: str, kind: str, distractor_pool, rng, lexicon=None) -> str:
    """Append a distractor phrase after a comma, keeping terminal punctuation last."""
    pool = [p for p in (distractor_pool or ()) if p and p.strip()]
    if not pool:
        raise EmptyPool(f"empty {kind} pool")
    lex = _lex(lexicon)
    phrase = pool[rng.randrange(len(pool))].strip()
    phrase, _ = _split_terminal(phrase)
    phrase = _soft_lower(phrase, lex)
    body, terminal = _split_terminal(sentence)
    return body + ", " + phrase + terminal


def replace_whole(original: str, kind: str, pool=None, rng=None) -> str:
    """Replace the whole reference: backoff string, or a pool entry from another sample."""
    if kind == "backoff":
        if original.strip() == BACKOFF_RESPONSE:
            raise Inapplicable("reference already is the backoff response")
        return BACKOFF_RESPONSE
    if kind not in ("random_text", "random_response"):
        raise ValueError(f"unknown replace kind {kind!r}")
    if not pool:
        raise EmptyPool(f"empty {kind} pool")
    cands = [p for p in pool if p.strip() and p.strip() != original.strip()]
    if not cands:
        raise Inapplicable("pool holds only the original")
    return cands[rng.randrange(len(cands))]


# ---------------------------------------------------------------- fill-mask templates

def _fill_slot(provider, left, right, original, key, slot, fills):
    from ..fillmask import MaskedQuery, fill

    query = MaskedQuery(left, right, 1, frozenset({original.lower()}))
    result = fill(query, provider, key=(key[0], key[1], slot) if key else None)
    cands = list(result.fills[0])
    fills.append(tuple(cands))
    for c in cands:
        if c.lower() != original.lower():
            return c
    raise NoCandidates("provider returned only forbidden candidates")


def question_to_assertion(question: str, fill_provider, lexicon=None, key=None, fills=None) -> str:
    """Turn a WH question into a declarative skeleton and fill the WH slot."""
    lex = _lex(lexicon)
    fills = [] if fills is None else fills
    tagged = tag_text(question, lex)
    toks = list(tagged.tokens)
    if not toks or toks[0].pos != "WH" or toks[-1].text != "?":
        raise Inapplicable("not a WH question")
    wh = toks[0]
    body = toks[1:-1]
    # a WH phrase can swallow a following noun/adjective: "what time", "how old"
    k = 0
    while k < len(body) and body[k].pos in ("NOUN", "ADJ", "DET") and wh.lower in ("what", "which", "whose", "how"):
        k += 1
    if k == len(body) or body[k].pos not in ("AUX", "VERB"):
        k = 0
    if k == 0 and body and body[0].pos == "NOUN" and analyze(body[0].lower, lex).get("VERB", (0, 0, ""))[2] == "3sg":
        body = [body[0].with_(pos="VERB")] + body[1:]
    wh_words = [wh.text] + [t.text for t in body[:k]]
    body = body[k:]
    if not body:
        raise Inapplicable("empty question body")
    words = [t.text for t in body]
    if body[0].pos == "VERB":
        skeleton_left, skeleton_right = [], words
    elif body[0].pos == "AUX":
        aux = words[0]
        rest = body[1:]
        v = next((j for j, t in enumerate(rest) if t.pos in ("VERB", "AUX")), None)
        if v is None:
            subj, pred = [t.text for t in rest], []
        else:
            subj, pred = [t.text for t in rest[:v]], [t.text for t in rest[v:]]
        if not subj and not pred:
            raise Inapplicable("no subject in question")
        if not subj or (v is None and (rest[0].lower == "not" or rest[0].lower in ("a", "an"))):
            # "Who was not a leader?" -> "<mask> was not a leader."
            skeleton_left, skeleton_right = [], [aux] + subj + pred
        elif v is None:
            skeleton_left, skeleton_right = subj + [aux], []
        else:
            skeleton_left, skeleton_right = subj + [aux] + pred, []
    else:
        raise Inapplicable("unsupported question shape")
    from ..textkit.tokenize import join_words

    left = join_words(skeleton_left)
    right = join_words(skeleton_right)
    original = " ".join(wh_words)
    fill_word = _fill_slot(fill_provider, left, right, original, key, 0, fills)
    parts = [p for p in (left, fill_word, right) if p]
    out = join_words(" ".join(parts).split(" ")) + "."
    first = out.split(" ", 1)[0]
    if first.lower() == "i" or first in lex.gazetteer or first in lex.places:
        return out
    return _upper_first(out)


def mask_and_fill(sentence: str, fill_provider, rng, lexicon=None, key=None, fills=None) -> str:
    """Mask one or two content words and replace them with provider fills."""
    lex = _lex(lexicon)
    fills = [] if fills is None else fills
    tagged = tag_text(sentence, lex)
    toks = tagged.tokens
    cands = [i for i, t in enumerate(toks)
             if t.pos in ("NOUN", "VERB", "ADJ") and t.entity == "NONE" and t.text.isalpha()
             and not t.is_stopword]
    if not cands:
        raise Inapplicable("no content word")
    n_mask = 1 if len(cands) == 1 else rng.choice((1, 2))
    picked = sorted(rng.sample(cands, n_mask))
    seq = _Seq(toks)
    for slot, i in enumerate(picked):
        left = "".join(t.text + t.ws for t in toks[:i]).rstrip()
        left = (toks[0].ws_before + left) if i else ""
        right = "".join(t.text + t.ws for t in toks[i + 1:]).rstrip()
        new = _fill_slot(fill_provider, left, right, toks[i].text, key, slot, fills)
        seq.replace(i, match_case(toks[i].text, new))
    return seq.render()
