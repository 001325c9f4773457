"""Rule + lexicon part-of-speech tagger and gazetteer NER over a coarse tagset.

Tags: NOUN VERB ADJ ADV PRON DET ADP NUM PUNCT WH AUX OTHER.

Closed-class words come from fixed lists. Open-class words get a candidate
set from the lexicon (direct lemma entries, irregular inflections and
morphy-style suffix stripping) and one left-to-right pass of context rules
picks a tag. Nothing is learned; output depends only on the input tokens and
the lexicon.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .lexicon import Lexicon, load_lexicon
from .numbers import NUMBER_WORDS
from .tokenize import ABBREVIATIONS, Token, tokenize

TAGSET = ("NOUN", "VERB", "ADJ", "ADV", "PRON", "DET", "ADP", "NUM", "PUNCT", "WH", "AUX", "OTHER")
ENTITY_LABELS = ("PERSON", "LOCATION", "ORG", "NONE")
TERMINALS = frozenset({".", "?", "!", "..."})

WH_WORDS = frozenset("who whom whose what which when where why how whatever whoever".split())
BE_FORMS = frozenset("be am is are was were been being 'm 're".split())
HAVE_FORMS = frozenset("have has had having 've".split())
DO_FORMS = frozenset("do does did".split())
MODALS = frozenset("will would shall should can could may might must ca wo cannot 'll 'd ought".split())
AUX_WORDS = BE_FORMS | HAVE_FORMS | DO_FORMS | MODALS
PRONOUNS = frozenset(
    """i me you he him she it we us they them myself yourself himself herself itself ourselves
    yourselves themselves mine yours hers ours theirs everyone everybody someone somebody anyone
    anybody nobody nothing something anything everything""".split()
)
DETERMINERS = frozenset(
    """the a an this that these those my your his its our their every each all some any no both
    such most many much few several either neither another""".split()
)
DEMONSTRATIVES = frozenset({"this", "that"})
ADPOSITIONS = frozenset(
    """in on at of to for with by from into onto about over under through during before after
    above below between among against along across around near behind without within upon off out
    down up since until toward towards beside beneath despite via per""".split()
)
ADVERBS = frozenset(
    """not n't there here today tomorrow yesterday tonight very too so also just never always
    often sometimes again now then later soon already still even quite rather almost ever away
    back outside inside home twice once else perhaps maybe really abroad ago indeed instead
    anyway together forward well""".split()
)
DEGREE_ADVERBS = frozenset("very too so quite rather really extremely more less pretty".split())
OTHER_WORDS = frozenset(
    """and or but nor if because although though unless while whether than please hello hi yes
    oh thanks wow hey okay ok whereas""".split()
)
LINKING_VERBS = frozenset(
    "look sound taste smell feel seem become grow turn get stay remain appear prove".split()
)
# -ing forms that behave as adjectives after a copula
ING_ADJECTIVES = frozenset(
    """boring interesting exciting amazing surprising inspiring confusing disappointing tiring
    annoying frightening shocking charming amusing depressing relaxing satisfying embarrassing
    terrifying fascinating thrilling touching willing loving caring""".split()
)
IRREGULAR_PLURALS = frozenset("people children men women feet teeth mice geese police".split())
DAYS_MONTHS = frozenset(
    """monday tuesday wednesday thursday friday saturday sunday mondays tuesdays wednesdays
    thursdays fridays saturdays sundays january february march april may june july august
    september october november december""".split()
)
TITLES = frozenset({"dr.", "mr.", "mrs.", "ms.", "prof.", "st.", "mt.", "gen.", "capt.", "sen."})
CLAUSE_BREAKS = frozenset({",", ";", ":", "and", "or", "but", "if", "because", "although", "though",
                           "unless", "while", "whether", "that"})

_NUMERIC = re.compile(r"^\d+(?:[.,]\d+)*(?:st|nd|rd|th)?$")
_PUNCT = re.compile(r"^[^\w\s]+$")
_INITIALS = re.compile(r"^(?:[A-Z]\.)+[A-Z]?\.?$")


@dataclass(frozen=True)
class TaggedSentence:
    tokens: tuple
    terminal_punct: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        tp = self.terminal_punct
        if tp is not None:
            if tp != len(self.tokens) - 1 or self.tokens[tp].pos != "PUNCT":
                raise ValueError("terminal_punct must index a final PUNCT token")

    def __len__(self):
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __getitem__(self, i):
        return self.tokens[i]

    @property
    def tags(self):
        return [t.pos for t in self.tokens]

    @property
    def words(self):
        return [t.text for t in self.tokens]


def _strip_candidates(word):
    """Possible (pos, lemma, form_kind) analyses by suffix stripping."""
    out = []
    if word.endswith("ies") and len(word) > 4:
        out += [("NOUN", word[:-3] + "y", "plural"), ("VERB", word[:-3] + "y", "3sg")]
    if word.endswith("es") and len(word) > 3:
        out += [("NOUN", word[:-2], "plural"), ("VERB", word[:-2], "3sg")]
    if word.endswith("s") and not word.endswith("ss") and len(word) > 2:
        out += [("NOUN", word[:-1], "plural"), ("VERB", word[:-1], "3sg")]
    if word.endswith("ed") and len(word) > 3:
        stem = word[:-2]
        out += [("VERB", stem, "past"), ("VERB", stem + "e", "past"), ("VERB", word[:-1], "past")]
        if len(stem) > 2 and stem[-1] == stem[-2]:
            out.append(("VERB", stem[:-1], "past"))
        if stem.endswith("i"):
            out.append(("VERB", stem[:-1] + "y", "past"))
    if word.endswith("ing") and len(word) > 4:
        stem = word[:-3]
        out += [("VERB", stem, "ing"), ("VERB", stem + "e", "ing")]
        if len(stem) > 2 and stem[-1] == stem[-2]:
            out.append(("VERB", stem[:-1], "ing"))
    if word.endswith("er") and len(word) > 4:
        out += [("ADJ", word[:-2], "comparative"), ("ADJ", word[:-1], "comparative")]
        if word[-3] == word[-4]:
            out.append(("ADJ", word[:-3], "comparative"))
        if word[-3] == "i":
            out.append(("ADJ", word[:-3] + "y", "comparative"))
    if word.endswith("est") and len(word) > 5:
        out += [("ADJ", word[:-3], "superlative"), ("ADJ", word[:-2], "superlative")]
        if word[-4] == word[-5]:
            out.append(("ADJ", word[:-4], "superlative"))
        if word[-4] == "i":
            out.append(("ADJ", word[:-4] + "y", "superlative"))
    return out


def analyze(word: str, lexicon: Lexicon) -> dict:
    """Map each possible open-class POS of ``word`` to (lemma, count, form_kind).

    ``form_kind`` is ``base`` for a direct lexicon entry, otherwise the
    inflection found (plural, 3sg, past, ing, comparative, superlative).
    """
    w = word.lower()
    found = {}

    def offer(pos, lemma, count, kind):
        prev = found.get(pos)
        if prev is None or count > prev[1]:
            found[pos] = (lemma, count, kind)

    for pos, count in lexicon.lemmas.get(w, {}).items():
        offer(pos, w, count, "base")
    for pos, lemma in lexicon.inflections.get(w, ()):
        kind = {"NOUN": "plural", "VERB": "past", "ADJ": "comparative"}.get(pos, "base")
        offer(pos, lemma, lexicon.frequency(lemma, pos) + 1, kind)
    for pos, lemma, kind in _strip_candidates(w):
        if pos in lexicon.lemmas.get(lemma, {}):
            offer(pos, lemma, lexicon.frequency(lemma, pos), kind)
    return found


def lemmatize(word: str, pos: str, lexicon: Lexicon | None = None) -> str:
    """Base form of ``word`` for an open-class ``pos``; the lowercased word otherwise."""
    lex = lexicon or load_lexicon()
    a = analyze(word, lex).get(pos)
    return a[0] if a else word.lower()


def _guess_by_suffix(w):
    if w.endswith("ly"):
        return "ADV"
    if w.endswith(("ing", "ed")):
        return "VERB"
    if w.endswith(("tion", "sion", "ment", "ness", "ity", "ship", "ism", "ist", "er", "or", "ance", "ence")):
        return "NOUN"
    if w.endswith(("ous", "ful", "ive", "able", "ible", "al", "ic", "less", "ish")):
        return "ADJ"
    if w.endswith("s") and len(w) > 3:
        return "NOUN"
    return None


def _closed_tag(low, prev_low, next_low):
    if _PUNCT.match(low):
        return "PUNCT"
    if _NUMERIC.match(low) or low in NUMBER_WORDS - {"hundred", "thousand", "million", "billion"}:
        return "NUM"
    if low == "'s":
        return "AUX" if prev_low in PRONOUNS or prev_low in WH_WORDS or prev_low in ("there", "here") else "OTHER"
    if low == "let" and next_low == "'s":
        return None
    if low in WH_WORDS:
        return "WH"
    if low in AUX_WORDS:
        return "AUX"
    if low == "her":
        return None  # resolved in context
    if low in PRONOUNS:
        return "PRON"
    if low in DETERMINERS:
        return "DET"
    if low in ADPOSITIONS:
        return "ADP"
    if low in ADVERBS:
        return "ADV"
    if low in OTHER_WORDS:
        return "OTHER"
    return None


def _adj_modifier(a):
    """True when an ADJ reading is plausible enough to beat a noun-noun compound."""
    if "ADJ" not in a:
        return False
    if "NOUN" not in a:
        return True
    return a["ADJ"][1] > 0 and 4 * a["ADJ"][1] >= a["NOUN"][1]


class _Tagger:
    def __init__(self, lexicon):
        self.lex = lexicon

    def candidates(self, tok):
        low = tok.lower
        if low in TITLES or (low in ABBREVIATIONS and tok.text[0].isupper()):
            return {"NOUN": (low, 1, "base")}
        return analyze(low, self.lex)

    def noun_capable(self, i, toks, analyses):
        if i >= len(toks):
            return False
        t = toks[i]
        low = t.lower
        if _closed_tag(low, "", "") is not None or low == "her":
            return False
        if t.text[:1].isupper() and i > 0:
            return True
        a = analyses[i]
        if "NOUN" in a and a["NOUN"][2] in ("base", "plural"):
            return True
        return not a and _guess_by_suffix(low) == "NOUN"

    def tag(self, toks):
        n = len(toks)
        lows = [t.lower for t in toks]
        analyses = [self.candidates(t) for t in toks]
        tags = [None] * n
        verb_seen = False
        pending = False  # do-support or modal awaiting a main verb
        for i, tok in enumerate(toks):
            low = lows[i]
            prev_low = lows[i - 1] if i else ""
            next_low = lows[i + 1] if i + 1 < n else ""
            closed = _closed_tag(low, prev_low, next_low)
            if low == "'s" and prev_low == "let":
                closed = "PRON"
            if closed == "ADV" and low == "home" and i and tags[i - 1] in ("ADP", "DET"):
                tag = "NOUN"
            elif closed:
                tag = closed
            elif low == "her":
                tag = "DET" if self.noun_capable(i + 1, toks, analyses) or lows[i + 1:i + 2] and (
                    "ADJ" in analyses[i + 1] and self.noun_capable(i + 2, toks, analyses)) else "PRON"
            else:
                tag = self.open_tag(i, toks, lows, analyses, tags, verb_seen, pending)
            tags[i] = tag
            if tag == "VERB":
                verb_seen = True
                pending = False
            elif tag == "AUX" and (low in DO_FORMS or low in MODALS):
                pending = True
            elif low in CLAUSE_BREAKS or tag == "WH":
                verb_seen = False
            elif low in TERMINALS:
                verb_seen = pending = False
        return tags

    def open_tag(self, i, toks, lows, analyses, tags, verb_seen, pending):
        tok = toks[i]
        low = lows[i]
        a = analyses[i]
        n = len(toks)
        j = i - 1
        while j >= 0 and tags[j] == "ADV":
            j -= 1
        prev = tags[j] if j >= 0 else None
        prev_low = lows[j] if j >= 0 else ""
        adj_before_adv = i > 0 and tags[i - 1] == "ADV" and lows[i - 1] in DEGREE_ADVERBS
        next_noun = self.noun_capable(i + 1, toks, analyses) and not toks[i + 1].text[:1].isupper()
        next_tag_closed = _closed_tag(lows[i + 1], low, "") if i + 1 < n else "END"
        cap = tok.text[:1].isupper()

        if not a:
            if cap or tok.text.isupper():
                return "NOUN"
            return _guess_by_suffix(low) or ("NOUN" if prev in ("DET", "ADJ", "NUM") else "OTHER")

        # capitalized words: names, places, nationality adjectives
        if cap and i > 0 and prev_low not in TERMINALS:
            if "ADJ" in a and next_noun:
                return "ADJ"
            return "NOUN"
        if cap and i + 1 < n and toks[i + 1].text[:1].isupper() and not toks[i + 1].is_punct:
            return "NOUN"
        if cap and self.lex.frequency(low) < 5 and tok.text in self.lex.gazetteer:
            return "NOUN"

        kinds = {p: v[2] for p, v in a.items()}
        verb_kind = kinds.get("VERB")
        participle = verb_kind in ("past", "ing") or (verb_kind == "base" and low.endswith(("ed", "ing", "en")))

        if adj_before_adv and "ADJ" in a:
            return "ADJ"
        if low.endswith("ly") and "ADV" in a:
            return "ADV"

        if prev == "AUX":
            aux = prev_low
            if aux in BE_FORMS:
                if low in ING_ADJECTIVES and not next_noun:
                    return "ADJ"
                if participle and "VERB" in a:
                    adj = self.lex.frequency(low, "ADJ")
                    if verb_kind != "ing" and adj > a["VERB"][1]:
                        return "ADJ"
                    return "VERB"
                if "ADJ" in a:
                    return "ADJ"
                if "NOUN" in a:
                    return "NOUN"
            if "VERB" in a:
                return "VERB"
        if prev == "PRON" and not verb_seen and "VERB" in a:
            return "VERB"
        if prev == "PRON" and verb_seen and "VERB" in a and verb_kind == "base" and prev_low != "it":
            # object pronoun followed by a bare verb: "let me know"
            if not next_noun or "NOUN" not in a:
                return "VERB"
        if prev_low in DEMONSTRATIVES and i - 1 == j and verb_kind == "3sg" and (j == 0 or tags[j - 1] in (None, "PUNCT", "OTHER")):
            return "VERB"
        if prev_low == "to" and "VERB" in a and verb_kind == "base":
            nxt = next_tag_closed
            if nxt in ("DET", "PRON", "ADP", "ADV", "PUNCT", "END", "WH") or a["VERB"][1] >= a.get("NOUN", ("", 0))[1]:
                return "VERB"
        if prev in ("DET", "ADJ", "NUM", "ADP") or (prev == "OTHER" and prev_low == "'s"):
            if prev_low in DEMONSTRATIVES and verb_kind == "3sg" and not next_noun:
                return "VERB"
            if _adj_modifier(a) and (next_noun or "NOUN" not in a):
                return "ADJ"
            if "NOUN" in a:
                return "NOUN"
            if "ADJ" in a:
                return "ADJ"
            return "VERB" if verb_kind == "ing" else next(iter(a))
        if prev == "WH":
            if prev_low == "how":
                return "ADJ" if "ADJ" in a else ("ADV" if "ADV" in a else "VERB")
            if prev_low in ("what", "which", "whose") and "NOUN" in a:
                return "NOUN"
            if "VERB" in a:
                return "VERB"
        if prev == "NOUN":
            if not verb_seen and "VERB" in a:
                prev_plural = prev_low in IRREGULAR_PLURALS or analyses[j].get("NOUN", ("", 0, ""))[2] == "plural"
                if verb_kind in ("3sg", "past", "ing") or pending or (verb_kind == "base" and prev_plural and "NOUN" not in analyses[i]) \
                        or (verb_kind == "base" and prev_plural and a["VERB"][1] >= a.get("NOUN", ("", 0))[1]):
                    return "VERB"
            if "ADJ" in a and next_noun:
                return "ADJ"
            if "NOUN" in a and kinds["NOUN"] in ("base", "plural") and not (verb_seen and "ADV" in a and a["ADV"][1] > a["NOUN"][1]):
                if not (verb_seen and "ADV" in a and "ADJ" in a):
                    return "NOUN"
            if "ADV" in a:
                return "ADV"
        if prev == "VERB":
            verb_lemma = lemmatize(prev_low, "VERB", self.lex)
            if "ADJ" in a and next_noun:
                return "ADJ"
            if verb_lemma in LINKING_VERBS and "ADJ" in a:
                return "ADJ"
            if verb_kind == "ing":
                return "VERB"
            if "ADV" in a and a["ADV"][1] >= a.get("NOUN", ("", 0))[1]:
                return "ADV"
            if "NOUN" in a:
                return "NOUN"
        if prev is None or prev in ("PUNCT", "OTHER"):
            # clause start: imperative before an object, else subject material
            if "VERB" in a and verb_kind == "base" and next_tag_closed in ("DET", "PRON") and not (
                    prev is None and "NOUN" in a and next_tag_closed == "PRON" and False):
                return "VERB"
            if verb_kind == "ing" and (next_tag_closed == "AUX" or not next_noun):
                return "VERB"
            if "ADJ" in a and next_noun:
                return "ADJ"
            if "NOUN" in a and kinds["NOUN"] in ("base", "plural") and prev is None:
                return "NOUN"
            if "VERB" in a and prev == "OTHER":
                return "VERB"
            if "NOUN" in a:
                return "NOUN"

        for pos in ("VERB", "ADJ", "NOUN", "ADV") if participle else ("NOUN", "VERB", "ADJ", "ADV"):
            if pos in a:
                return pos
        return "OTHER"


def pos_tag(tokens, lexicon: Lexicon | None = None) -> TaggedSentence:
    """Assign one coarse tag (and the stopword flag) to every token."""
    if isinstance(tokens, str):
        tokens = tokenize(tokens)
    tokens = list(tokens)
    lex = lexicon or load_lexicon()
    tags = _Tagger(lex).tag(tokens)
    out = [t.with_(pos=tag, is_stopword=t.lower in lex.stopwords) for t, tag in zip(tokens, tags)]
    terminal = len(out) - 1 if out and out[-1].text in TERMINALS else None
    return TaggedSentence(out, terminal)


def detect_entities(tagged: TaggedSentence, lexicon: Lexicon | None = None) -> TaggedSentence:
    """Label PERSON / LOCATION / ORG tokens; everything else stays NONE.

    Gazetteer hits (places up to three tokens long) win; a capitalized token
    right after a PERSON token continues the name; other capitalized
    non-initial nouns become ORG. A sentence-initial token counts only when
    it is a gazetteer entry that is rare as a common word.
    """
    lex = lexicon or load_lexicon()
    toks = list(tagged.tokens)
    labels = ["NONE"] * len(toks)

    def initial(i):
        return i == 0 or toks[i - 1].text in TERMINALS or toks[i - 1].text in ('"', "“")

    def capitalized(i):
        t = toks[i].text
        return t[:1].isupper() and toks[i].pos == "NOUN" and t.lower() not in DAYS_MONTHS \
            and t.lower() not in TITLES

    def usable(i):
        if not initial(i):
            return True
        low = toks[i].lower
        return _closed_tag(low, "", "") is None and low != "her" and lex.frequency(low) < 5

    i = 0
    while i < len(toks):
        if labels[i] == "NONE" and toks[i].text[:1].isupper():
            for span in (3, 2, 1):
                name = " ".join(t.text for t in toks[i:i + span])
                if i + span <= len(toks) and name in lex.places and usable(i):
                    for k in range(i, i + span):
                        labels[k] = "LOCATION"
                    break
            else:
                if toks[i].text in lex.gazetteer and usable(i) and toks[i].pos == "NOUN":
                    labels[i] = "PERSON"
        i += 1
    for i, t in enumerate(toks):
        if labels[i] != "NONE" or not capitalized(i):
            continue
        if i > 0 and labels[i - 1] == "PERSON":
            labels[i] = "PERSON"
        elif i > 0 and toks[i - 1].lower in TITLES:
            labels[i] = "PERSON"
        elif not initial(i):
            labels[i] = "ORG"
    # initials before a capitalized noun: "J.K Rowling"
    for i in range(len(toks) - 1):
        if _INITIALS.match(toks[i].text) and labels[i + 1] != "LOCATION" and capitalized(i + 1):
            labels[i] = labels[i + 1] = "PERSON"
    # a name continued by a gazetteer surname: "Harry Potter"
    for i in range(len(toks) - 1, 0, -1):
        if labels[i] == "PERSON" and labels[i - 1] == "ORG" and toks[i - 1].text in lex.gazetteer:
            labels[i - 1] = "PERSON"
    for i in range(1, len(toks)):
        if labels[i] == "ORG" and labels[i - 1] == "PERSON":
            labels[i] = "PERSON"
    out = [t.with_(entity=lab) for t, lab in zip(toks, labels)]
    return TaggedSentence(out, tagged.terminal_punct)


def tag_text(text: str, lexicon: Lexicon | None = None) -> TaggedSentence:
    """Tokenize, tag and run NER in one call."""
    lex = lexicon or load_lexicon()
    return detect_entities(pos_tag(tokenize(text), lex), lex)
