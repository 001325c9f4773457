"""Whitespace/punctuation tokenizer with clitic splitting, and a sentence splitter.

Conventions:

* punctuation characters are separate tokens, except runs of ``.`` (ellipsis)
  and the period of a known abbreviation (``Dr.``) or initialism (``U.S.``);
* clitics are split off their host: ``We're`` -> ``We`` ``'re``,
  ``don't`` -> ``do`` ``n't``, ``can't`` -> ``ca`` ``n't``;
* hyphenated words, decimals and thousands-grouped numbers stay whole;
* letter sequences with internal periods (``J.K``) stay whole.

Every non-whitespace character of the input belongs to exactly one token, so
``detokenize(tokenize(text)) == text`` for any text with a non-space character.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

ABBREVIATIONS = frozenset(
    """mr. mrs. ms. dr. prof. sr. jr. st. mt. ft. vs. etc. e.g. i.e. inc. ltd. co. corp.
    jan. feb. mar. apr. jun. jul. aug. sep. sept. oct. nov. dec. no. gen. gov. sen. rep.
    capt. col. lt. sgt. approx. dept. est. fig. vol.""".split()
)
# abbreviations after which a sentence may still end
_TERMINAL_ABBREVIATIONS = frozenset({"etc."})

CLITICS = ("n't", "'s", "'re", "'ve", "'ll", "'d", "'m")

_APOS = "'’"
_CLOSERS = set(".,!?;:)]}\"”" + _APOS)
_OPENERS = set("([{\"“" + _APOS)
_INITIALISM = re.compile(r"^(?:[A-Za-z]\.){2,}$")
_DOTTED = re.compile(r"^[A-Za-z]+(?:\.[A-Za-z]+)+$")
_NUMBER = re.compile(r"^\d+(?:[.,]\d+)*$")
_PUNCT_ONLY = re.compile(r"^[^\w\s]+$")


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int
    ws: str = ""
    ws_before: str = ""
    pos: str = "OTHER"
    is_stopword: bool = False
    entity: str = "NONE"

    @property
    def char_span(self):
        return (self.start, self.end)

    @property
    def lower(self):
        return self.text.lower().replace("’", "'")

    @property
    def is_punct(self):
        return bool(_PUNCT_ONLY.match(self.text))

    def with_(self, **changes):
        return replace(self, **changes)


def _split_clitic(core):
    low = core.lower().replace("’", "'")
    for clitic in CLITICS:
        if low.endswith(clitic) and len(core) > len(clitic):
            host = core[: -len(clitic)]
            if clitic == "n't" or host[-1].isalpha():
                return [host, core[-len(clitic):]]
    return [core]


def _split_chunk(chunk):
    """Split one whitespace-free chunk into token strings."""
    if not chunk:
        return []
    low = chunk.lower().replace("’", "'")
    if low in CLITICS:
        return [chunk]
    if low in ABBREVIATIONS or _INITIALISM.match(chunk):
        return [chunk]

    lead = []
    i = 0
    while i < len(chunk) - 1 and chunk[i] in _OPENERS:
        # a leading apostrophe that starts a clitic stays attached
        if chunk[i] in _APOS and chunk[i:].lower().replace("’", "'") in CLITICS:
            break
        lead.append(chunk[i])
        i += 1
    chunk = chunk[i:]

    trail = []
    while chunk:
        low = chunk.lower()
        if low in ABBREVIATIONS or _INITIALISM.match(chunk):
            break
        if chunk.endswith("..."):
            j = len(chunk)
            while j > 0 and chunk[j - 1] == ".":
                j -= 1
            trail.insert(0, chunk[j:])
            chunk = chunk[:j]
            continue
        if chunk[-1] in _CLOSERS and len(chunk) > 1:
            # keep a trailing apostrophe that closes a clitic-free word (James')
            trail.insert(0, chunk[-1])
            chunk = chunk[:-1]
            continue
        break

    middle = []
    if chunk:
        if _PUNCT_ONLY.match(chunk):
            middle = list(chunk) if not set(chunk) == {"."} else [chunk]
        else:
            # abbreviation glued to a following word: "Dr.XYZ"
            m = re.match(r"^([A-Za-z]{1,5}\.)([A-Za-z].*)$", chunk)
            if m and m.group(1).lower() in ABBREVIATIONS:
                middle = [m.group(1)] + _split_core(m.group(2))
            else:
                middle = _split_core(chunk)
    return lead + middle + trail


_INNER_SPLIT = re.compile(r"([,;:!?\"()\[\]{}/]|\.(?=\s|$))")


def _split_core(core):
    if _NUMBER.match(core) or _DOTTED.match(core):
        return [core]
    parts = []
    for piece in _INNER_SPLIT.split(core):
        if not piece:
            continue
        if len(piece) == 1 and not piece.isalnum():
            parts.append(piece)
        elif _NUMBER.match(piece):
            parts.append(piece)
        else:
            parts.extend(_split_clitic(piece))
    return parts


def tokenize(text: str) -> list[Token]:
    """Tokenize ``text`` into :class:`Token` objects with exact source offsets."""
    tokens = []
    for m in re.finditer(r"\S+", text):
        pos = m.start()
        for piece in _split_chunk(m.group()):
            tokens.append(Token(piece, pos, pos + len(piece)))
            pos += len(piece)
    out = []
    for k, tok in enumerate(tokens):
        nxt = tokens[k + 1].start if k + 1 < len(tokens) else len(text)
        ws = text[tok.end:nxt]
        out.append(tok.with_(ws=ws, ws_before=text[: tok.start] if k == 0 else ""))
    return out


def detokenize(tokens) -> str:
    """Rebuild the source text from tokens produced by :func:`tokenize`."""
    if not tokens:
        return ""
    return tokens[0].ws_before + "".join(t.text + t.ws for t in tokens)


_NO_SPACE_BEFORE = set(".,!?;:)]}%") | {"...", "n't", "'s", "'re", "'ve", "'ll", "'d", "'m"}
_NO_SPACE_AFTER = set("([{$")


def join_words(words) -> str:
    """Join token strings with conventional English spacing."""
    out = ""
    prev = None
    for w in words:
        if not w:
            continue
        if prev is None:
            out = w
        elif w in _NO_SPACE_BEFORE or w.lower().replace("’", "'") in _NO_SPACE_BEFORE or prev in _NO_SPACE_AFTER:
            out += w
        else:
            out += " " + w
        prev = w
    return out


_BOUNDARY = re.compile(r"([.!?]+|\.\.\.)([\"')\]”’]*)(\s+)(?=[\"'(\[“‘]?[A-Z0-9])")


def split_sentences(text: str) -> list[str]:
    """Split text into sentences; ``"".join(result) == text``.

    A boundary is terminal punctuation followed by whitespace and a capital
    letter or digit. Abbreviations and single initials suppress the split.
    Trailing whitespace stays with the preceding sentence.
    """
    if not text:
        return []
    pieces = []
    start = 0
    for m in _BOUNDARY.finditer(text):
        if m.group(1) == ".":
            word = re.search(r"(\S+)$", text[: m.start(1) + 1])
            w = word.group(1).lower() if word else ""
            w = w.lstrip("\"'([")
            if (w in ABBREVIATIONS and w not in _TERMINAL_ABBREVIATIONS) or re.match(r"^[a-z]\.$", w):
                continue
        end = m.end()
        pieces.append(text[start:end])
        start = end
    if start < len(text):
        pieces.append(text[start:])
    return pieces
