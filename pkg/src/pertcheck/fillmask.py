"""Fill-mask providers.

A provider answers a :class:`MaskedQuery` with ranked candidates per mask
slot. Three kinds exist:

* ``lexicon``: offline, deterministic; candidates are lexicon neighbours of
  the masked word, with the part of speech guessed from context;
* ``file``: replays fills recorded in a fills JSONL file or a suite file;
* ``remote``: talks to a masked-LM server over HTTP.
"""

from __future__ import annotations

import json
import time
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path

from .exceptions import ConfigError, EmptyResult, NoCandidates, ParseError, RemoteUnavailable
from .textkit.lexicon import Lexicon, load_lexicon, related_words
from .textkit.tagger import analyze, pos_tag
from .textkit.tokenize import tokenize

MASK = "<mask>"
DEFAULT_TOP_K = 10
TIMEOUT = 5.0
RETRIES = 3
BACKOFF = 0.5

# fallbacks for a masked question word, by WH type
_WH_FILLS = {
    "when": ("yesterday", "in 1990", "last year", "on Monday", "in the morning"),
    "where": (),  # filled from the place gazetteer
    "why": ("because of the weather", "for fun", "by accident"),
    "how": ("quickly", "carefully", "by train"),
    "how many": ("two", "three", "ten", "many"),
    "how much": ("a lot", "ten dollars", "very little"),
    "how old": ("ten years old", "twenty years old"),
    "what": ("something", "nothing", "a secret"),
}


@dataclass(frozen=True)
class MaskedQuery:
    left_context: str
    right_context: str
    mask_count: int = 1
    forbidden: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.mask_count, int) or self.mask_count < 1:
            raise ValueError("mask_count must be >= 1")
        object.__setattr__(self, "forbidden", frozenset(w.lower() for w in self.forbidden))

    @property
    def text(self):
        """Query text with one ``<mask>`` per slot, as sent to a remote server."""
        masks = " ".join([MASK] * self.mask_count)
        return " ".join(p for p in (self.left_context, masks, self.right_context) if p)


@dataclass(frozen=True)
class FillResult:
    fills: tuple
    provider_id: str


def _clean(query, slots, provider_id):
    """Drop forbidden and duplicate candidates; every slot must keep one."""
    out = []
    for cands in slots:
        seen = []
        for c in cands:
            c = str(c).strip()
            if c and c.lower() not in query.forbidden and c not in seen:
                seen.append(c)
        if not seen:
            raise NoCandidates(f"{provider_id}: no admissible candidate for {query.text!r}")
        out.append(tuple(seen))
    if len(out) != query.mask_count:
        raise NoCandidates(f"{provider_id}: expected {query.mask_count} slots, got {len(out)}")
    return FillResult(tuple(out), provider_id)


class LexiconProvider:
    """Offline provider backed by the lexicon's sibling and synonym relations."""

    provider_id = "lexicon"

    def __init__(self, lexicon: Lexicon | None = None, top_k: int = DEFAULT_TOP_K):
        self.lexicon = lexicon or load_lexicon()
        self.top_k = int(top_k)

    def _guess_pos(self, query, seed):
        n_left = len(tokenize(query.left_context)) if query.left_context.strip() else 0
        text = " ".join(p for p in (query.left_context, seed, query.right_context) if p)
        tagged = pos_tag(text, self.lexicon)
        if n_left < len(tagged.tokens):
            return tagged.tokens[n_left].pos
        return None

    def _wh_candidates(self, seed):
        lex = self.lexicon
        if seed.startswith("who"):
            return [n for n, g in sorted(lex.gazetteer.items()) if g in ("M", "F")]
        if seed == "where":
            return [f"in {p}" for p in sorted(lex.places)]
        if seed in _WH_FILLS:
            return list(_WH_FILLS[seed])
        words = seed.split(" ")
        if words[0] == "how" and len(words) > 2 and " ".join(words[:2]) in _WH_FILLS:
            rest = " ".join(words[2:])
            return [f"{n} {rest}" for n in _WH_FILLS[" ".join(words[:2])]]
        if words[0] == "how":
            return list(_WH_FILLS["how"])
        if words[0] in ("what", "which", "whose") and len(words) > 1:
            head = words[-1]
            out = [f"the {' '.join(words[1:])}"]
            for relation in ("sibling", "synonym"):
                try:
                    out += [f"the {w}" for w in related_words(head, "NOUN", relation, lex)]
                except EmptyResult:
                    pass
            return out
        if words[0] in ("what", "which"):
            return list(_WH_FILLS["what"])
        return []

    def _word_candidates(self, query, seed):
        lex = self.lexicon
        pos = self._guess_pos(query, seed)
        if pos not in ("NOUN", "VERB", "ADJ", "ADV"):
            return []
        a = analyze(seed, lex).get(pos)
        if a is None:
            return []
        lemma, _, form = a
        words = []
        for relation in ("sibling", "synonym"):
            try:
                rel = related_words(lemma, pos, relation, lex)
            except EmptyResult:
                continue
            rel = [w for w in rel if " " not in w and w not in words]
            words += sorted(rel, key=lambda w: (-lex.frequency(w, pos), w))
        if pos == "NOUN" and form == "plural" and lemma != seed:
            from .perturb.primitives import _pluralize

            words = [_pluralize(w) for w in words]
        return words

    def fill(self, query: MaskedQuery, key=None) -> FillResult:
        if query.mask_count != 1 or len(query.forbidden) != 1:
            raise NoCandidates("lexicon provider needs exactly one masked word to anchor on")
        (seed,) = query.forbidden
        words = self._wh_candidates(seed) if seed.split(" ")[0] in ("who", "whom", "where", "when", "why", "how", "what", "which", "whose") \
            else self._word_candidates(query, seed)
        words = [w for w in words if w.lower() not in query.forbidden][: self.top_k]
        return _clean(query, [words], self.provider_id)


class FileProvider:
    """Replays recorded fills keyed by (sample_id, template_id); slot picks the list."""

    provider_id = "file"

    def __init__(self, path):
        self.path = Path(path)
        if not self.path.is_file():
            raise ConfigError(f"fills file not found: {self.path}")
        self.table = {}
        with self.path.open(encoding="utf-8") as fh:
            for n, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ParseError(str(exc), self.path, n) from None
                if "manifest" in rec or "sample_id" not in rec:
                    continue
                if rec.get("fills"):
                    self.table[(rec["sample_id"], rec["template_id"])] = [list(s) for s in rec["fills"]]

    def fill(self, query: MaskedQuery, key=None) -> FillResult:
        if key is None:
            raise NoCandidates("file provider needs a (sample_id, template_id, slot) key")
        sid, tid, slot = key
        rec = self.table.get((sid, tid))
        if rec is None or slot + query.mask_count > len(rec):
            raise NoCandidates(f"no recorded fills for {sid}/{tid} slot {slot}")
        return _clean(query, rec[slot: slot + query.mask_count], self.provider_id)


class RemoteProvider:
    """HTTP client for ``POST /fill``; stateless, so safe to call concurrently."""

    provider_id = "remote"

    def __init__(self, url: str, top_k: int = DEFAULT_TOP_K, timeout: float = TIMEOUT,
                 retries: int = RETRIES, backoff: float = BACKOFF):
        parts = urllib.parse.urlparse(url or "")
        if parts.scheme not in ("http", "https") or not parts.netloc:
            raise ConfigError(f"malformed fill server URL: {url!r}")
        self.endpoint = url.rstrip("/") + ("" if parts.path.endswith("/fill") else "/fill")
        self.top_k = int(top_k)
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff

    def _post(self, body):
        req = urllib.request.Request(self.endpoint, data=json.dumps(body).encode(),
                                     headers={"Content-Type": "application/json"}, method="POST")
        last = None
        for attempt in range(self.retries + 1):
            try:
                with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                    return json.loads(resp.read().decode("utf-8"))
            except (urllib.error.URLError, TimeoutError, ConnectionError, OSError) as exc:
                last = exc
                if attempt < self.retries:
                    time.sleep(self.backoff * 2 ** attempt)
            except json.JSONDecodeError as exc:
                raise RemoteUnavailable(f"fill server sent invalid JSON: {exc}") from None
        raise RemoteUnavailable(f"fill server unreachable at {self.endpoint}: {last}")

    def fill(self, query: MaskedQuery, key=None) -> FillResult:
        data = self._post({"text": query.text, "top_k": self.top_k})
        cands = data.get("candidates") if isinstance(data, dict) else None
        if not isinstance(cands, list) or not all(isinstance(s, list) for s in cands):
            raise RemoteUnavailable("fill server response lacks a candidates list of lists")
        return _clean(query, cands, self.provider_id)


def make_provider(kind: str, config: dict | None = None):
    """Build a provider: ``lexicon`` (lexicon / lexicon_dir, top_k),
    ``file`` (path) or ``remote`` (url, top_k)."""
    config = dict(config or {})
    if kind == "lexicon":
        lex = config.get("lexicon")
        if lex is None:
            lex = load_lexicon(config.get("lexicon_dir"))
        return LexiconProvider(lex, config.get("top_k", DEFAULT_TOP_K))
    if kind == "file":
        if not config.get("path"):
            raise ConfigError("file fill provider needs a path")
        return FileProvider(config["path"])
    if kind == "remote":
        return RemoteProvider(config.get("url", ""), config.get("top_k", DEFAULT_TOP_K))
    raise ConfigError(f"unknown fill provider {kind!r}")


def fill(query: MaskedQuery, provider, key=None) -> FillResult:
    """Ask ``provider`` for candidates; ``key`` identifies the slot for replay."""
    return provider.fill(query, key)
