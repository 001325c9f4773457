"""Sentence-level BLEU, ROUGE-L and chrF++."""

from __future__ import annotations

import math
from collections import Counter
from functools import lru_cache

from ..exceptions import EmptyReference
from ..textkit.tokenize import tokenize


@lru_cache(maxsize=1 << 16)
def words(text: str) -> tuple:
    """Metric tokenization: the textkit tokenizer's token strings."""
    return tuple(t.text for t in tokenize(text)) if text and text.strip() else ()


def _refs(references) -> list[str]:
    if isinstance(references, str):
        references = [references]
    refs = [r for r in references if r is not None]
    if not refs or not any(r.strip() for r in refs):
        raise EmptyReference("at least one non-empty reference is required")
    return refs


def ngrams(seq, n) -> Counter:
    return Counter(tuple(seq[i:i + n]) for i in range(len(seq) - n + 1))


def bleu(candidate: str, references, max_n: int = 4) -> float:
    """Sentence BLEU with add-one smoothing for n >= 2 (p1 unsmoothed).

    Counts are clipped by the maximum count in any single reference; the
    brevity penalty uses the reference length closest to the candidate's.
    """
    refs = [words(r) for r in _refs(references)]
    hyp = words(candidate)
    c = len(hyp)
    if c == 0:
        return 0.0
    log_sum = 0.0
    for n in range(1, max_n + 1):
        h = ngrams(hyp, n)
        max_ref = Counter()
        for r in refs:
            for g, k in ngrams(r, n).items():
                if k > max_ref[g]:
                    max_ref[g] = k
        match = sum(min(k, max_ref[g]) for g, k in h.items())
        total = sum(h.values())
        if n == 1:
            if match == 0:
                return 0.0
            p = match / total
        else:
            p = (match + 1) / (total + 1)
        log_sum += math.log(p)
    r = min((abs(len(x) - c), len(x)) for x in refs)[1]
    bp = 1.0 if c > r else math.exp(1 - r / c)
    return min(1.0, bp * math.exp(log_sum / max_n))


def lcs_length(a, b) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, 1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_l(candidate: str, references, beta: float = 1.2) -> float:
    """LCS F-measure (lowercased tokens), best over references."""
    refs = _refs(references)
    hyp = [w.lower() for w in words(candidate)]
    best = 0.0
    for ref in refs:
        r = [w.lower() for w in words(ref)]
        lcs = lcs_length(hyp, r)
        if lcs == 0:
            continue
        p, rec = lcs / len(hyp), lcs / len(r)
        f = (1 + beta ** 2) * p * rec / (rec + beta ** 2 * p)
        best = max(best, f)
    return best


def _char_grams(text, n):
    s = "".join(text.split())
    return Counter(s[i:i + n] for i in range(len(s) - n + 1))


def _f_beta(hyp: Counter, ref: Counter, beta):
    """(F-score, effective) for one n-gram order."""
    th, tr = sum(hyp.values()), sum(ref.values())
    if th == 0 or tr == 0:
        return 0.0, False
    match = sum(min(k, ref[g]) for g, k in hyp.items())
    if match == 0:
        return 0.0, True
    p, r = match / th, match / tr
    return (1 + beta ** 2) * p * r / (beta ** 2 * p + r), True


def chrf_pp(candidate: str, references, char_order: int = 6, word_order: int = 2, beta: float = 2.0) -> float:
    """chrF++: F-beta over character 1..6-grams and word 1..2-grams.

    Per-order F-scores are averaged over the orders for which both sides
    have n-grams; whitespace is ignored for character n-grams.
    """
    refs = _refs(references)
    hyp_w = words(candidate)
    best = 0.0
    for ref in refs:
        ref_w = words(ref)
        total, eff = 0.0, 0
        for n in range(1, char_order + 1):
            f, ok = _f_beta(_char_grams(candidate, n), _char_grams(ref, n), beta)
            total += f
            eff += ok
        for n in range(1, word_order + 1):
            f, ok = _f_beta(ngrams(hyp_w, n), ngrams(ref_w, n), beta)
            total += f
            eff += ok
        if eff:
            best = max(best, total / eff)
    return min(1.0, best)
