"""Static word-embedding metrics: embedding average, greedy matching, vector extrema."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..exceptions import AllOOV, DimensionMismatch, ParseError
from .surface import _refs, words

KINDS = ("average", "greedy", "extrema")
OOV_POLICIES = ("skip", "zero")


@dataclass
class WordVectors:
    dimension: int
    vectors: dict = field(default_factory=dict)
    oov_policy: str = "skip"

    def __post_init__(self):
        if self.dimension < 1:
            raise DimensionMismatch("dimension must be >= 1")
        if self.oov_policy not in OOV_POLICIES:
            raise ValueError(f"oov_policy must be one of {OOV_POLICIES}")
        for w, v in self.vectors.items():
            v = np.asarray(v, dtype=float)
            if v.shape != (self.dimension,):
                raise DimensionMismatch(f"vector for {w!r} has {v.size} values, expected {self.dimension}")
            self.vectors[w] = v

    def lookup(self, word):
        v = self.vectors.get(word)
        if v is None:
            v = self.vectors.get(word.lower())
        return v

    def matrix(self, text) -> np.ndarray:
        """Rows for the in-vocabulary tokens of ``text`` (zeros for OOV under 'zero')."""
        rows = []
        for w in words(text):
            v = self.lookup(w)
            if v is None:
                if self.oov_policy == "zero":
                    rows.append(np.zeros(self.dimension))
                continue
            rows.append(v)
        if not rows or not any(r.any() for r in rows):
            raise AllOOV(f"no in-vocabulary tokens in {text!r}")
        return np.vstack(rows)


def load_vectors(path, oov_policy="skip") -> WordVectors:
    """Read a ``D <dim>`` headed text file of ``word v1 .. vd`` lines."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ParseError(f"cannot read vectors: {exc.strerror}", path) from None
    if not lines:
        raise ParseError("empty vectors file", path)
    head = lines[0].split()
    if len(head) != 2 or head[0] != "D" or not head[1].isdigit():
        raise ParseError("first line must be 'D <dimension>'", path, 1)
    dim = int(head[1])
    vecs = {}
    for n, line in enumerate(lines[1:], 2):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != dim + 1:
            raise DimensionMismatch(f"{path}:{n}: expected {dim} values, got {len(parts) - 1}")
        try:
            vecs[parts[0]] = np.array([float(x) for x in parts[1:]])
        except ValueError:
            raise ParseError("non-numeric vector component", path, n) from None
    return WordVectors(dim, vecs, oov_policy)


def _cos(a, b) -> float:
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        return 0.0
    return float(np.clip(a @ b / (na * nb), -1.0, 1.0))


def _extrema(m):
    hi, lo = m.max(axis=0), m.min(axis=0)
    return np.where(hi >= np.abs(lo), hi, lo)


def _greedy_dir(a, b) -> float:
    na = a / np.maximum(np.linalg.norm(a, axis=1, keepdims=True), 1e-300)
    nb = b / np.maximum(np.linalg.norm(b, axis=1, keepdims=True), 1e-300)
    return float(np.clip(na @ nb.T, -1, 1).max(axis=1).mean())


def cosine_similarity(candidate, reference, vectors: WordVectors, kind: str) -> float:
    """Raw cosine in [-1, 1] for one reference."""
    a, b = vectors.matrix(candidate), vectors.matrix(reference)
    if kind == "average":
        return _cos(a.mean(axis=0), b.mean(axis=0))
    if kind == "extrema":
        return _cos(_extrema(a), _extrema(b))
    if kind == "greedy":
        return (_greedy_dir(a, b) + _greedy_dir(b, a)) / 2
    raise ValueError(f"unknown embedding metric kind {kind!r}; expected one of {KINDS}")


def embedding_metric(candidate: str, references, vectors: WordVectors, kind: str = "average") -> float:
    """Best (c + 1) / 2 over references, where c is the kind's cosine."""
    best = None
    for ref in _refs(references):
        c = cosine_similarity(candidate, ref, vectors, kind)
        best = c if best is None else max(best, c)
    return (best + 1) / 2
