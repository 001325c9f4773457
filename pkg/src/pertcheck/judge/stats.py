"""Correlation statistics and bucketing."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..exceptions import DegenerateInput

METHODS = ("kendall_b", "pearson")
POOR, MODERATE, HIGH = "poor", "moderate", "high"
LOW_CUT, HIGH_CUT = 0.3, 0.5


def _pair(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise DegenerateInput("x and y must be 1-d and of equal length")
    if x.size < 2:
        raise DegenerateInput("need at least 2 observations")
    if np.isnan(x).any() or np.isnan(y).any():
        raise DegenerateInput("NaN in input")
    return x, y


def tau_b_counts(x, y):
    """(concordant, discordant, n0, n1, n2) by pair counting.

    n1 and n2 are the numbers of pairs tied in x and in y respectively.
    """
    x, y = _pair(x, y)
    n = x.size
    iu = np.triu_indices(n, 1)
    dx = np.sign(x[:, None] - x[None, :])[iu]
    dy = np.sign(y[:, None] - y[None, :])[iu]
    prod = dx * dy
    conc = int((prod > 0).sum())
    disc = int((prod < 0).sum())
    return conc, disc, n * (n - 1) // 2, int((dx == 0).sum()), int((dy == 0).sum())


def kendall_tau_b(x, y) -> float:
    """Kendall's tau-b: (C - D) / sqrt((n0 - n1)(n0 - n2))."""
    c, d, n0, n1, n2 = tau_b_counts(x, y)
    if n0 == n1 or n0 == n2:
        raise DegenerateInput("tau-b undefined: one side is constant")
    return (c - d) / math.sqrt((n0 - n1) * (n0 - n2))


def pearson(x, y) -> float:
    x, y = _pair(x, y)
    dx, dy = x - x.mean(), y - y.mean()
    sx, sy = math.sqrt(float(dx @ dx)), math.sqrt(float(dy @ dy))
    if sx == 0 or sy == 0:
        raise DegenerateInput("pearson undefined: one side is constant")
    return max(-1.0, min(1.0, float(dx @ dy) / (sx * sy)))


def correlate(x, y, method="kendall_b") -> float:
    if method in ("kendall", "kendall_b"):
        return kendall_tau_b(x, y)
    if method == "pearson":
        return pearson(x, y)
    raise ValueError(f"unknown method {method!r}; expected kendall_b or pearson")


def bucket(value) -> str | None:
    """poor below 0.3, moderate in [0.3, 0.5], high above 0.5 (signed value)."""
    if value is None or math.isnan(value):
        return None
    if value < LOW_CUT:
        return POOR
    if value <= HIGH_CUT:
        return MODERATE
    return HIGH


@dataclass
class CorrelationMatrix:
    """Correlations between row and column variables.

    Square criteria matrices have identical row and column labels.
    Degenerate cells hold NaN and are listed in ``flagged``.
    """

    row_labels: list
    col_labels: list
    values: np.ndarray
    method: str
    flagged: list = field(default_factory=list)

    @property
    def labels(self):
        return self.row_labels

    @property
    def square(self):
        return list(self.row_labels) == list(self.col_labels)

    def cells(self):
        """(row, col, value) over distinct pairs: upper triangle when square, else every cell."""
        for i, r in enumerate(self.row_labels):
            for j, c in enumerate(self.col_labels):
                if self.square and j <= i:
                    continue
                yield r, c, float(self.values[i, j])

    def buckets(self) -> dict:
        counts = {POOR: 0, MODERATE: 0, HIGH: 0}
        for _, _, v in self.cells():
            b = bucket(v)
            if b:
                counts[b] += 1
        return counts


def _norm_method(method):
    if method == "kendall":
        return "kendall_b"
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected kendall_b or pearson")
    return method


def _columns(scores):
    labels = list(scores)
    cols = [np.asarray(scores[k], dtype=float) for k in labels]
    if cols and any(c.shape != cols[0].shape for c in cols):
        raise DegenerateInput("all columns must have the same length")
    return labels, cols


def criteria_matrix(scores: dict, method="kendall_b") -> CorrelationMatrix:
    """Pairwise correlations between aligned per-sample criteria scores."""
    method = _norm_method(method)
    labels, cols = _columns(scores)
    k = len(labels)
    vals = np.eye(k)
    flagged = []
    for i in range(k):
        for j in range(i + 1, k):
            try:
                v = correlate(cols[i], cols[j], method)
            except DegenerateInput:
                v = math.nan
                flagged.append((labels[i], labels[j]))
            vals[i, j] = vals[j, i] = v
    return CorrelationMatrix(labels, labels, vals, method, flagged)


def metric_criteria_corr(metric_scores: dict, criteria_scores: dict, method="kendall_b") -> CorrelationMatrix:
    """Metrics (rows) against criteria (columns); inputs aligned by sample."""
    method = _norm_method(method)
    mlabels, mcols = _columns(metric_scores)
    clabels, ccols = _columns(criteria_scores)
    if mcols and ccols and mcols[0].shape != ccols[0].shape:
        raise DegenerateInput("metric and criteria columns must be aligned")
    vals = np.zeros((len(mlabels), len(clabels)))
    flagged = []
    for i, m in enumerate(mcols):
        for j, c in enumerate(ccols):
            try:
                vals[i, j] = correlate(m, c, method)
            except DegenerateInput:
                vals[i, j] = math.nan
                flagged.append((mlabels[i], clabels[j]))
    return CorrelationMatrix(mlabels, clabels, vals, method, flagged)


def iaa_runs(matrix, runs=5, seed=7) -> list[float]:
    """Tau-b between the item means of two random annotator halves, per run.

    Run r uses a generator seeded from (seed, r), so runs are independent
    of each other and of execution order.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] < 2 or m.shape[1] < 2:
        raise DegenerateInput("need at least 2 annotators and 2 items")
    if runs < 1:
        raise DegenerateInput("runs must be >= 1")
    out = []
    for r in range(runs):
        rng = np.random.default_rng([int(seed), r])
        order = rng.permutation(m.shape[0])
        half = m.shape[0] // 2
        a, b = m[order[:half]].mean(axis=0), m[order[half:]].mean(axis=0)
        out.append(kendall_tau_b(a, b))
    return out


def iaa_split(matrix, runs=5, seed=7) -> float:
    """Mean over runs of the split-half tau-b agreement."""
    vals = iaa_runs(matrix, runs, seed)
    return sum(vals) / len(vals)
