"""Translation edit rate with greedy block shifts."""

from __future__ import annotations

import math
from collections import Counter, deque
from functools import lru_cache

from .surface import _refs, words


@lru_cache(maxsize=1 << 18)
def edit_distance(a: tuple, b: tuple) -> int:
    """Word-level Levenshtein distance (unit costs)."""
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        cur = [i]
        for j, y in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


def block_moves(hyp: tuple, max_len: int):
    """Every distinct sequence reachable by moving one contiguous block."""
    n = len(hyp)
    seen = {hyp}
    for i in range(n):
        for k in range(1, min(max_len, n - i) + 1):
            block, rest = hyp[i:i + k], hyp[:i] + hyp[i + k:]
            for d in range(len(rest) + 1):
                if d == i:
                    continue
                moved = rest[:d] + block + rest[d:]
                if moved not in seen:
                    seen.add(moved)
                    yield moved


# search every arrangement exactly when there are at most this many
EXACT_STATES = 720
# longest block the greedy search will move
MAX_SHIFT = 10


def shift_candidates(hyp: tuple, ref: tuple, max_len=MAX_SHIFT):
    """Block moves worth trying in the greedy search.

    The block must occur in the reference, and it is only dropped next to a
    word that neighbours that occurrence in the reference (or at an edge
    when the occurrence is at one).
    """
    starts = {}
    for k in range(1, min(max_len, len(ref)) + 1):
        for j in range(len(ref) - k + 1):
            starts.setdefault(ref[j:j + k], []).append(j)
    n = len(hyp)
    seen = {hyp}
    for i in range(n):
        for k in range(1, min(max_len, n - i) + 1):
            block = hyp[i:i + k]
            if block not in starts:
                break
            rest = hyp[:i] + hyp[i + k:]
            for j in starts[block]:
                if j == i:
                    continue
                before = ref[j - 1] if j > 0 else None
                after = ref[j + k] if j + k < len(ref) else None
                for d in range(len(rest) + 1):
                    if d == i:
                        continue
                    left_ok = rest[d - 1] == before if d > 0 else before is None
                    right_ok = rest[d] == after if d < len(rest) else after is None
                    if not (left_ok or right_ok):
                        continue
                    moved = rest[:d] + block + rest[d:]
                    if moved not in seen:
                        seen.add(moved)
                        yield moved


def bag_bound(hyp, ref) -> int:
    """Lower bound on the edit distance of any rearrangement of ``hyp``."""
    common = sum((Counter(hyp) & Counter(ref)).values())
    return max(len(hyp), len(ref)) - common


def arrangements(hyp) -> int:
    n = math.factorial(len(hyp))
    for k in Counter(hyp).values():
        n //= math.factorial(k)
    return n


def _exact(hyp, ref, lb):
    """Breadth-first search over block moves; returns (shifts, edits)."""
    best = (0, edit_distance(hyp, ref))
    dist = {hyp: 0}
    queue = deque([hyp])
    max_len = max(1, len(ref))
    while queue:
        x = queue.popleft()
        d = dist[x] + 1
        if d + lb >= sum(best):
            continue
        for y in block_moves(x, max_len):
            if y in dist:
                continue
            dist[y] = d
            queue.append(y)
            e = edit_distance(y, ref)
            if d + e < sum(best):
                best = (d, e)
    return best


def shift_edits(hyp, ref) -> tuple[int, int]:
    """(shifts, edit distance) minimizing their sum over block shifts.

    Small arrangement spaces are searched exhaustively. Otherwise each
    round applies the candidate move (see :func:`shift_candidates`) with the
    lowest resulting edit distance, provided it lowers the total cost (a
    shift costs one edit); ties go to the first move in enumeration order.
    """
    hyp, ref = tuple(hyp), tuple(ref)
    shifts, ed = 0, edit_distance(hyp, ref)
    lb = bag_bound(hyp, ref)
    if ed - 1 <= lb:
        # no rearrangement can pay for its shift
        return shifts, ed
    if arrangements(hyp) <= EXACT_STATES:
        return _exact(hyp, ref, lb)
    while ed - 1 > lb:
        best, best_ed = None, ed - 1
        for moved in shift_candidates(hyp, ref):
            d = edit_distance(moved, ref)
            if d < best_ed:
                best, best_ed = moved, d
        if best is None:
            break
        hyp, ed, shifts = best, best_ed, shifts + 1
    return shifts, ed


def ter_raw(candidate: str, references) -> float:
    """Edit rate (edits + shifts) / reference length, minimum over references."""
    hyp = words(candidate)
    best = None
    for ref in _refs(references):
        r = words(ref)
        if not r:
            continue
        shifts, ed = shift_edits(hyp, r)
        rate = (shifts + ed) / len(r)
        best = rate if best is None else min(best, rate)
    return best


def ter(candidate: str, references) -> tuple[float, float]:
    """(raw edit rate, normalized score = 1 - min(raw, 1))."""
    raw = ter_raw(candidate, references)
    return raw, 1.0 - min(raw, 1.0)
