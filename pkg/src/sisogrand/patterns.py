"""Error-pattern schedules for ORBGRAND.

Patterns are index sets into the reliability-sorted word (index 0 is the least
reliable bit). They are emitted by nondecreasing weight, where the weight is
either the logistic weight (sum of 1-based indices) or the improved logistic
weight (the same sum with the i-th smallest index scaled by i+1). Equal-weight
patterns come out by ascending Hamming weight, then lexicographically.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass
from typing import Iterator, List

import numpy as np


class ScheduleKind(str, enum.Enum):
    LWO = "LWO"
    ILWO = "iLWO"

    @classmethod
    def parse(cls, text) -> "ScheduleKind":
        if isinstance(text, cls):
            return text
        for kind in cls:
            if kind.value.lower() == str(text).strip().lower():
                return kind
        raise ValueError(f"unknown schedule {text!r}; use LWO or iLWO")


@dataclass(frozen=True)
class ErrorPattern:
    v: tuple = ()

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.v, self.v[1:])) or any(i < 0 for i in self.v):
            raise ValueError(f"pattern indices must be strictly increasing and >= 0: {self.v}")

    @property
    def hw(self) -> int:
        return len(self.v)

    def weight(self, kind: ScheduleKind) -> int:
        return logistic_weight(self) if kind is ScheduleKind.LWO else improved_weight(self)


class GeneratorExhausted(StopIteration):
    """Every pattern of the given length has been emitted."""


def logistic_weight(p: ErrorPattern) -> int:
    return sum(i + 1 for i in p.v)


def improved_weight(p: ErrorPattern) -> int:
    return sum((pos + 1) * (i + 1) for pos, i in enumerate(p.v))


def max_weight(kind: ScheduleKind, n: int) -> int:
    """Weight of the all-ones pattern, the last one in either order."""
    if kind is ScheduleKind.LWO:
        return n * (n + 1) // 2
    return n * (n + 1) * (2 * n + 1) // 6


def _coef(kind: ScheduleKind, pos: int) -> int:
    return 1 if kind is ScheduleKind.LWO else pos + 1


def _max_hw(kind: ScheduleKind, n: int, w: int) -> int:
    h = 0
    while h < n and sum(_coef(kind, t) * (t + 1) for t in range(h + 1)) <= w:
        h += 1
    return h


def _fixed_hw(kind: ScheduleKind, n: int, w: int, h: int) -> List[tuple]:
    """All strictly increasing 1-based part tuples of length h and weight w, lexicographic."""
    out: List[tuple] = []
    parts = [0] * h

    def min_rest(pos: int, lo: int) -> int:
        return sum(_coef(kind, pos + t) * (lo + t) for t in range(h - pos))

    def max_rest(pos: int) -> int:
        r = h - pos
        return sum(_coef(kind, pos + t) * (n - r + 1 + t) for t in range(r))

    def dfs(pos: int, lo: int, remaining: int) -> None:
        c = _coef(kind, pos)
        if pos == h - 1:
            if remaining % c == 0 and lo <= remaining // c <= n:
                parts[pos] = remaining // c
                out.append(tuple(parts))
            return
        for p in range(lo, n + 1):
            if min_rest(pos, p) > remaining:
                break
            if max_rest(pos) < remaining:
                break
            rest = remaining - c * p
            if max_rest(pos + 1) < rest:
                continue
            parts[pos] = p
            dfs(pos + 1, p + 1, rest)

    if h == 0:
        return [()] if w == 0 else []
    dfs(0, 1, w)
    return out


def patterns_for_weight(kind: ScheduleKind, n: int, w: int) -> List[ErrorPattern]:
    """Every pattern on ``n`` positions with weight exactly ``w``, in schedule order."""
    kind = ScheduleKind.parse(kind)
    if w < 0:
        raise ValueError("weight must be nonnegative")
    if w == 0:
        return [ErrorPattern(())]
    out = []
    for h in range(1, _max_hw(kind, n, w) + 1):
        out.extend(ErrorPattern(tuple(p - 1 for p in parts)) for parts in _fixed_hw(kind, n, w, h))
    return out


class PatternGenerator:
    """Lazy, single-consumer stream of patterns for words of length ``n``."""

    def __init__(self, kind: ScheduleKind, n: int):
        self.kind = ScheduleKind.parse(kind)
        self.n = n
        self.current_weight = 0
        self.emitted = 0
        self._level: List[ErrorPattern] = patterns_for_weight(self.kind, n, 0)
        self._cursor = 0
        self._last_weight = max_weight(self.kind, n)

    def __iter__(self) -> Iterator[ErrorPattern]:
        return self

    def __next__(self) -> ErrorPattern:
        while self._cursor >= len(self._level):
            if self.current_weight >= self._last_weight:
                raise GeneratorExhausted
            self.current_weight += 1
            self._level = patterns_for_weight(self.kind, self.n, self.current_weight)
            self._cursor = 0
        p = self._level[self._cursor]
        self._cursor += 1
        self.emitted += 1
        return p


def next_pattern(g: PatternGenerator) -> ErrorPattern:
    """Next pattern from ``g``; raises ``GeneratorExhausted`` at the end."""
    return next(g)


class PatternCache:
    """The first patterns of a schedule as flat arrays (CSR layout).

    Pattern ``q`` is ``indices[offsets[q]:offsets[q + 1]]``. The cache grows on
    demand and never changes what it already holds, so it is safe to share.
    """

    def __init__(self, kind: ScheduleKind, n: int):
        self.kind = ScheduleKind.parse(kind)
        self.n = n
        self.total = 1 << n if n < 63 else None
        self._gen = PatternGenerator(self.kind, n)
        self._offsets = [0]
        self._indices: List[int] = []
        self.offsets = np.zeros(1, dtype=np.int64)
        self.indices = np.zeros(0, dtype=np.int32)
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self.offsets) - 1

    def ensure(self, count: int) -> "PatternCache":
        """Grow to at least ``min(count, total)`` patterns."""
        if self.total is not None:
            count = min(count, self.total)
        if len(self) >= count:
            return self
        with self._lock:
            have = len(self._offsets) - 1
            if have < count:
                for p in self._gen:
                    self._indices.extend(p.v)
                    self._offsets.append(len(self._indices))
                    have += 1
                    if have >= count:
                        break
                offsets = np.asarray(self._offsets, dtype=np.int64)
                indices = np.asarray(self._indices, dtype=np.int32)
                # publish indices first; readers size themselves from offsets
                self.indices = indices
                self.offsets = offsets
        return self

    def pattern(self, q: int) -> ErrorPattern:
        self.ensure(q + 1)
        return ErrorPattern(tuple(int(i) for i in self.indices[self.offsets[q]:self.offsets[q + 1]]))


_caches: dict = {}
_caches_lock = threading.Lock()


def pattern_cache(kind: ScheduleKind, n: int, count: int = 0) -> PatternCache:
    """Process-wide shared cache for ``(kind, n)``, grown to ``count`` patterns."""
    kind = ScheduleKind.parse(kind)
    with _caches_lock:
        cache = _caches.get((kind, n))
        if cache is None:
            cache = _caches[(kind, n)] = PatternCache(kind, n)
    return cache.ensure(count)
