"""GRAND-family decoders: GRANDAB, ORBGRAND and the two-candidate SISO search."""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from math import comb
from typing import Optional

import numpy as np

from . import _kernels
from .channel import hard_decision
from .codes import LinearCode, syndrome_mask
from .patterns import ErrorPattern, ScheduleKind, pattern_cache
from .soft import metric

# above this length "unbounded" would mean enumerating 2^n patterns
MAX_UNBOUNDED_N = 24


class Status(str, enum.Enum):
    FOUND_PAIR = "FOUND_PAIR"
    FOUND_SINGLE = "FOUND_SINGLE"
    ABANDONED = "ABANDONED"


@dataclass(frozen=True)
class DecodeBudget:
    """Query budgets for the candidate search.

    With ``et_enabled`` the best candidate must appear within ``q_max`` queries
    and the competitor search may run on to ``q_max_c`` queries in total.
    Without it there is one budget, ``q_max``, shared by both phases, and
    ``q_max_c`` is forced equal to it.
    """

    q_max: int
    q_max_c: Optional[int] = None
    et_enabled: bool = False

    def __post_init__(self):
        if self.q_max < 1:
            raise ValueError(f"q_max must be >= 1, got {self.q_max}")
        if not self.et_enabled or self.q_max_c is None:
            object.__setattr__(self, "q_max_c", self.q_max)
        elif self.q_max_c < self.q_max:
            raise ValueError(f"q_max_c ({self.q_max_c}) must be >= q_max ({self.q_max})")

    @classmethod
    def standard(cls, q: int) -> "DecodeBudget":
        return cls(q, q, False)

    @classmethod
    def early_termination(cls, q_max: int, q_max_c: int) -> "DecodeBudget":
        return cls(q_max, q_max_c, True)


@dataclass(frozen=True)
class SortContext:
    permutation: np.ndarray
    sorted_magnitudes: np.ndarray


@dataclass(frozen=True, eq=False)
class DecodeResult:
    status: Status
    x_hat: Optional[np.ndarray] = None
    x_hat_c: Optional[np.ndarray] = None
    q_main: int = 0
    q_total: int = 0

    @property
    def found(self) -> bool:
        return self.status is not Status.ABANDONED


def sort_reliabilities(y) -> SortContext:
    """Stable sort of bit positions by ascending |LLR|."""
    mag = np.abs(np.asarray(y, dtype=np.float64))
    perm = np.argsort(mag, kind="stable")
    return SortContext(perm, mag[perm])


def apply_pattern(hard_bits, ctx: SortContext, p: ErrorPattern) -> np.ndarray:
    out = np.array(hard_bits, dtype=np.uint8, copy=True)
    if p.v:
        out[ctx.permutation[list(p.v)]] ^= 1
    return out


def _run_search(code, s0, cols, cache, limit_first, limit_total, want_pair):
    if cols.shape[1] == 1:
        return _kernels.ordered_search_1w(
            s0[0], cols[:, 0].copy(), cache.offsets, cache.indices,
            limit_first, limit_total, want_pair,
        )
    return _kernels.ordered_search(
        s0, cols, cache.offsets, cache.indices, limit_first, limit_total, want_pair
    )


def siso_search(
    y,
    code: LinearCode,
    kind: ScheduleKind,
    budget: DecodeBudget,
    find_competitor: bool = True,
) -> DecodeResult:
    """ORBGRAND search for the best candidate and, optionally, a competitor.

    The competitor is the next codeword met in schedule order. Phase 2 only
    runs while total queries are below ``budget.q_max_c``.
    """
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (code.n,):
        raise ValueError(f"LLR vector must have length {code.n}")
    ctx = sort_reliabilities(y)
    hard = hard_decision(y)
    total = budget.q_max_c if find_competitor else budget.q_max
    cache = pattern_cache(kind, code.n, total)
    limit_total = min(total, len(cache))
    limit_first = min(budget.q_max, limit_total)
    cols = code.column_masks[ctx.permutation]
    s0 = syndrome_mask(code, hard)
    first, second, q = _run_search(code, s0, cols, cache, limit_first, limit_total, find_competitor)
    if first < 0:
        return DecodeResult(Status.ABANDONED, q_main=q, q_total=q)
    x_hat = apply_pattern(hard, ctx, cache.pattern(first))
    if second < 0:
        return DecodeResult(Status.FOUND_SINGLE, x_hat, None, first + 1, q)
    x_hat_c = apply_pattern(hard, ctx, cache.pattern(second))
    return DecodeResult(Status.FOUND_PAIR, x_hat, x_hat_c, first + 1, q)


def orbgrand_decode(
    y, code: LinearCode, kind: ScheduleKind, q_max: Optional[int] = None
) -> DecodeResult:
    """Soft-input hard-output ORBGRAND; ``q_max=None`` means no abandonment."""
    if q_max is None:
        if code.n > MAX_UNBOUNDED_N:
            raise ValueError(f"unbounded search is limited to n <= {MAX_UNBOUNDED_N}")
        q_max = 1 << code.n
    return siso_search(y, code, kind, DecodeBudget.standard(q_max), find_competitor=False)


def grandab_queries(n: int, max_hw: int) -> int:
    """Queries GRANDAB spends before abandoning."""
    return sum(comb(n, h) for h in range(min(max_hw, n) + 1))


def grandab_decode(hard_bits, code: LinearCode, max_hw: int = 2) -> DecodeResult:
    """Hard-input GRAND by ascending Hamming weight, abandoning past ``max_hw`` flips."""
    if max_hw < 0:
        raise ValueError("max_hw must be >= 0")
    bits = np.array(hard_bits, dtype=np.uint8, copy=True)
    s0 = syndrome_mask(code, bits)
    flips = np.zeros(max(max_hw, 1), dtype=np.int64)
    h, q = _kernels.hamming_order_search(s0, code.column_masks, max_hw, flips)
    if h < 0:
        return DecodeResult(Status.ABANDONED, q_main=q, q_total=q)
    bits[flips[:h]] ^= 1
    return DecodeResult(Status.FOUND_SINGLE, bits, None, q, q)


def candidate_ordering(result: DecodeResult, y) -> DecodeResult:
    """Swap the pair when the competitor is strictly closer to HD(y)."""
    if result.status is not Status.FOUND_PAIR:
        return result
    if metric(result.x_hat, y) > metric(result.x_hat_c, y):
        return replace(result, x_hat=result.x_hat_c, x_hat_c=result.x_hat)
    return result
