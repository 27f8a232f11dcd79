"""Iterative decoding of a square product code built from one component code.

Each SISO iteration is a row pass followed by a column pass. Both passes of
iteration ``i`` use schedule ``i``, budget ``i`` and scaling factors ``i``,
and each pass feeds its soft output to the next. The SISO iterations are
followed by hard-input GRANDAB passes (rows, then columns).
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .channel import hard_decision, quantize
from .codes import LinearCode
from .grand import (
    DecodeBudget,
    DecodeResult,
    Status,
    candidate_ordering,
    grandab_decode,
    siso_search,
)
from .patterns import ScheduleKind
from .soft import ScalingProfile, delta, extrinsic, metric, soft_output


@dataclass
class ProductBlock:
    """Transmitted bits and received LLRs of one ``n x n`` product-code block."""

    bits: np.ndarray
    llrs: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        return self.bits.shape[0]


def _tuple(values, kind=None):
    if isinstance(values, (str, bytes)) or not isinstance(values, Sequence):
        values = (values,)
    return tuple(kind(v) if kind else v for v in values)


@dataclass(frozen=True)
class IterationPolicy:
    """How each SISO iteration searches, and how many iterations of each kind run.

    Per-iteration sequences shorter than ``n_siso`` repeat their last entry.
    ``find_competitor=False`` never looks for a competitor, so every found
    candidate gets the no-competitor extrinsic. ``nonincreasing_budgets``
    asks for the budgets to shrink (weakly) from one iteration to the next.
    """

    schedule: Tuple[ScheduleKind, ...] = (ScheduleKind.LWO, ScheduleKind.ILWO, ScheduleKind.ILWO)
    q_max: Tuple[int, ...] = (1 << 13,)
    q_max_c: Tuple[int, ...] = (1 << 16,)
    et_enabled: Tuple[bool, ...] = (True,)
    scaling: ScalingProfile = field(default_factory=ScalingProfile)
    n_siso: int = 3
    n_hiho: int = 2
    hiho_max_hw: int = 2
    find_competitor: bool = True
    requantize: bool = False
    requantize_step: float = 1.0
    nonincreasing_budgets: bool = False

    def __post_init__(self):
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        set_("schedule", self._extend(_tuple(self.schedule, ScheduleKind.parse), "schedule"))
        set_("q_max", self._extend(_tuple(self.q_max, int), "q_max"))
        set_("q_max_c", self._extend(_tuple(self.q_max_c, int), "q_max_c"))
        set_("et_enabled", self._extend(_tuple(self.et_enabled, bool), "et_enabled"))
        if self.n_siso < 0 or self.n_hiho < 0 or self.hiho_max_hw < 0:
            raise ValueError("iteration counts and hiho_max_hw must be nonnegative")
        if self.scaling.iterations < self.n_siso:
            raise ValueError(
                f"scaling profile covers {self.scaling.iterations} iterations, need {self.n_siso}"
            )
        for i in range(self.n_siso):
            self.budget(i)
        if self.nonincreasing_budgets:
            for i in range(self.n_siso - 1):
                if self.q_max[i] < self.q_max[i + 1] or self.q_max_c[i] < self.q_max_c[i + 1]:
                    raise ValueError(f"budgets increase from iteration {i} to {i + 1}")

    def _extend(self, values: tuple, name: str) -> tuple:
        if not values:
            raise ValueError(f"{name} needs at least one entry")
        n = max(self.n_siso, 1)
        return values[:n] + (values[-1],) * (n - len(values))

    def budget(self, i: int) -> DecodeBudget:
        return DecodeBudget(self.q_max[i], self.q_max_c[i], self.et_enabled[i])

    @property
    def n_iterations(self) -> int:
        return self.n_siso + self.n_hiho

    def replace(self, **changes) -> "IterationPolicy":
        kw = {f.name: getattr(self, f.name) for f in fields(self)}
        kw.update(changes)
        return IterationPolicy(**kw)


@dataclass
class IterationStats:
    """Integer tallies for one iteration; merging is plain addition."""

    decodes: int = 0
    q_main: int = 0
    q_total: int = 0
    pairs: int = 0
    bit_errors: int = 0
    bits: int = 0
    frames: int = 0
    frame_errors: int = 0
    # sum over frames of (bit errors in the frame)^2, for standard errors
    bit_errors_sq: int = 0

    def __add__(self, other: "IterationStats") -> "IterationStats":
        return IterationStats(*(getattr(self, f.name) + getattr(other, f.name) for f in fields(self)))

    def count(self, r: DecodeResult) -> None:
        self.decodes += 1
        self.q_main += r.q_main
        self.q_total += r.q_total
        self.pairs += r.status is Status.FOUND_PAIR

    @property
    def avg_q_main(self) -> float:
        return self.q_main / self.decodes if self.decodes else 0.0

    @property
    def avg_q_total(self) -> float:
        return self.q_total / self.decodes if self.decodes else 0.0

    @property
    def competitor_rate(self) -> float:
        return self.pairs / self.decodes if self.decodes else 0.0

    @property
    def ber_out(self) -> float:
        return self.bit_errors / self.bits if self.bits else 0.0

    @property
    def ber_stderr(self) -> float:
        """Standard error of ``ber_out``, treating frames as the i.i.d. unit."""
        f = self.frames
        if f < 2:
            return 0.0
        per_frame = self.bits / f
        mean = self.bit_errors / f
        var = max(self.bit_errors_sq / f - mean * mean, 0.0) * f / (f - 1)
        return float(np.sqrt(var / f) / per_frame)


@dataclass
class PipelineStats:
    iterations: List[IterationStats]

    @classmethod
    def empty(cls, n_iterations: int) -> "PipelineStats":
        return cls([IterationStats() for _ in range(n_iterations)])

    def __add__(self, other: "PipelineStats") -> "PipelineStats":
        if len(self.iterations) != len(other.iterations):
            raise ValueError("cannot merge stats with different iteration counts")
        return PipelineStats([a + b for a, b in zip(self.iterations, other.iterations)])

    def __getitem__(self, i: int) -> IterationStats:
        return self.iterations[i]

    @property
    def final(self) -> IterationStats:
        return self.iterations[-1]


def encode_product(messages, code: LinearCode) -> ProductBlock:
    """Encode the ``k x k`` message rows, then every column of the result."""
    M = np.asarray(messages, dtype=np.int64)
    if M.shape != (code.k, code.k):
        raise ValueError(f"messages must be {code.k}x{code.k}")
    G = code.generator_matrix.astype(np.int64)
    rows = (M @ G) & 1
    block = (G.T @ rows) & 1
    return ProductBlock(block.astype(np.uint8))


def handle_abandonment(y_in, result: DecodeResult, i: int, prof: ScalingProfile) -> np.ndarray:
    """Abandoned decodes pass their input through untouched."""
    return np.array(y_in, dtype=np.float64, copy=True)


def siso_line(
    y_in, y_channel, code: LinearCode, policy: IterationPolicy, i: int
) -> Tuple[np.ndarray, DecodeResult]:
    """Decode one row or column and return its soft output."""
    res = siso_search(
        y_in, code, policy.schedule[i], policy.budget(i), find_competitor=policy.find_competitor
    )
    if res.status is Status.ABANDONED:
        return handle_abandonment(y_in, res, i, policy.scaling), res
    res = candidate_ordering(res, y_in)
    d = 0.0
    if res.x_hat_c is not None:
        d = delta(metric(res.x_hat, y_in), metric(res.x_hat_c, y_in))
    eps = extrinsic(res.x_hat, res.x_hat_c, d, y_in, i, policy.scaling)
    return soft_output(y_channel, eps, i, policy.scaling), res


def _count_errors(st: IterationStats, bits: np.ndarray, ref: np.ndarray, info: np.ndarray) -> None:
    wrong = int((bits[np.ix_(info, info)] != ref[np.ix_(info, info)]).sum())
    st.bit_errors += wrong
    st.bit_errors_sq += wrong * wrong
    st.bits += info.size * info.size
    st.frames += 1
    st.frame_errors += wrong > 0


def decode_iterative(
    block: ProductBlock, policy: IterationPolicy, code: LinearCode
) -> Tuple[np.ndarray, PipelineStats]:
    """Run every SISO and HIHO iteration over ``block.llrs``.

    Error counts are against ``block.bits`` on the information sub-block.
    """
    n = code.n
    if block.llrs is None or block.llrs.shape != (n, n):
        raise ValueError(f"block needs an {n}x{n} LLR matrix")
    info = np.asarray(code.info_positions)
    y_ch = np.asarray(block.llrs, dtype=np.float64)
    stats = PipelineStats.empty(policy.n_iterations)

    Y = y_ch
    for i in range(policy.n_siso):
        st = stats[i]
        for axis in (0, 1):
            Yin = Y if axis == 0 else Y.T
            Ych = y_ch if axis == 0 else y_ch.T
            out = np.empty_like(Yin)
            for j in range(n):
                out[j], res = siso_line(Yin[j], Ych[j], code, policy, i)
                st.count(res)
            Y = out if axis == 0 else out.T
            if policy.requantize:
                Y = quantize(Y, policy.requantize_step).dequantize()
        _count_errors(st, hard_decision(Y), block.bits, info)

    bits = hard_decision(Y)
    for h in range(policy.n_hiho):
        st = stats[policy.n_siso + h]
        for view in (bits, bits.T):
            for j in range(n):
                res = grandab_decode(view[j], code, policy.hiho_max_hw)
                if res.found:
                    view[j] = res.x_hat
                st.count(res)
        _count_errors(st, bits, block.bits, info)
    return bits, stats


def unsatisfied_checks(bits: np.ndarray, code: LinearCode) -> int:
    """Rows plus columns of the block that are not codewords."""
    H = code.parity_check_matrix.astype(np.int64)
    b = bits.astype(np.int64)
    rows = ((b @ H.T) & 1).any(axis=1).sum()
    cols = ((b.T @ H.T) & 1).any(axis=1).sum()
    return int(rows + cols)
