"""Soft output of the SISO decoder.

Given the decoder input ``y_in`` of iteration ``i`` (the previous soft output, or
the channel LLRs at ``i = 0``), a best candidate ``x_hat`` and possibly a
competitor ``x_hat_c``:

* metric      ``M = 2 * sum |y_in_j|`` over bits where the candidate disagrees with HD(y_in)
* delta       ``(M_c - M) / 2``
* extrinsic   ``gamma_i * delta * s_j``           where the candidates agree,
              ``delta * s_j - y_in_j``            where they differ,
              ``beta_i * s_j``                    with no competitor,
  with ``s_j = 1 - 2 x_hat_j``
* soft output ``y_j + alpha_i * eps_j`` on the original channel LLRs ``y``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .channel import hard_decision


@dataclass(frozen=True)
class ScalingProfile:
    """Per-iteration scaling factors. The defaults are placeholders, not tuned values."""

    alpha: Sequence[float] = (0.3, 0.5, 0.7)
    beta: Sequence[float] = (0.2, 0.4, 0.6)
    gamma: Sequence[float] = (0.5, 0.5, 0.5)

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            vals = tuple(float(v) for v in getattr(self, name))
            if not vals or not np.all(np.isfinite(vals)):
                raise ValueError(f"{name} must be a nonempty sequence of finite numbers")
            object.__setattr__(self, name, vals)

    @property
    def iterations(self) -> int:
        return min(len(self.alpha), len(self.beta), len(self.gamma))

    def at(self, i: int):
        """``(alpha, beta, gamma)`` for iteration ``i``."""
        if i >= self.iterations:
            raise IndexError(f"scaling profile covers {self.iterations} iterations, asked for {i}")
        return self.alpha[i], self.beta[i], self.gamma[i]


def metric(candidate, y_in) -> float:
    y = np.asarray(y_in, dtype=np.float64)
    x = np.asarray(candidate, dtype=np.uint8)
    if x.shape != y.shape:
        raise ValueError("candidate and LLR vector lengths differ")
    return float(2.0 * np.abs(y[x != hard_decision(y)]).sum())


def delta(m: float, m_c: float) -> float:
    return (m_c - m) / 2.0


def extrinsic(
    x_hat,
    x_hat_c: Optional[np.ndarray],
    d: float,
    y_in,
    i: int,
    prof: ScalingProfile,
) -> np.ndarray:
    _, beta, gamma = prof.at(i)
    sign = 1.0 - 2.0 * np.asarray(x_hat, dtype=np.float64)
    if x_hat_c is None:
        return beta * sign
    y = np.asarray(y_in, dtype=np.float64)
    agree = np.asarray(x_hat) == np.asarray(x_hat_c)
    return np.where(agree, gamma * d * sign, d * sign - y)


def soft_output(y_channel, eps, i: int, prof: ScalingProfile) -> np.ndarray:
    alpha = prof.at(i)[0]
    y = np.asarray(y_channel, dtype=np.float64)
    e = np.asarray(eps, dtype=np.float64)
    if y.shape != e.shape:
        raise ValueError("channel and extrinsic vector lengths differ")
    return y + alpha * e
