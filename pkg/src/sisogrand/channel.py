"""BPSK over AWGN, LLR computation and the 4-bit LLR quantizer.

Positive LLR favours bit 0 (0 -> +1, 1 -> -1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import erfc

QMIN, QMAX = -8, 7


@dataclass(frozen=True)
class NoiseConfig:
    ebn0_db: float
    code_rate: float
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.code_rate <= 1.0:
            raise ValueError(f"code_rate must be in (0, 1], got {self.code_rate}")

    @property
    def sigma2(self) -> float:
        """Per-dimension noise variance for unit-energy symbols."""
        return 1.0 / (2.0 * self.code_rate * 10.0 ** (self.ebn0_db / 10.0))


@dataclass(frozen=True)
class QuantizedLlrVector:
    values: np.ndarray
    step: float

    def dequantize(self) -> np.ndarray:
        return self.values.astype(np.float64) * self.step


def frame_rng(seed: int, *stream) -> np.random.Generator:
    """Independent generator for a (seed, snr index, frame index, ...) tuple."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, stream)]))


def modulate(bits) -> np.ndarray:
    return 1.0 - 2.0 * np.asarray(bits, dtype=np.float64)


def transmit(
    symbols, cfg: NoiseConfig, rng: Optional[np.random.Generator] = None
) -> np.ndarray:
    """Add N(0, sigma^2) noise and return channel LLRs ``2 (s + n) / sigma^2``.

    Without ``rng`` the noise comes from ``cfg.seed`` so repeated calls match.
    """
    s = np.asarray(symbols, dtype=np.float64)
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    sigma2 = cfg.sigma2
    noise = rng.standard_normal(s.shape) * np.sqrt(sigma2)
    return 2.0 * (s + noise) / sigma2


def noiseless_llrs(symbols, cfg: NoiseConfig) -> np.ndarray:
    return 2.0 * np.asarray(symbols, dtype=np.float64) / cfg.sigma2


def quantize(y, step: float = 1.0) -> QuantizedLlrVector:
    """Uniform mid-tread quantizer, round half away from zero, clamped to [-8, 7]."""
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    r = np.asarray(y, dtype=np.float64) / step
    q = np.sign(r) * np.floor(np.abs(r) + 0.5)
    return QuantizedLlrVector(np.clip(q, QMIN, QMAX).astype(np.int8), float(step))


def hard_decision(y) -> np.ndarray:
    """Bit 1 where the LLR is negative; zero LLRs decide 0."""
    return (np.asarray(y) < 0).astype(np.uint8)


def theoretical_bpsk_ber(ebn0_db: float, code_rate: float = 1.0) -> float:
    """Q(sqrt(2 R Eb/N0)), the raw channel bit error probability."""
    x = np.sqrt(2.0 * code_rate * 10.0 ** (ebn0_db / 10.0))
    return float(0.5 * erfc(x / np.sqrt(2.0)))
