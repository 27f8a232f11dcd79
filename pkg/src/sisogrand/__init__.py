"""Soft-input soft-output ORBGRAND decoding of product codes, with the OFEC
extended BCH(256, 239) component code and a Monte-Carlo harness."""

from .channel import NoiseConfig, hard_decision, modulate, quantize, transmit
from .codes import (
    BUILTIN_CODES,
    GaloisField256,
    LinearCode,
    build_ofec_component_code,
    encode,
    get_code,
    gf_multiply,
    load_code_from_file,
    syndrome,
)
from .grand import (
    DecodeBudget,
    DecodeResult,
    Status,
    candidate_ordering,
    grandab_decode,
    orbgrand_decode,
    siso_search,
)
from .patterns import ErrorPattern, PatternGenerator, ScheduleKind, improved_weight, logistic_weight
from .pipeline import IterationPolicy, PipelineStats, decode_iterative, encode_product
from .sim import ResultRow, SimConfig, emit_csv, run_sweep
from .soft import ScalingProfile

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_CODES",
    "DecodeBudget",
    "DecodeResult",
    "ErrorPattern",
    "GaloisField256",
    "IterationPolicy",
    "LinearCode",
    "NoiseConfig",
    "PatternGenerator",
    "PipelineStats",
    "ResultRow",
    "ScalingProfile",
    "ScheduleKind",
    "SimConfig",
    "Status",
    "build_ofec_component_code",
    "candidate_ordering",
    "decode_iterative",
    "emit_csv",
    "encode",
    "encode_product",
    "get_code",
    "gf_multiply",
    "grandab_decode",
    "hard_decision",
    "improved_weight",
    "load_code_from_file",
    "logistic_weight",
    "modulate",
    "orbgrand_decode",
    "quantize",
    "run_sweep",
    "siso_search",
    "syndrome",
    "transmit",
]
