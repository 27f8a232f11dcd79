"""Monte-Carlo sweeps over Eb/N0 and CSV output.

Every frame draws its message block and noise from a generator seeded by
``(seed, snr index, frame index)``, and all statistics are integer tallies, so
the result of a sweep does not depend on the worker count.
"""

from __future__ import annotations

import csv
import logging
import multiprocessing as mp
from dataclasses import dataclass, field, fields
from typing import Dict, Iterable, List, Optional, Sequence

from .channel import NoiseConfig, frame_rng, modulate, noiseless_llrs, quantize, transmit
from .codes import LinearCode, get_code
from .patterns import pattern_cache
from .pipeline import IterationPolicy, PipelineStats, decode_iterative, encode_product
from .soft import ScalingProfile

log = logging.getLogger(__name__)

CSV_COLUMNS = (
    "ebn0_db",
    "iteration",
    "ber",
    "avg_q_main",
    "avg_q_total",
    "competitor_rate",
    "frames",
    "frame_errors",
)


@dataclass
class SimConfig:
    code: str = "ext_hamming_32_26"
    ebn0_list: Sequence[float] = (5.0,)
    policy: IterationPolicy = field(default_factory=IterationPolicy)
    quantizer_step: float = 1.0
    max_frames: int = 100
    min_frame_errors: int = 10
    seed: int = 0
    workers: int = 1
    output_path: Optional[str] = None
    # replace the channel by noiseless LLRs (sanity runs)
    noiseless: bool = False

    def __post_init__(self):
        self.ebn0_list = tuple(float(e) for e in self.ebn0_list)
        if not self.ebn0_list:
            raise ValueError("ebn0_list must not be empty")
        if self.min_frame_errors < 1 or self.max_frames < 1:
            raise ValueError("min_frame_errors and max_frames must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.quantizer_step <= 0:
            raise ValueError("quantizer_step must be positive")


@dataclass(frozen=True)
class ResultRow:
    ebn0_db: float
    iteration: int
    ber: float
    avg_q_main: float
    avg_q_total: float
    competitor_rate: float
    frames: int
    frame_errors: int


def simulate_frame(
    code: LinearCode,
    policy: IterationPolicy,
    ebn0_db: float,
    seed: int,
    snr_index: int,
    frame_index: int,
    quantizer_step: float = 1.0,
    noiseless: bool = False,
) -> PipelineStats:
    rng = frame_rng(seed, snr_index, frame_index)
    block = encode_product(rng.integers(0, 2, (code.k, code.k)), code)
    cfg = NoiseConfig(ebn0_db, code.rate**2, seed)
    symbols = modulate(block.bits)
    y = noiseless_llrs(symbols, cfg) if noiseless else transmit(symbols, cfg, rng=rng)
    block.llrs = quantize(y, quantizer_step).dequantize()
    _, stats = decode_iterative(block, policy, code)
    return stats


# worker-process state, set once by the pool initializer
_worker: Dict[str, object] = {}


def _init_worker(cfg: SimConfig) -> None:
    _worker["cfg"] = cfg
    _worker["code"] = get_code(cfg.code)


def _frame_task(args) -> PipelineStats:
    snr_index, ebn0, frame_index = args
    cfg: SimConfig = _worker["cfg"]
    return simulate_frame(
        _worker["code"], cfg.policy, ebn0, cfg.seed, snr_index, frame_index,
        cfg.quantizer_step, cfg.noiseless,
    )


def _warm_caches(code: LinearCode, policy: IterationPolicy) -> None:
    """Fill the pattern caches before forking so workers share them."""
    need: Dict[object, int] = {}
    for i in range(policy.n_siso):
        b = policy.budget(i)
        total = b.q_max_c if policy.find_competitor else b.q_max
        need[policy.schedule[i]] = max(need.get(policy.schedule[i], 0), total)
    for kind, count in need.items():
        pattern_cache(kind, code.n, count)


def simulate_point(
    cfg: SimConfig, ebn0_db: float, snr_index: int = 0, pool=None
) -> PipelineStats:
    """Decode frames until ``min_frame_errors`` final-iteration frame errors or ``max_frames``.

    Frames are consumed in index order and the run stops at the exact frame
    where the stopping rule fires, whatever the batching.
    """
    total = PipelineStats.empty(cfg.policy.n_iterations)
    batch = 1 if pool is None else 2 * cfg.workers
    start = 0
    while start < cfg.max_frames:
        idx = range(start, min(start + batch, cfg.max_frames))
        tasks = [(snr_index, ebn0_db, f) for f in idx]
        if pool is None:
            _init_worker(cfg)
            results = map(_frame_task, tasks)
        else:
            results = pool.map(_frame_task, tasks)
        for st in results:
            total = total + st
            if total.final.frame_errors >= cfg.min_frame_errors:
                return total
        start = idx.stop
    return total


def stats_to_rows(ebn0_db: float, stats: PipelineStats) -> List[ResultRow]:
    return [
        ResultRow(
            ebn0_db=float(ebn0_db),
            iteration=i,
            ber=s.ber_out,
            avg_q_main=s.avg_q_main,
            avg_q_total=s.avg_q_total,
            competitor_rate=s.competitor_rate,
            frames=s.frames,
            frame_errors=s.frame_errors,
        )
        for i, s in enumerate(stats.iterations)
    ]


def run_sweep(cfg: SimConfig, return_stats: bool = False):
    """One ``ResultRow`` per (Eb/N0, iteration), ordered by Eb/N0 then iteration.

    Writes the CSV too when ``cfg.output_path`` is set. With ``return_stats``
    the per-point ``PipelineStats`` come back as a second value.
    """
    code = get_code(cfg.code)
    _warm_caches(code, cfg.policy)
    pool = None
    if cfg.workers > 1:
        ctx = mp.get_context("fork")
        pool = ctx.Pool(cfg.workers, initializer=_init_worker, initargs=(cfg,))
    rows: List[ResultRow] = []
    all_stats = []
    try:
        for s_idx, ebn0 in enumerate(cfg.ebn0_list):
            stats = simulate_point(cfg, ebn0, s_idx, pool)
            all_stats.append(stats)
            log.info(
                "Eb/N0 %.3f dB: %d frames, final BER %.3e",
                ebn0, stats.final.frames, stats.final.ber_out,
            )
            rows.extend(stats_to_rows(ebn0, stats))
    finally:
        if pool is not None:
            pool.close()
            pool.join()
    if cfg.output_path:
        emit_csv(rows, cfg.output_path)
    return (rows, all_stats) if return_stats else rows


def _format_row(r: ResultRow) -> List[str]:
    return [
        repr(float(r.ebn0_db)),
        str(int(r.iteration)),
        f"{r.ber:.5e}",
        repr(float(r.avg_q_main)),
        repr(float(r.avg_q_total)),
        repr(float(r.competitor_rate)),
        str(int(r.frames)),
        str(int(r.frame_errors)),
    ]


def emit_csv(rows: Iterable[ResultRow], path: str) -> None:
    """Header plus one line per row; BER in 6-significant-digit scientific notation."""
    with open(path, "w", newline="", encoding="ascii") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow(_format_row(r))


def read_csv(path: str) -> List[ResultRow]:
    with open(path, newline="", encoding="ascii") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        return [
            ResultRow(
                float(d["ebn0_db"]), int(d["iteration"]), float(d["ber"]),
                float(d["avg_q_main"]), float(d["avg_q_total"]),
                float(d["competitor_rate"]), int(d["frames"]), int(d["frame_errors"]),
            )
            for d in reader
        ]


# --------------------------------------------------------------------------
# flat key = value config files
# --------------------------------------------------------------------------


def parse_number(text: str) -> float:
    """Numbers such as ``8192``, ``2^13`` or ``1.25*2^15``."""
    value = 1.0
    for factor in str(text).strip().split("*"):
        factor = factor.strip()
        if "^" in factor:
            base, exp = factor.split("^", 1)
            value *= float(base) ** float(exp)
        else:
            value *= float(factor)
    return value


def parse_int(text: str) -> int:
    v = parse_number(text)
    if v != int(v):
        raise ValueError(f"{text!r} is not an integer")
    return int(v)


def parse_bool(text) -> bool:
    if isinstance(text, bool):
        return text
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _split(text: str) -> List[str]:
    return [t for t in (s.strip() for s in str(text).split(",")) if t]


_POLICY_LISTS = {
    "schedule": str,
    "q_max": parse_int,
    "q_max_c": parse_int,
    "et_enabled": parse_bool,
}
_POLICY_SCALARS = {
    "n_siso": parse_int,
    "n_hiho": parse_int,
    "hiho_max_hw": parse_int,
    "find_competitor": parse_bool,
    "requantize": parse_bool,
    "requantize_step": parse_number,
    "nonincreasing_budgets": parse_bool,
}
_SCALING = ("alpha", "beta", "gamma")
_SIM = {
    "code": str,
    "ebn0_list": lambda t: tuple(parse_number(v) for v in _split(t)),
    "quantizer_step": parse_number,
    "max_frames": parse_int,
    "min_frame_errors": parse_int,
    "seed": parse_int,
    "workers": parse_int,
    "output_path": str,
    "noiseless": parse_bool,
}


def parse_config_text(text: str) -> Dict[str, str]:
    out: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = value
    return out


def config_from_mapping(values: Dict[str, str]) -> SimConfig:
    """Build a ``SimConfig`` from string values keyed by field name."""
    known = set(_SIM) | set(_POLICY_LISTS) | set(_POLICY_SCALARS) | set(_SCALING)
    unknown = set(values) - known
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
    sim = {k: conv(values[k]) for k, conv in _SIM.items() if k in values}
    pol = {k: tuple(conv(v) for v in _split(values[k])) for k, conv in _POLICY_LISTS.items() if k in values}
    pol.update({k: conv(values[k]) for k, conv in _POLICY_SCALARS.items() if k in values})
    default = ScalingProfile()
    scaling = {
        k: tuple(parse_number(v) for v in _split(values[k])) if k in values else getattr(default, k)
        for k in _SCALING
    }
    pol["scaling"] = ScalingProfile(**scaling)
    return SimConfig(policy=IterationPolicy(**pol), **sim)


def load_config(path: str) -> SimConfig:
    with open(path, encoding="utf-8") as fh:
        return config_from_mapping(parse_config_text(fh.read()))


def config_to_text(cfg: SimConfig) -> str:
    p = cfg.policy
    lines = {
        "code": cfg.code,
        "ebn0_list": ", ".join(repr(e) for e in cfg.ebn0_list),
        "quantizer_step": repr(cfg.quantizer_step),
        "max_frames": cfg.max_frames,
        "min_frame_errors": cfg.min_frame_errors,
        "seed": cfg.seed,
        "workers": cfg.workers,
        "noiseless": str(cfg.noiseless).lower(),
        "schedule": ", ".join(k.value for k in p.schedule),
        "q_max": ", ".join(map(str, p.q_max)),
        "q_max_c": ", ".join(map(str, p.q_max_c)),
        "et_enabled": ", ".join(str(b).lower() for b in p.et_enabled),
        "alpha": ", ".join(map(repr, p.scaling.alpha)),
        "beta": ", ".join(map(repr, p.scaling.beta)),
        "gamma": ", ".join(map(repr, p.scaling.gamma)),
    }
    for f in fields(p):
        if f.name in _POLICY_SCALARS:
            v = getattr(p, f.name)
            lines[f.name] = str(v).lower() if isinstance(v, bool) else v
    if cfg.output_path:
        lines["output_path"] = cfg.output_path
    return "".join(f"{k} = {v}\n" for k, v in lines.items())
