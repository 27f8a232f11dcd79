"""Command-line front end for Monte-Carlo sweeps.

    sisogrand --config run.cfg --snr 3.8,3.9,4.0 --qmax 2=4096 --out ber.csv
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import List, Optional

from .codes import get_code
from .patterns import ScheduleKind
from .sim import (
    CSV_COLUMNS,
    _format_row,
    config_from_mapping,
    parse_bool,
    parse_config_text,
    parse_int,
    run_sweep,
)


def _indexed(text: str):
    try:
        i, value = text.split("=", 1)
        return int(i), value.strip()
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected ITER=VALUE, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sisogrand",
        description="Iterative SISO ORBGRAND product-code simulation; writes BER/query CSV.",
    )
    p.add_argument("--config", metavar="PATH", help="key = value config file")
    p.add_argument("--snr", metavar="LIST", help="comma-separated Eb/N0 values in dB")
    p.add_argument("--seed", type=int)
    p.add_argument("--frames", type=int, help="maximum frames (blocks) per Eb/N0 point")
    p.add_argument("--min-errors", type=int, help="stop a point after this many frame errors")
    p.add_argument("--workers", type=int)
    p.add_argument("--out", metavar="PATH", help="CSV output path (default: stdout)")
    p.add_argument("--code", help="built-in code name or parity-check file")
    p.add_argument("--step", type=float, help="LLR quantizer step")
    p.add_argument("--noiseless", action="store_true", help="skip the noise (sanity check)")
    p.add_argument("--schedule", action="append", type=_indexed, default=[], metavar="i=KIND")
    p.add_argument("--qmax", action="append", type=_indexed, default=[], metavar="i=N")
    p.add_argument("--qmaxc", action="append", type=_indexed, default=[], metavar="i=N")
    p.add_argument("--et", action="append", type=_indexed, default=[], metavar="i=BOOL")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def make_config(args: argparse.Namespace):
    values = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            values = parse_config_text(fh.read())
    for key, attr in (
        ("ebn0_list", "snr"),
        ("seed", "seed"),
        ("max_frames", "frames"),
        ("min_frame_errors", "min_errors"),
        ("workers", "workers"),
        ("output_path", "out"),
        ("code", "code"),
        ("quantizer_step", "step"),
    ):
        v = getattr(args, attr)
        if v is not None:
            values[key] = str(v)
    if args.noiseless:
        values["noiseless"] = "true"
    cfg = config_from_mapping(values)

    pol = cfg.policy
    changes = {}
    for flag, name, conv in (
        ("schedule", "schedule", ScheduleKind.parse),
        ("qmax", "q_max", parse_int),
        ("qmaxc", "q_max_c", parse_int),
        ("et", "et_enabled", parse_bool),
    ):
        items = getattr(args, flag)
        if not items:
            continue
        seq = list(getattr(pol, name))
        for i, value in items:
            if not 0 <= i < pol.n_siso:
                raise SystemExit(f"--{flag}: iteration {i} out of range 0..{pol.n_siso - 1}")
            seq[i] = conv(value)
        changes[name] = tuple(seq)
    if changes:
        cfg.policy = pol.replace(**changes)
    return cfg


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(message)s",
    )
    try:
        cfg = make_config(args)
        get_code(cfg.code)
    except (OSError, ValueError) as exc:
        print(f"sisogrand: {exc}", file=sys.stderr)
        return 2
    rows = run_sweep(cfg)
    if not cfg.output_path:
        print(",".join(CSV_COLUMNS))
        for r in rows:
            print(",".join(_format_row(r)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
