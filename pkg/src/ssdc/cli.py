"""Command-line interface.

Subcommands: train, compress, decompress, bench, sweep-bits,
sweep-threshold, diagnostics.  Corpus arguments accept either a path to an
LF-delimited text file or the literal ``synthetic[:MIB[:SEED]]`` to use
the built-in deterministic generator (so every command runs without
external datasets).

Exit status: 0 on success, 1 with a diagnostic on any error, including
benchmark verification failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import (QueryWorkload, emit_diagnostics, run_benchmark,
                    sweep_bits, sweep_threshold)
from .codec import CompressedColumn, compress_column, compression_ratio
from .codec import decompress_all
from .corpus import MIB, load_lines, synthetic_text_corpus
from .dictionary import Dictionary, max_entry_len_for
from .errors import SsdcError
from .lpm import parsing_matcher
from .trainer import TrainerConfig, train


def _load_corpus(source: str, limit_bytes: int | None):
    if source == "synthetic" or source.startswith("synthetic:"):
        parts = source.split(":")
        mib = float(parts[1]) if len(parts) > 1 else 4.0
        seed = int(parts[2]) if len(parts) > 2 else 2024
        return synthetic_text_corpus(int(mib * MIB), seed, name=source)
    return load_lines(source, limit_bytes)


def _trainer_config(args) -> TrainerConfig:
    return TrainerConfig(bits_per_token=args.bits,
                         max_entry_len=max_entry_len_for(args.variant),
                         threshold_override=args.threshold,
                         sample_cap_bytes=args.sample_bytes,
                         rng_seed=args.seed)


def _out_dir(args) -> Path | None:
    if args.out_dir is None:
        return None
    p = Path(args.out_dir)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _write_rows_csv(path: Path, rows: list[dict]) -> None:
    import csv
    with open(path, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_train(args) -> int:
    corpus = _load_corpus(args.input, args.limit_bytes)
    d, _matcher, report = train(corpus, _trainer_config(args))
    d.save(args.dict_out)
    foot = d.memory_footprint()
    print(report.as_text())
    print(f"entry_count={d.entry_count}")
    print(f"dict_data_bytes={foot['data_bytes']}")
    print(f"dict_total_bytes={foot['total_bytes']}")
    print(f"dict_path={args.dict_out}")
    return 0


def cmd_compress(args) -> int:
    corpus = _load_corpus(args.input, args.limit_bytes)
    d = Dictionary.load(args.dict)
    matcher = parsing_matcher(d)
    column = compress_column(matcher, d, corpus.strings)
    column.save(args.out)
    raw = corpus.total_bytes
    print(f"raw_bytes={raw}")
    print(f"n_strings={corpus.rows}")
    print(f"token_count={column.token_count}")
    print(f"stream_bytes={column.stream_bytes(d.bits_per_token)}")
    print(f"dict_total_bytes={d.memory_footprint()['total_bytes']}")
    print(f"compression_ratio={compression_ratio(raw, column, d):.4f}")
    print(f"avg_token_len={raw / column.token_count if column.token_count else 0.0:.3f}")
    print(f"column_path={args.out}")
    return 0


def cmd_decompress(args) -> int:
    d = Dictionary.load(args.dict)
    column = CompressedColumn.load(args.column, d)
    blob, bounds = decompress_all(d, column)
    with open(args.out, "wb") as f:
        for i in range(len(bounds) - 1):
            f.write(blob[bounds[i]:bounds[i + 1]])
            f.write(b"\n")
    print(f"n_strings={len(bounds) - 1}")
    print(f"raw_bytes={len(blob)}")
    print(f"output_path={args.out}")
    return 0


def cmd_bench(args) -> int:
    corpus = _load_corpus(args.input, args.limit_bytes)
    result = run_benchmark(corpus, args.variant,
                           bits_per_token=args.bits,
                           threshold=args.threshold,
                           sample_cap_bytes=args.sample_bytes,
                           seed=args.seed,
                           workload=QueryWorkload(args.queries),
                           reps=args.reps)
    print(result.table())
    out = _out_dir(args)
    if out is not None:
        row = result.as_dict()
        _write_rows_csv(out / "bench.csv", [row])
        with open(out / "bench.jsonl", "w") as f:
            f.write(json.dumps(row) + "\n")
        print(f"wrote {out / 'bench.csv'} and {out / 'bench.jsonl'}")
    return 0


def cmd_sweep_bits(args) -> int:
    corpus = _load_corpus(args.input, args.limit_bytes)
    results = sweep_bits(corpus, range(args.bits_min, args.bits_max + 1),
                         args.variant, seed=args.seed, reps=args.reps,
                         workload=QueryWorkload(args.queries))
    header = (f"{'bits':>4} {'entries':>8} {'ratio':>7} {'tok_len':>8} "
              f"{'parse_mib_s':>12} {'decomp_mib_s':>13}")
    print(header)
    for r in results:
        print(f"{r.bits_per_token:>4} {r.entry_count:>8} "
              f"{r.compression_ratio:>7.3f} {r.avg_token_len:>8.3f} "
              f"{r.parse_mib_s:>12.2f} {r.decompress_mib_s:>13.2f}")
    out = _out_dir(args)
    if out is not None:
        _write_rows_csv(out / "sweep_bits.csv", [r.as_dict() for r in results])
        print(f"wrote {out / 'sweep_bits.csv'}")
    return 0


def cmd_sweep_threshold(args) -> int:
    corpus = _load_corpus(args.input, args.limit_bytes)
    rows = sweep_threshold(corpus, range(args.t_min, args.t_max + 1),
                           args.variant, bits_per_token=args.bits,
                           sample_cap_bytes=args.sample_bytes, seed=args.seed)
    print(f"{'threshold':>9} {'ratio':>7} {'bytes_consumed':>14} "
          f"{'tokens_created':>14} stop_reason")
    for r in rows:
        print(f"{r.threshold:>9} {r.compression_ratio:>7.3f} "
              f"{r.bytes_consumed:>14} {r.tokens_created:>14} {r.stop_reason}")
    out = _out_dir(args)
    if out is not None:
        from dataclasses import asdict
        _write_rows_csv(out / "sweep_threshold.csv", [asdict(r) for r in rows])
        print(f"wrote {out / 'sweep_threshold.csv'}")
    return 0


def cmd_diagnostics(args) -> int:
    corpus = _load_corpus(args.input, args.limit_bytes)
    d, matcher, report = train(corpus, _trainer_config(args))
    column = compress_column(parsing_matcher(d), d, corpus.strings)
    out = _out_dir(args) or Path("ssdc-diagnostics")
    out.mkdir(parents=True, exist_ok=True)
    paths = emit_diagnostics(d, column, out)
    print(report.as_text())
    for name, path in paths.items():
        print(f"{name}={path}")
    return 0


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------

def _add_trainer_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--variant", choices=["unbounded", "bounded16"],
                   default="bounded16")
    p.add_argument("--bits", type=int, default=16,
                   help="dictionary width in bits per token (9..21)")
    p.add_argument("--threshold", type=int, default=None,
                   help="pair-frequency threshold override (>= 2)")
    p.add_argument("--sample-bytes", type=int, default=None,
                   help="training sample cap in bytes (default: min(corpus, 8 MiB))")
    p.add_argument("--seed", type=int, default=0)


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", help="corpus file (LF-delimited) or synthetic[:MIB[:SEED]]")
    p.add_argument("--limit-bytes", type=int, default=None,
                   help="read at most this many bytes of the corpus file")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ssdc",
                                 description="Short-string dictionary compression")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a dictionary and save it")
    _add_input(p)
    _add_trainer_flags(p)
    p.add_argument("--dict-out", required=True, help="output dictionary file")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("compress", help="compress a corpus with a saved dictionary")
    _add_input(p)
    p.add_argument("--dict", required=True, help="dictionary file")
    p.add_argument("--out", required=True, help="output column file")
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("decompress", help="decode a column back to LF-delimited text")
    p.add_argument("--dict", required=True, help="dictionary file")
    p.add_argument("--column", required=True, help="column file")
    p.add_argument("--out", required=True, help="output text file")
    p.set_defaults(func=cmd_decompress)

    p = sub.add_parser("bench", help="timed train/compress/decompress/access run")
    _add_input(p)
    _add_trainer_flags(p)
    p.add_argument("--queries", type=int, default=1_000_000,
                   help="random point queries for the access phase")
    p.add_argument("--reps", type=int, default=3,
                   help="measured repetitions per timed phase (median reported)")
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("sweep-bits", help="benchmark across dictionary widths")
    _add_input(p)
    p.add_argument("--variant", choices=["unbounded", "bounded16"],
                   default="bounded16")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bits-min", type=int, default=9)
    p.add_argument("--bits-max", type=int, default=21)
    p.add_argument("--queries", type=int, default=0)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_sweep_bits)

    p = sub.add_parser("sweep-threshold",
                       help="ratio and training-bytes per threshold")
    _add_input(p)
    p.add_argument("--variant", choices=["unbounded", "bounded16"],
                   default="bounded16")
    p.add_argument("--bits", type=int, default=16)
    p.add_argument("--sample-bytes", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--t-min", type=int, default=2)
    p.add_argument("--t-max", type=int, default=30)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_sweep_threshold)

    p = sub.add_parser("diagnostics", help="emit distribution CSVs for a trained run")
    _add_input(p)
    _add_trainer_flags(p)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_diagnostics)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SsdcError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
