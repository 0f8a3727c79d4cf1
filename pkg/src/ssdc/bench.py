"""Benchmark harness: timed train/compress/decompress/access runs.

Methodology:
  - every timed phase runs one warm-up plus ``reps`` measured iterations
    and reports the median, single-threaded;
  - compression throughput is reported both inclusive of training
    (raw MiB / (training_s + parsing_s)) and for the parsing phase alone;
  - decompression throughput decodes the full dataset;
  - access latency is the wall time of the whole point-query loop divided
    by the query count, with a checksum accumulated across queries so the
    loop has a live side effect;
  - correctness passes (full decode vs the raw corpus, and every access
    query vs the raw string) run separately and are never timed.

All derived numbers (ratios, throughputs) are recomputable from the raw
components carried on BenchResult; printers always emit the components.
"""

from __future__ import annotations

import csv
import statistics
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .codec import (CompressedColumn, DecodeBuffer, compress_column,
                    compression_ratio, decompress_all, decompress_string_into)
from .corpus import MIB, Corpus
from .dictionary import BOUNDED_MAX_LEN, Dictionary, max_entry_len_for
from .errors import VerificationError
from .lpm import finalize
from .trainer import TrainerConfig, train


@dataclass(frozen=True)
class QueryWorkload:
    """Uniform random point queries over string indices."""
    n_queries: int = 1_000_000
    rng_seed: int = 1

    def indices(self, n_strings: int) -> np.ndarray:
        if self.n_queries == 0 or n_strings == 0:
            return np.empty(0, dtype=np.int64)
        rng = np.random.default_rng(self.rng_seed)
        return rng.integers(0, n_strings, size=self.n_queries, dtype=np.int64)


@dataclass
class BenchResult:
    corpus_name: str
    variant: str
    bits_per_token: int
    threshold: int
    raw_bytes: int
    n_strings: int
    token_count: int
    entry_count: int
    tokens_created: int
    bytes_consumed: int
    stop_reason: str
    dict_data_bytes: int
    dict_total_bytes: int
    compression_ratio: float
    avg_token_len: float
    training_s: float
    parsing_s: float
    compress_mib_s: float  # inclusive of training time
    parse_mib_s: float     # parsing phase alone
    decompress_mib_s: float
    access_ns: Optional[float]
    access_checksum: Optional[int]
    n_queries: int

    @property
    def dict_total_mib(self) -> float:
        return self.dict_total_bytes / MIB

    @property
    def dict_data_mib(self) -> float:
        return self.dict_data_bytes / MIB

    def as_dict(self) -> dict:
        d = asdict(self)
        d["dict_total_mib"] = self.dict_total_mib
        d["dict_data_mib"] = self.dict_data_mib
        return d

    def table(self) -> str:
        d = self.as_dict()
        width = max(map(len, d))
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in d.items())


def _timed(fn, reps: int):
    """Median wall time of ``reps`` runs after one warm-up, plus a result."""
    fn()
    times = []
    result = None
    for _ in range(max(1, reps)):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times), result


def _verify_full_decode(corpus: Corpus, blob: bytes, boundaries: np.ndarray) -> None:
    if blob != corpus.data:
        raise VerificationError("full decode does not match the raw corpus")
    if not np.array_equal(boundaries,
                          np.asarray(corpus.boundaries, dtype=np.int64)):
        raise VerificationError("full decode produced wrong string boundaries")


def _verify_access(corpus: Corpus, dictionary: Dictionary,
                   column: CompressedColumn, idx_list, buf: DecodeBuffer) -> None:
    data = corpus.data
    bounds = corpus.boundaries
    for i in idx_list:
        length = decompress_string_into(dictionary, column, i, buf)
        s = bounds[i]
        if bounds[i + 1] - s != length or data[s:s + length] != buf.buf[:length]:
            raise VerificationError(f"access decode mismatch at string {i}")


def run_benchmark(corpus: Corpus, variant: str = "bounded16", *,
                  bits_per_token: int = 16,
                  threshold: Optional[int] = None,
                  sample_cap_bytes: Optional[int] = None,
                  seed: int = 0,
                  workload: QueryWorkload = QueryWorkload(),
                  reps: int = 3) -> BenchResult:
    """Train, parse, decode, and point-query one corpus; verify everything."""
    max_entry_len = max_entry_len_for(variant)
    tcfg = TrainerConfig(bits_per_token=bits_per_token,
                         max_entry_len=max_entry_len,
                         threshold_override=threshold,
                         sample_cap_bytes=sample_cap_bytes,
                         rng_seed=seed)
    strings = corpus.strings  # materialize outside the timers
    bounded = max_entry_len == BOUNDED_MAX_LEN

    def do_train():
        d, matcher, report = train(corpus, tcfg)
        return d, finalize(matcher) if bounded else matcher, report

    training_s, (d, pmatcher, report) = _timed(do_train, reps)
    parsing_s, column = _timed(lambda: compress_column(pmatcher, d, strings), reps)
    decomp_s, (blob, boundaries) = _timed(lambda: decompress_all(d, column), reps)
    _verify_full_decode(corpus, blob, boundaries)

    idx = workload.indices(corpus.rows)
    access_ns = None
    checksum = None
    if len(idx):
        idx_list = idx.tolist()
        max_string = int(np.diff(np.asarray(corpus.boundaries)).max())
        slack = max(16, max(d.entry_len(t) for t in range(d.entry_count)))
        buf = DecodeBuffer(max_string, slack)

        def do_access():
            total = 0
            dsi = decompress_string_into
            for i in idx_list:
                total += dsi(d, column, i, buf)
            return total

        access_s, checksum = _timed(do_access, reps)
        access_ns = access_s / len(idx) * 1e9
        _verify_access(corpus, d, column, idx_list, buf)

    raw = corpus.total_bytes
    raw_mib = raw / MIB
    foot = d.memory_footprint()
    return BenchResult(
        corpus_name=corpus.name,
        variant=variant,
        bits_per_token=bits_per_token,
        threshold=report.threshold,
        raw_bytes=raw,
        n_strings=corpus.rows,
        token_count=column.token_count,
        entry_count=d.entry_count,
        tokens_created=report.tokens_created,
        bytes_consumed=report.bytes_consumed,
        stop_reason=report.stop_reason,
        dict_data_bytes=foot["data_bytes"],
        dict_total_bytes=foot["total_bytes"],
        compression_ratio=compression_ratio(raw, column, d),
        avg_token_len=raw / column.token_count if column.token_count else 0.0,
        training_s=training_s,
        parsing_s=parsing_s,
        compress_mib_s=raw_mib / max(training_s + parsing_s, 1e-12),
        parse_mib_s=raw_mib / max(parsing_s, 1e-12),
        decompress_mib_s=raw_mib / max(decomp_s, 1e-12),
        access_ns=access_ns,
        access_checksum=checksum,
        n_queries=len(idx),
    )


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

def sweep_bits(corpus: Corpus, bits_values=range(9, 22),
               variant: str = "bounded16", *, seed: int = 0, reps: int = 1,
               workload: QueryWorkload = QueryWorkload(0)) -> list[BenchResult]:
    """One benchmark row per dictionary width; threshold forced to its
    minimum so every width can fill its dictionary."""
    return [run_benchmark(corpus, variant, bits_per_token=bits, threshold=2,
                          seed=seed, workload=workload, reps=reps)
            for bits in bits_values]


@dataclass
class ThresholdRow:
    threshold: int
    compression_ratio: float
    bytes_consumed: int
    tokens_created: int
    stop_reason: str


def sweep_threshold(corpus: Corpus, thresholds=range(2, 31),
                    variant: str = "bounded16", *, bits_per_token: int = 16,
                    sample_cap_bytes: Optional[int] = None,
                    seed: int = 0) -> list[ThresholdRow]:
    """Final ratio and training bytes consumed, per pair-frequency threshold."""
    rows = []
    max_entry_len = max_entry_len_for(variant)
    bounded = max_entry_len == BOUNDED_MAX_LEN
    strings = corpus.strings
    for t in thresholds:
        cfg = TrainerConfig(bits_per_token=bits_per_token,
                            max_entry_len=max_entry_len,
                            threshold_override=t,
                            sample_cap_bytes=sample_cap_bytes,
                            rng_seed=seed)
        d, matcher, report = train(corpus, cfg)
        pm = finalize(matcher) if bounded else matcher
        column = compress_column(pm, d, strings)
        rows.append(ThresholdRow(
            threshold=t,
            compression_ratio=compression_ratio(corpus.total_bytes, column, d),
            bytes_consumed=report.bytes_consumed,
            tokens_created=report.tokens_created,
            stop_reason=report.stop_reason,
        ))
    return rows


# ---------------------------------------------------------------------------
# diagnostics
# ---------------------------------------------------------------------------

def _write_csv(path: Path, fieldnames: list[str], rows) -> Path:
    with open(path, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=fieldnames)
        w.writeheader()
        w.writerows(rows)
    return path


def emit_diagnostics(dictionary: Dictionary, column: CompressedColumn,
                     out_dir) -> dict[str, Path]:
    """Write the distribution CSVs behind the quality plots.

    gain_by_length:   per entry length, cumulative gain%% and occurrence%%
    bucket_sizes:     histogram of long-pattern bucket sizes
    token_length_hist: occurrence-weighted entry length distribution
    coverage:         cumulative occurrence%% vs cumulative dictionary bytes,
                      entries sorted by descending frequency (an entry costs
                      its length plus one 4-byte offset)
    smoothed_gain:    per-token gain in ID order, moving-average window
                      max(1, entry_count // 100)
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    n = dictionary.entry_count
    freq = np.bincount(column.tokens.astype(np.int64), minlength=n)
    lens = np.diff(np.asarray(dictionary.offsets, dtype=np.int64))
    gains = (lens - 2) * freq - lens  # token_gain, vectorized
    total_occ = int(freq.sum())
    total_gain = int(gains.sum())
    paths = {}

    # (a) cumulative gain / occurrence share by entry length
    rows = []
    cum_occ = 0
    cum_gain = 0
    for length in np.unique(lens):
        sel = lens == length
        occ = int(freq[sel].sum())
        g = int(gains[sel].sum())
        cum_occ += occ
        cum_gain += g
        rows.append({
            "length": int(length),
            "entries": int(sel.sum()),
            "occurrences": occ,
            "gain": g,
            "cum_occurrence_pct": 100.0 * cum_occ / total_occ if total_occ else 0.0,
            "cum_gain_pct": 100.0 * cum_gain / total_gain if total_gain else 0.0,
        })
    paths["gain_by_length"] = _write_csv(
        out / "gain_by_length.csv",
        ["length", "entries", "occurrences", "gain",
         "cum_occurrence_pct", "cum_gain_pct"], rows)

    # (b) long-pattern bucket sizes, grouped straight off the entry set
    buckets: dict[bytes, int] = {}
    for content in dictionary.entries():
        if len(content) > 8:
            key = bytes(content[:8])
            buckets[key] = buckets.get(key, 0) + 1
    sizes = np.bincount(list(buckets.values())) if buckets else np.zeros(1, int)
    rows = [{"bucket_size": s, "n_buckets": int(c)}
            for s, c in enumerate(sizes) if s and c]
    paths["bucket_sizes"] = _write_csv(
        out / "bucket_sizes.csv", ["bucket_size", "n_buckets"], rows)

    # (c) occurrence-weighted token length histogram of the compressed output
    rows = []
    for length in np.unique(lens):
        occ = int(freq[lens == length].sum())
        rows.append({
            "length": int(length),
            "occurrences": occ,
            "occurrence_pct": 100.0 * occ / total_occ if total_occ else 0.0,
        })
    paths["token_length_hist"] = _write_csv(
        out / "token_length_hist.csv",
        ["length", "occurrences", "occurrence_pct"], rows)

    # (d) coverage: most frequent entries first, dictionary cost len + 4
    order = np.argsort(-freq, kind="stable")
    cum_occ_arr = np.cumsum(freq[order])
    cum_bytes = np.cumsum(lens[order] + 4)
    rows = [{
        "rank": r,
        "token_id": int(order[r]),
        "length": int(lens[order[r]]),
        "frequency": int(freq[order[r]]),
        "cum_occurrence_pct": 100.0 * int(cum_occ_arr[r]) / total_occ if total_occ else 0.0,
        "cum_dict_bytes": int(cum_bytes[r]),
    } for r in range(n)]
    paths["coverage"] = _write_csv(
        out / "coverage.csv",
        ["rank", "token_id", "length", "frequency",
         "cum_occurrence_pct", "cum_dict_bytes"], rows)

    # (e) smoothed per-token gain in creation order
    window = max(1, n // 100)
    cums = np.concatenate(([0], np.cumsum(gains)))
    start = np.maximum(np.arange(n) - window + 1, 0)
    smoothed = (cums[np.arange(n) + 1] - cums[start]) / (np.arange(n) + 1 - start)
    rows = [{"token_id": t, "gain": int(gains[t]),
             "smoothed_gain": float(smoothed[t])} for t in range(n)]
    paths["smoothed_gain"] = _write_csv(
        out / "smoothed_gain.csv", ["token_id", "gain", "smoothed_gain"], rows)
    return paths
