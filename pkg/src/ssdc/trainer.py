"""Dictionary training: one sequential pass over a shuffled sample.

The trainer parses each sampled string with the current dictionary and
counts adjacent token pairs.  When a pair's count reaches the threshold,
the pair's concatenated bytes become a new dictionary entry, the counter
entry is dropped, and the previous-match register is set to the new token
so pair counting continues from it.  Pairs never span string boundaries.

Training stops when the dictionary is full (2^bits_per_token entries) or
the sample is exhausted.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .dictionary import (BOUNDED_MAX_LEN, DEFAULT_BITS, Dictionary,
                         UNBOUNDED_MAX_LEN, new_base_dictionary)
from .errors import BucketFullError, ConfigError
from .lpm import DynamicMatcher, build_matcher

MIB = 1 << 20

# Training reads a shuffled sample, not the whole corpus; 8 MiB is enough
# to fill a 2^16-entry dictionary while keeping training time well below
# parsing time.
DEFAULT_SAMPLE_CAP = 8 * MIB

STOP_DICTIONARY_FULL = "dictionary_full"
STOP_SAMPLE_EXHAUSTED = "sample_exhausted"

# The sampler touches only Random.random(), whose sequence is pinned by
# the language docs, so one name covers every supported interpreter.
_RNG_ALGORITHM = "mt19937/random()-v1"


@dataclass(frozen=True)
class TrainerConfig:
    bits_per_token: int = DEFAULT_BITS
    max_entry_len: int = BOUNDED_MAX_LEN
    threshold_override: Optional[int] = None
    sample_cap_bytes: Optional[int] = None  # None: min(corpus bytes, 8 MiB)
    sample_fraction: Optional[float] = None
    rng_seed: int = 0


@dataclass
class TrainingReport:
    tokens_created: int
    bytes_consumed: int
    wall_time: float
    stop_reason: str
    threshold: int
    sampled_strings: int
    sampled_bytes: int
    rng_algorithm: str = field(default=_RNG_ALGORITHM)

    def as_text(self) -> str:
        """Line-oriented key=value rendering."""
        pairs = [
            ("tokens_created", self.tokens_created),
            ("bytes_consumed", self.bytes_consumed),
            ("wall_time_s", f"{self.wall_time:.6f}"),
            ("stop_reason", self.stop_reason),
            ("threshold", self.threshold),
            ("sampled_strings", self.sampled_strings),
            ("sampled_bytes", self.sampled_bytes),
            ("rng_algorithm", self.rng_algorithm),
        ]
        return "\n".join(f"{k}={v}" for k, v in pairs)


def compute_threshold(dataset_size_mib: float) -> int:
    """Pair-frequency threshold for a dataset of the given size; grows
    logarithmically and is never below 2."""
    if dataset_size_mib <= 0:
        raise ConfigError("dataset size must be positive")
    return max(2, math.floor(math.log2(dataset_size_mib)))


def token_gain(length: int, freq: int) -> int:
    """Net bytes a token saves: each use replaces ``length`` bytes with a
    2-byte ID, and the entry itself costs ``length`` dictionary bytes."""
    return (length - 2) * freq - length


def _shuffled_range(n: int, rng: random.Random) -> list[int]:
    # Fisher-Yates driven by rng.random(), the one primitive whose output
    # sequence is stable across Python versions; keeps samples (and frozen
    # quality bounds derived from them) reproducible long-term.
    order = list(range(n))
    for i in range(n - 1, 0, -1):
        j = int(rng.random() * (i + 1))
        order[i], order[j] = order[j], order[i]
    return order


def sample_strings(corpus, config: TrainerConfig) -> list[int]:
    """Shuffled sample of string indices, capped by total byte size.

    Deterministic for a fixed rng_seed.  The string that crosses the cap is
    included, so the sampled bytes land within one string length of it.
    """
    strings = corpus.strings
    total = corpus.total_bytes
    cap = (min(total, DEFAULT_SAMPLE_CAP) if config.sample_cap_bytes is None
           else config.sample_cap_bytes)
    if config.sample_fraction is not None:
        cap = min(cap, int(total * config.sample_fraction))
    order = _shuffled_range(len(strings), random.Random(config.rng_seed))
    out: list[int] = []
    acc = 0
    for i in order:
        if acc >= cap:
            break
        out.append(i)
        acc += len(strings[i])
    return out


def train_on_strings(strings, config: TrainerConfig, threshold: int,
                     trace: Optional[Callable] = None, *,
                     dictionary: Optional[Dictionary] = None,
                     matcher: Optional[DynamicMatcher] = None
                     ) -> tuple[Dictionary, DynamicMatcher, TrainingReport]:
    """Run the merge loop over ``strings`` in the given order.

    ``trace``, if set, receives ("pair", prev_id, cur_id, count) after each
    counter update and ("merge", prev_id, cur_id, new_id) after each merge;
    used by tests to observe the loop, never by production paths.

    A pre-populated ``dictionary`` (with its ``matcher``) continues
    training from that state instead of the 256-entry base.
    """
    if threshold < 2:
        raise ConfigError(f"threshold {threshold} must be >= 2")
    t0 = time.perf_counter()
    strings = list(strings)
    if dictionary is None:
        d = new_base_dictionary(config.bits_per_token, config.max_entry_len)
        matcher = build_matcher(d)
    else:
        d = dictionary
        if matcher is None:
            matcher = build_matcher(d)
    initial_entries = d.entry_count
    capacity = d.capacity
    max_len = config.max_entry_len
    counter: dict[int, int] = {}
    lm = matcher.longest_match
    consumed = 0
    stop_reason = STOP_SAMPLE_EXHAUSTED
    for s in strings:
        n = len(s)
        pos = 0
        prev = -1
        stopping = False
        while pos < n:
            tid, mlen = lm(s, pos, n)
            pos += mlen
            cur = tid
            if prev >= 0:
                key = (prev << 21) | tid
                c = counter.get(key, 0) + 1
                if trace is not None:
                    trace(("pair", prev, tid, c))
                if c == threshold:
                    del counter[key]
                    content = d.token_bytes(prev) + d.token_bytes(tid)
                    if len(content) <= max_len and matcher.lookup_exact(content) is None:
                        try:
                            matcher.insert(content, d.entry_count)
                        except BucketFullError:
                            pass  # pair stays unmergeable until recounted
                        else:
                            cur = d.append_token(content)
                            if trace is not None:
                                trace(("merge", prev, tid, cur))
                            if d.entry_count >= capacity:
                                stop_reason = STOP_DICTIONARY_FULL
                                stopping = True
                else:
                    counter[key] = c
            prev = cur
            if stopping:
                break
        consumed += pos
        if stop_reason == STOP_DICTIONARY_FULL:
            break
    report = TrainingReport(
        tokens_created=d.entry_count - initial_entries,
        bytes_consumed=consumed,
        wall_time=time.perf_counter() - t0,
        stop_reason=stop_reason,
        threshold=threshold,
        sampled_strings=len(strings),
        sampled_bytes=sum(map(len, strings)),
    )
    return d, matcher, report


def train(corpus, config: TrainerConfig = TrainerConfig(),
          trace: Optional[Callable] = None
          ) -> tuple[Dictionary, DynamicMatcher, TrainingReport]:
    """Sample the corpus, then run the merge loop over the sample."""
    if config.threshold_override is not None:
        threshold = config.threshold_override
    else:
        mib = corpus.total_bytes / MIB
        threshold = 2 if mib <= 0 else compute_threshold(mib)
    picked = sample_strings(corpus, config)
    strings = corpus.strings
    return train_on_strings((strings[i] for i in picked), config, threshold, trace)
