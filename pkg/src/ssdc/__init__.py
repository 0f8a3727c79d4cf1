"""Field-level short-string dictionary compression with fast random access.

Train a dictionary on a sample, compress each string independently into
2-byte token IDs, and decode any single string without touching its
neighbours.  Two variants: unbounded entry length, and entries capped at
16 bytes for fixed-size-copy decoding and a perfect-hashed matcher.

Typical use:

    from ssdc import (TrainerConfig, train, parsing_matcher,
                      compress_column, decompress_string)

    d, matcher, report = train(corpus, TrainerConfig())
    column = compress_column(parsing_matcher(d), d, corpus.strings)
    s = decompress_string(d, column, 42)
"""

from .bench import (BenchResult, QueryWorkload, ThresholdRow,
                    emit_diagnostics, run_benchmark, sweep_bits,
                    sweep_threshold)
from .codec import (CompressedColumn, DecodeBuffer, bytes_per_id,
                    compress_column, compress_string, compressed_bytes,
                    compression_ratio, decompress_all, decompress_string,
                    decompress_string_into, decompress_token)
from .corpus import (Corpus, corpus_from_strings, load_lines,
                     synthetic_text_corpus, write_lines)
from .dictionary import (BOUNDED_MAX_LEN, DEFAULT_BITS, Dictionary,
                         MAX_BITS, MIN_BITS, UNBOUNDED_MAX_LEN,
                         VARIANT_BOUNDED16, VARIANT_UNBOUNDED,
                         max_entry_len_for, new_base_dictionary)
from .errors import (BucketFullError, CapacityError, ConfigError,
                     EntryLengthError, FormatError, OutOfRangeError,
                     PerfectHashError, SsdcError, VerificationError)
from .lpm import (DynamicMatcher, PackedWord, StaticMatcher, build_matcher,
                  finalize, is_prefix, lpm_search, pack, parsing_matcher,
                  shared_prefix_size, unpack)
from .trainer import (TrainerConfig, TrainingReport, compute_threshold,
                      sample_strings, token_gain, train, train_on_strings)

__version__ = "0.1.0"

__all__ = [
    "BenchResult", "QueryWorkload", "ThresholdRow", "emit_diagnostics",
    "run_benchmark", "sweep_bits", "sweep_threshold",
    "CompressedColumn", "DecodeBuffer", "bytes_per_id", "compress_column",
    "compress_string", "compressed_bytes", "compression_ratio",
    "decompress_all", "decompress_string", "decompress_string_into",
    "decompress_token",
    "Corpus", "corpus_from_strings", "load_lines", "synthetic_text_corpus",
    "write_lines",
    "BOUNDED_MAX_LEN", "DEFAULT_BITS", "Dictionary", "MAX_BITS", "MIN_BITS",
    "UNBOUNDED_MAX_LEN", "VARIANT_BOUNDED16", "VARIANT_UNBOUNDED",
    "max_entry_len_for", "new_base_dictionary",
    "BucketFullError", "CapacityError", "ConfigError", "EntryLengthError",
    "FormatError", "OutOfRangeError", "PerfectHashError", "SsdcError",
    "VerificationError",
    "DynamicMatcher", "PackedWord", "StaticMatcher", "build_matcher",
    "finalize", "is_prefix", "lpm_search", "pack", "parsing_matcher",
    "shared_prefix_size", "unpack",
    "TrainerConfig", "TrainingReport", "compute_threshold", "sample_strings",
    "token_gain", "train", "train_on_strings",
]
