"""Shared fixtures: the bundled corpus and artifacts trained on it.

Training the 4 MiB corpus takes a few seconds per variant, so the trained
dictionary/column pairs are built once per session and shared by the
codec, bench, and acceptance tests.  The configs here (1 MiB sample cap,
seed 0, default threshold) are the same ones the quality criteria freeze,
so every consumer sees identical artifacts.
"""

import pytest

from ssdc import (BOUNDED_MAX_LEN, TrainerConfig, UNBOUNDED_MAX_LEN,
                  compress_column, finalize, synthetic_text_corpus, train)

MIB = 1 << 20


@pytest.fixture(scope="session")
def bundled_corpus():
    return synthetic_text_corpus()  # 4 MiB, seed 2024


def _train_and_compress(corpus, max_entry_len):
    cfg = TrainerConfig(max_entry_len=max_entry_len, rng_seed=0,
                        sample_cap_bytes=MIB)
    d, matcher, report = train(corpus, cfg)
    pm = finalize(matcher) if max_entry_len == BOUNDED_MAX_LEN else matcher
    column = compress_column(pm, d, corpus.strings)
    return {"dict": d, "dynamic": matcher, "parser": pm,
            "column": column, "report": report}


@pytest.fixture(scope="session")
def bounded_artifacts(bundled_corpus):
    return _train_and_compress(bundled_corpus, BOUNDED_MAX_LEN)


@pytest.fixture(scope="session")
def unbounded_artifacts(bundled_corpus):
    return _train_and_compress(bundled_corpus, UNBOUNDED_MAX_LEN)
