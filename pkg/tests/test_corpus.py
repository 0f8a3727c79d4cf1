"""Line-delimited corpus I/O and the deterministic text generator."""

import random

import pytest

from ssdc import (Corpus, OutOfRangeError, corpus_from_strings, load_lines,
                  synthetic_text_corpus, write_lines)

MIB = 1 << 20


def test_load_lines_basic(tmp_path):
    p = tmp_path / "two.txt"
    p.write_bytes(b"ab\ncd\n")
    c = load_lines(p)
    assert c.strings == [b"ab", b"cd"]
    assert c.rows == 2
    assert c.total_bytes == 4


def test_load_lines_missing_trailing_newline(tmp_path):
    p = tmp_path / "one.txt"
    p.write_bytes(b"ab")
    assert load_lines(p).strings == [b"ab"]


def test_load_lines_strips_cr(tmp_path):
    p = tmp_path / "crlf.txt"
    p.write_bytes(b"ab\r\ncd\r\n")
    assert load_lines(p).strings == [b"ab", b"cd"]


def test_load_lines_counts_empty_lines(tmp_path):
    p = tmp_path / "gaps.txt"
    p.write_bytes(b"a\n\n\nb\n")
    c = load_lines(p)
    assert c.strings == [b"a", b"", b"", b"b"]
    assert c.rows == 4


def test_load_lines_empty_file(tmp_path):
    p = tmp_path / "empty.txt"
    p.write_bytes(b"")
    c = load_lines(p)
    assert c.rows == 0
    assert c.total_bytes == 0
    assert c.strings == []


def test_load_lines_limit_drops_partial_trailing_line(tmp_path):
    p = tmp_path / "lim.txt"
    p.write_bytes(b"aaaa\nbbbb\ncccc\n")
    assert load_lines(p, limit_bytes=7).strings == [b"aaaa"]
    assert load_lines(p, limit_bytes=10).strings == [b"aaaa", b"bbbb"]
    assert load_lines(p, limit_bytes=3).strings == []
    assert load_lines(p, limit_bytes=10**9).strings == [b"aaaa", b"bbbb", b"cccc"]


def test_write_then_load_is_identity(tmp_path):
    rng = random.Random(30)
    alphabet = bytes(range(1, 10)) + b"abcdefghijklmnopqrstuvwxyz "
    strings = []
    total = 0
    while total < MIB:
        s = bytes(rng.choice(alphabet) for _ in range(rng.randint(0, 80)))
        strings.append(s)
        total += len(s) + 1
    p = tmp_path / "big.txt"
    write_lines(p, strings)
    c = load_lines(p)
    assert c.strings == strings


def test_corpus_from_strings_layout():
    c = corpus_from_strings([b"ab", b"", b"xyz"], name="t")
    assert bytes(c.data) == b"abxyz"
    assert list(c.boundaries) == [0, 2, 2, 5]
    assert c.name == "t"


def test_raw_access_identity_and_range():
    strings = [b"hello", b"", b"worlds"]
    c = corpus_from_strings(strings)
    for i, s in enumerate(strings):
        assert bytes(c.raw_access(i)) == s
    with pytest.raises(OutOfRangeError):
        c.raw_access(3)
    with pytest.raises(OutOfRangeError):
        c.raw_access(-1)


def test_stats_arithmetic():
    c = corpus_from_strings([b"0123456789"] * 100)
    s = c.stats()
    assert s["rows"] == 100
    assert s["size_mib"] == 1000 / MIB
    assert s["avg_len_bytes"] == 10.0
    empty = corpus_from_strings([])
    assert empty.stats()["avg_len_bytes"] == 0.0


def test_synthetic_generator_deterministic_and_sized():
    c1 = synthetic_text_corpus(256 * 1024, seed=5)
    c2 = synthetic_text_corpus(256 * 1024, seed=5)
    assert bytes(c1.data) == bytes(c2.data)
    assert list(c1.boundaries) == list(c2.boundaries)
    c3 = synthetic_text_corpus(256 * 1024, seed=6)
    assert bytes(c1.data) != bytes(c3.data)
    # stops at the first line crossing the target: within one line of it
    longest_line = max(map(len, c1.strings))
    assert 256 * 1024 <= c1.total_bytes <= 256 * 1024 + longest_line


def test_synthetic_generator_texture():
    c = synthetic_text_corpus(128 * 1024, seed=1)
    words_per_line = [len(s.split(b" ")) for s in c.strings]
    assert min(words_per_line) >= 5
    assert max(words_per_line) <= 12
    seen = set()
    for s in c.strings:
        seen.update(s.split(b" "))
    assert len(seen) <= 420          # closed vocabulary
    assert len(seen) > 100           # and most of it gets used
    for s in c.strings[:50]:
        s.decode("ascii")            # plain printable text


def test_default_corpus_shape(bundled_corpus):
    assert bundled_corpus.rows > 50000
    assert abs(bundled_corpus.total_bytes - 4 * MIB) < 256
    assert bundled_corpus.name == "synthetic"
