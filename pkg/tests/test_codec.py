"""Greedy parse, per-string and bulk decode, column format, accounting."""

import random

import numpy as np
import pytest

from ssdc import (CompressedColumn, DecodeBuffer, Dictionary, FormatError,
                  OutOfRangeError, bytes_per_id, compress_column,
                  compress_string, compressed_bytes, compression_ratio,
                  decompress_all, decompress_string, decompress_string_into,
                  decompress_token, new_base_dictionary, build_matcher)

from oracles import greedy_tokenize


def _tiny_trained():
    """Small hand-built dictionary with multi-byte entries for parse tests."""
    d = new_base_dictionary(max_entry_len=2**32)
    for content in (b"he", b"the", b"there", b"cat", b"the cat",
                    b" sat on ", b"x" * 23):
        d.append_token(content)
    return d, build_matcher(d)


# ---------------------------------------------------------------------------
# compression
# ---------------------------------------------------------------------------

def test_compress_string_basics():
    d, m = _tiny_trained()
    assert compress_string(m, b"") == []
    assert compress_string(m, b"z") == [122]
    toks = compress_string(m, b"the cat sat on the mat")
    assert toks[0] == 260  # "the cat" wins over "the"
    decoded = b"".join(d.token_bytes(t) for t in toks)
    assert decoded == b"the cat sat on the mat"


def test_compress_string_matches_greedy_oracle():
    d, m = _tiny_trained()
    entries = [(d.token_bytes(i), i) for i in range(d.entry_count)]
    rng = random.Random(20)
    pieces = [b"the", b"there", b"cat", b" sat on ", b"he", b"q", b"x" * 9]
    for _ in range(300):
        s = b"".join(rng.choice(pieces) for _ in range(rng.randint(0, 12)))
        assert compress_string(m, s) == greedy_tokenize(entries, s)


def test_compress_column_layout():
    d, m = _tiny_trained()
    col = compress_column(m, d, [b"", b"a"])
    assert col.tokens.tolist() == [97]
    assert col.string_offsets.tolist() == [0, 0, 1]
    assert col.tokens.dtype == np.uint16
    assert col.n_strings == 2
    assert col.token_count == 1


def test_compress_column_is_per_string_concatenation():
    d, m = _tiny_trained()
    strings = [b"the cat", b"", b"there he goes", b"xxxxx", b"\x00\xff"]
    col = compress_column(m, d, strings)
    so = col.string_offsets
    for i, s in enumerate(strings):
        per_string = compress_string(m, s)
        assert col.tokens[so[i]:so[i + 1]].tolist() == per_string


def test_compress_column_wide_ids_use_uint32():
    d = new_base_dictionary(bits_per_token=17)
    m = build_matcher(d)
    col = compress_column(m, d, [b"ab"])
    assert col.tokens.dtype == np.uint32
    with pytest.raises(FormatError):
        col.to_bytes()


# ---------------------------------------------------------------------------
# decompression
# ---------------------------------------------------------------------------

def test_decompress_token_single_and_long():
    d, m = _tiny_trained()
    out = DecodeBuffer(64, slack=23)
    assert decompress_token(d, 97, out) == 1
    assert decompress_token(d, 258, out) == 5          # "there"
    assert decompress_token(d, 262, out) == 23         # needs the second copy
    assert out.view() == b"a" + b"there" + b"x" * 23


def test_decompress_token_every_length():
    d = new_base_dictionary(max_entry_len=2**32)
    contents = [bytes([65 + (k % 26)]) * k for k in range(1, 41)]
    ids = [d.append_token(c) for c in contents]
    out = DecodeBuffer(sum(range(1, 41)), slack=40)
    for tid, content in zip(ids, contents):
        assert decompress_token(d, tid, out) == len(content)
    assert out.view() == b"".join(contents)


def test_decompress_string_round_trip_and_range_check():
    d, m = _tiny_trained()
    strings = [b"the cat sat on the mat", b"", b"zebra", b"x" * 23 + b"!"]
    col = compress_column(m, d, strings)
    for i, s in enumerate(strings):
        assert decompress_string(d, col, i) == s
    with pytest.raises(OutOfRangeError):
        decompress_string(d, col, len(strings))
    with pytest.raises(OutOfRangeError):
        decompress_string(d, col, -1)


def test_decompress_string_into_resets_cursor():
    d, m = _tiny_trained()
    strings = [b"the cat sat on the mat", b"he"]
    col = compress_column(m, d, strings)
    out = DecodeBuffer(32, slack=23)
    n0 = decompress_string_into(d, col, 0, out)
    assert (n0, out.view()) == (22, strings[0])
    n1 = decompress_string_into(d, col, 1, out)
    assert (n1, out.view()) == (2, b"he")  # overwrites from position 0
    with pytest.raises(OutOfRangeError):
        decompress_string_into(d, col, 2, out)


def test_decompress_all_matches_concatenation():
    d, m = _tiny_trained()
    strings = [b"the cat", b"", b"there", b"", b"x" * 23, b"qq"]
    col = compress_column(m, d, strings)
    blob, boundaries = decompress_all(d, col)
    assert blob == b"".join(strings)
    expect = [0]
    for s in strings:
        expect.append(expect[-1] + len(s))
    assert boundaries.tolist() == expect
    for i, s in enumerate(strings):
        assert blob[boundaries[i]:boundaries[i + 1]] == s


def test_decompress_all_empty_column():
    d, m = _tiny_trained()
    col = compress_column(m, d, [])
    blob, boundaries = decompress_all(d, col)
    assert blob == b""
    assert boundaries.tolist() == [0]


def test_round_trip_random_binary_strings():
    rng = random.Random(21)
    d = new_base_dictionary(max_entry_len=2**32)
    for _ in range(200):
        content = bytes(rng.randrange(256) for _ in range(rng.randint(2, 30)))
        try:
            d.append_token(content)
        except Exception:
            pass
    m = build_matcher(d)
    strings = [bytes(rng.randrange(256) for _ in range(rng.randint(0, 120)))
               for _ in range(400)]
    col = compress_column(m, d, strings)
    blob, boundaries = decompress_all(d, col)
    assert blob == b"".join(strings)
    for i in (0, 57, 399):
        assert decompress_string(d, col, i) == strings[i]


def test_trained_artifacts_round_trip(bundled_corpus, bounded_artifacts):
    d = bounded_artifacts["dict"]
    col = bounded_artifacts["column"]
    blob, boundaries = decompress_all(d, col)
    assert blob == bytes(bundled_corpus.data)
    assert boundaries.tolist() == list(bundled_corpus.boundaries)
    rng = random.Random(22)
    for _ in range(200):
        i = rng.randrange(bundled_corpus.rows)
        assert decompress_string(d, col, i) == bundled_corpus.strings[i]


# ---------------------------------------------------------------------------
# decode buffer
# ---------------------------------------------------------------------------

def test_decode_buffer_allocation_and_view():
    b = DecodeBuffer(10)
    assert len(b.buf) == 26          # capacity + 16-byte floor slack
    b = DecodeBuffer(10, slack=40)
    assert len(b.buf) == 50
    b = DecodeBuffer(10, slack=4)
    assert len(b.buf) == 26          # slack never below 16
    b.length = 3
    b.buf[0:3] = b"abc"
    assert b.view() == b"abc"
    b.ensure(100)
    assert len(b.buf) >= 116
    big = len(b.buf)
    b.ensure(10)                     # never shrinks
    assert len(b.buf) == big


# ---------------------------------------------------------------------------
# column serialization and pairing
# ---------------------------------------------------------------------------

def test_column_round_trip_bit_exact(bounded_artifacts):
    col = bounded_artifacts["column"]
    blob = col.to_bytes()
    col2 = CompressedColumn.from_bytes(blob)
    assert np.array_equal(col.tokens, col2.tokens)
    assert np.array_equal(col.string_offsets, col2.string_offsets)
    assert col.dict_hash == col2.dict_hash
    assert col2.to_bytes() == blob


def test_column_save_load_checks_pairing(tmp_path, bounded_artifacts):
    d = bounded_artifacts["dict"]
    col = bounded_artifacts["column"]
    p = tmp_path / "col.sscc"
    col.save(p)
    loaded = CompressedColumn.load(p, dictionary=d)
    assert np.array_equal(loaded.tokens, col.tokens)
    wrong = new_base_dictionary()
    with pytest.raises(FormatError):
        CompressedColumn.load(p, dictionary=wrong)


def test_column_pairing_rejects_out_of_range_ids():
    d, m = _tiny_trained()
    col = compress_column(m, d, [b"the cat"])
    small = new_base_dictionary()
    # force the hash to match so only the range check can catch it
    col.dict_hash = small.content_hash()
    with pytest.raises(FormatError):
        col.check_pairing(small)


def test_column_rejects_corrupt_blobs(bounded_artifacts):
    blob = bytearray(bounded_artifacts["column"].to_bytes())
    bad_magic = bytearray(blob)
    bad_magic[0] = ord("X")
    with pytest.raises(FormatError):
        CompressedColumn.from_bytes(bytes(bad_magic))
    bad_version = bytearray(blob)
    bad_version[4] = 99
    with pytest.raises(FormatError):
        CompressedColumn.from_bytes(bytes(bad_version))
    with pytest.raises(FormatError):
        CompressedColumn.from_bytes(bytes(blob[:-5]))     # truncated
    with pytest.raises(FormatError):
        CompressedColumn.from_bytes(bytes(blob) + b"\x00")  # trailing junk


def test_column_rejects_non_monotonic_offsets():
    d, m = _tiny_trained()
    col = compress_column(m, d, [b"ab", b"cd"])
    col.string_offsets = np.array([0, 3, 2], dtype=np.uint64)
    with pytest.raises(FormatError):
        CompressedColumn.from_bytes(col.to_bytes())


# ---------------------------------------------------------------------------
# accounting
# ---------------------------------------------------------------------------

def test_bytes_per_id_boundaries():
    assert bytes_per_id(9) == 2
    assert bytes_per_id(16) == 2
    assert bytes_per_id(17) == 3
    assert bytes_per_id(21) == 3


def test_ratio_accounting_identity(bundled_corpus, bounded_artifacts):
    d = bounded_artifacts["dict"]
    col = bounded_artifacts["column"]
    total = d.memory_footprint()["total_bytes"]
    assert compressed_bytes(col, d) == 2 * col.token_count + total
    raw = bundled_corpus.total_bytes
    ratio = compression_ratio(raw, col, d)
    assert ratio == raw / (2 * col.token_count + total)
    assert ratio > 1.0
    assert col.stream_bytes(16) == 2 * col.token_count
