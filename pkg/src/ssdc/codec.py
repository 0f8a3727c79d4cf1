"""Parsing (bytes -> token IDs) and per-string random-access decompression.

A compressed column stores one contiguous token-ID stream for all strings
plus a per-string offset array, so any string decodes in isolation without
touching its neighbours.

Decoding a token is two copies at most: an unconditional 16-byte copy from
the dictionary's data region, then a tail copy only when the entry is
longer than 16 bytes.  The 16-byte-bounded variant never takes the second
copy, so its decode loop is a single fixed-size copy per token.  Both rely
on the dictionary data being padded with 16 trailing bytes and on the
output buffer's slack (see DecodeBuffer).

Column file format (little-endian):

  MAGIC "SSCC" (4) | version u8 = 1 | n_strings u64 | token_count u64
  | string_offsets: (n_strings+1) x u64 | tokens: token_count x u16
  | footer: 8-byte content hash of the paired dictionary
"""

from __future__ import annotations

import struct

import numpy as np

from .dictionary import Dictionary
from .errors import FormatError, OutOfRangeError

COLUMN_MAGIC = b"SSCC"
COLUMN_VERSION = 1

_COL_HEADER = struct.Struct("<4sBQQ")


def bytes_per_id(bits_per_token: int) -> int:
    """Stream bytes per token ID for ratio accounting: IDs are stored as
    2 bytes up to 16 bits and 3 bytes above (no bit packing)."""
    return (bits_per_token + 7) // 8


class DecodeBuffer:
    """Reusable output region with writable slack past the expected payload.

    The slack (at least 16 bytes, or the longest dictionary entry if that
    is larger) is what makes the decoder's unconditional 16-byte copy safe
    without per-token bounds checks; sizing is the caller's contract.
    """

    __slots__ = ("buf", "length")

    def __init__(self, capacity: int, slack: int = 16):
        self.buf = bytearray(capacity + max(16, slack))
        self.length = 0

    def ensure(self, capacity: int, slack: int = 16) -> None:
        need = capacity + max(16, slack)
        if len(self.buf) < need:
            self.buf = bytearray(need)

    def view(self) -> bytes:
        return bytes(self.buf[:self.length])


class CompressedColumn:
    """Token stream plus string boundaries for one compressed string column.

    tokens[string_offsets[i]:string_offsets[i+1]] are string i's token IDs.
    dict_hash pins the dictionary the IDs refer to; decoding against any
    other dictionary is refused at load time.
    """

    __slots__ = ("tokens", "string_offsets", "dict_hash")

    def __init__(self, tokens: np.ndarray, string_offsets: np.ndarray,
                 dict_hash: bytes):
        self.tokens = tokens
        self.string_offsets = string_offsets
        self.dict_hash = dict_hash

    @property
    def n_strings(self) -> int:
        return len(self.string_offsets) - 1

    @property
    def token_count(self) -> int:
        return len(self.tokens)

    def stream_bytes(self, bits_per_token: int = 16) -> int:
        return self.token_count * bytes_per_id(bits_per_token)

    # -- serialization ---------------------------------------------------

    def to_bytes(self) -> bytes:
        if self.tokens.dtype != np.uint16:
            raise FormatError(
                "only 2-byte token IDs are serializable; columns built for "
                "dictionaries wider than 16 bits are in-memory only")
        header = _COL_HEADER.pack(COLUMN_MAGIC, COLUMN_VERSION,
                                  self.n_strings, self.token_count)
        return (header
                + self.string_offsets.astype("<u8").tobytes()
                + self.tokens.astype("<u2").tobytes()
                + self.dict_hash)

    @classmethod
    def from_bytes(cls, blob: bytes,
                   dictionary: Dictionary | None = None) -> "CompressedColumn":
        if len(blob) < _COL_HEADER.size + 8:
            raise FormatError("truncated column header")
        magic, version, n_strings, token_count = _COL_HEADER.unpack_from(blob)
        if magic != COLUMN_MAGIC:
            raise FormatError("bad magic; not a compressed column file")
        if version != COLUMN_VERSION:
            raise FormatError(f"unsupported version {version}")
        off_start = _COL_HEADER.size
        off_end = off_start + 8 * (n_strings + 1)
        tok_end = off_end + 2 * token_count
        if len(blob) != tok_end + 8:
            raise FormatError("column payload length mismatch")
        offsets = np.frombuffer(blob, dtype="<u8", count=n_strings + 1,
                                offset=off_start).astype(np.uint64)
        tokens = np.frombuffer(blob, dtype="<u2", count=token_count,
                               offset=off_end).astype(np.uint16)
        if offsets[0] != 0 or (n_strings and offsets[-1] != token_count):
            raise FormatError("string offsets inconsistent with token count")
        if n_strings == 0 and token_count != 0:
            raise FormatError("tokens present with zero strings")
        if np.any(np.diff(offsets.astype(np.int64)) < 0):
            raise FormatError("string offsets must be non-decreasing")
        col = cls(tokens, offsets, blob[tok_end:tok_end + 8])
        if dictionary is not None:
            col.check_pairing(dictionary)
        return col

    def check_pairing(self, dictionary: Dictionary) -> None:
        if self.dict_hash != dictionary.content_hash():
            raise FormatError("column was not produced by this dictionary "
                              "(content hash mismatch)")
        if self.token_count and int(self.tokens.max()) >= dictionary.entry_count:
            raise FormatError("column contains token IDs outside the dictionary")

    def save(self, path) -> None:
        with open(path, "wb") as f:
            f.write(self.to_bytes())

    @classmethod
    def load(cls, path, dictionary: Dictionary | None = None) -> "CompressedColumn":
        with open(path, "rb") as f:
            return cls.from_bytes(f.read(), dictionary)


# ---------------------------------------------------------------------------
# compression
# ---------------------------------------------------------------------------

def compress_string(matcher, data) -> list[int]:
    """Greedy longest-prefix tokenization; empty input gives no tokens."""
    out: list[int] = []
    pos = 0
    n = len(data)
    lm = matcher.longest_match
    append = out.append
    while pos < n:
        tid, mlen = lm(data, pos, n)
        append(tid)
        pos += mlen
    return out


def compress_column(matcher, dictionary: Dictionary, strings) -> CompressedColumn:
    """Compress each string independently into one shared token stream."""
    tokens: list[int] = []
    offsets = [0]
    lm = matcher.longest_match
    append = tokens.append
    for s in strings:
        pos = 0
        n = len(s)
        while pos < n:
            tid, mlen = lm(s, pos, n)
            append(tid)
            pos += mlen
        offsets.append(len(tokens))
    dtype = np.uint16 if dictionary.bits_per_token <= 16 else np.uint32
    return CompressedColumn(np.asarray(tokens, dtype=dtype),
                            np.asarray(offsets, dtype=np.uint64),
                            dictionary.content_hash())


# ---------------------------------------------------------------------------
# decompression
# ---------------------------------------------------------------------------

def decompress_token(dictionary: Dictionary, token_id: int, out: DecodeBuffer) -> int:
    """Append one token's bytes at the buffer cursor; returns its length.

    Always copies a 16-byte window from the (padded) data region; a second
    copy runs only for entries longer than 16 bytes, so the bounded variant
    decodes with exactly one fixed-size copy per token.
    """
    offs = dictionary.offsets
    start = offs[token_id]
    length = offs[token_id + 1] - start
    pdata = dictionary.padded_data()
    buf = out.buf
    cur = out.length
    buf[cur:cur + 16] = pdata[start:start + 16]
    if length > 16:
        buf[cur + 16:cur + length] = pdata[start + 16:start + length]
    out.length = cur + length
    return length


def decompress_string_into(dictionary: Dictionary, column: CompressedColumn,
                           i: int, out: DecodeBuffer) -> int:
    """Decode string i from the start of ``out``; returns its byte length.

    ``out`` must be sized for the longest string in the column plus slack
    (DecodeBuffer contract); no per-token bounds checks are performed.
    """
    so = column.string_offsets
    if not 0 <= i < column.n_strings:
        raise OutOfRangeError(f"string index {i} out of range ({column.n_strings})")
    toks = column.tokens[int(so[i]):int(so[i + 1])].tolist()
    offs = dictionary.offsets
    pdata = dictionary.padded_data()
    buf = out.buf
    cur = 0
    for t in toks:
        start = offs[t]
        buf[cur:cur + 16] = pdata[start:start + 16]
        length = offs[t + 1] - start
        if length > 16:
            buf[cur + 16:cur + length] = pdata[start + 16:start + length]
        cur += length
    out.length = cur
    return cur


def decompress_string(dictionary: Dictionary, column: CompressedColumn, i: int) -> bytes:
    """Decode string i in isolation; exact original bytes."""
    so = column.string_offsets
    if not 0 <= i < column.n_strings:
        raise OutOfRangeError(f"string index {i} out of range ({column.n_strings})")
    toks = column.tokens[int(so[i]):int(so[i + 1])].tolist()
    offs = dictionary.offsets
    total = 0
    for t in toks:
        total += offs[t + 1] - offs[t]
    out = DecodeBuffer(total)
    decompress_string_into(dictionary, column, i, out)
    return out.view()


def decompress_all(dictionary: Dictionary, column: CompressedColumn
                   ) -> tuple[bytes, np.ndarray]:
    """Decode the whole column at once (the full-dataset throughput path).

    Returns (concatenated strings, byte offsets of string boundaries).
    The gather is vectorized: one source index per output byte, computed
    from per-token starts and lengths.
    """
    offs = np.asarray(dictionary.offsets, dtype=np.int64)
    toks = column.tokens.astype(np.int64, copy=False)
    starts = offs[toks]
    lens = offs[toks + 1] - starts
    total = int(lens.sum())
    cum = np.zeros(len(toks) + 1, dtype=np.int64)
    np.cumsum(lens, out=cum[1:])
    # out[k] = data[starts[tok of k] + (k - output start of that token)]
    src = np.repeat(starts - cum[:-1], lens) + np.arange(total, dtype=np.int64)
    data = np.frombuffer(bytes(dictionary.data), dtype=np.uint8)
    blob = data[src].tobytes()
    boundaries = cum[column.string_offsets.astype(np.int64)]
    return blob, boundaries


# ---------------------------------------------------------------------------
# accounting
# ---------------------------------------------------------------------------

def compressed_bytes(column: CompressedColumn, dictionary: Dictionary) -> int:
    """Token stream plus dictionary footprint; per-string boundary arrays
    are excluded since the raw baseline needs boundaries too."""
    return (column.token_count * bytes_per_id(dictionary.bits_per_token)
            + dictionary.memory_footprint()["total_bytes"])


def compression_ratio(raw_bytes: int, column: CompressedColumn,
                      dictionary: Dictionary) -> float:
    return raw_bytes / compressed_bytes(column, dictionary)
