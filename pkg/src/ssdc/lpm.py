"""Longest-prefix-match engines over dictionary entries.

Patterns are split by length at 8 bytes, the width of one packed machine
word:

  short (<= 8 B)   one hash map keyed by (packed word, length)
  long  (> 8 B)    buckets keyed by the first 8 bytes; each bucket holds
                   (suffix, length, token id) sorted by descending suffix
                   length so a scan can stop at the first hit

Two engines share that layout.  DynamicMatcher supports insertion and is
used during training and for parsing with the unbounded variant, whose
suffixes can exceed 8 bytes.  StaticMatcher is a frozen, read-optimized
form for the 16-byte-bounded variant: a minimal perfect hash maps each
8-byte prefix straight to a fixed-size bucket record that carries the two
longest suffixes inline (suffixes are at most 8 bytes, so each fits in one
packed word) and points into a shared overflow vector for the rest.

All byte-wise prefix tests on short data reduce to XOR plus a mask on
packed 64-bit words; see shared_prefix_size / is_prefix.
"""

from __future__ import annotations

from typing import NamedTuple, Optional

from .dictionary import BOUNDED_MAX_LEN, Dictionary, UNBOUNDED_MAX_LEN
from .errors import (BucketFullError, ConfigError, EntryLengthError,
                     PerfectHashError, SsdcError)

U64 = (1 << 64) - 1

# MASKS[l] selects the low l bytes of a packed word.
MASKS = tuple((1 << (8 * l)) - 1 for l in range(9))

DEFAULT_MAX_BUCKET = 128
INLINE_SUFFIXES = 2


# ---------------------------------------------------------------------------
# packed 64-bit words
# ---------------------------------------------------------------------------

class PackedWord(NamedTuple):
    """Up to 8 bytes packed little-endian into one integer.

    Byte 0 of the source string sits in the lowest-order byte; bytes past
    ``len`` are zero.
    """
    word: int
    len: int


def pack(content: bytes) -> PackedWord:
    if len(content) > 8:
        raise EntryLengthError(f"cannot pack {len(content)} bytes into a 64-bit word")
    return PackedWord(int.from_bytes(content, "little"), len(content))


def unpack(pw: PackedWord) -> bytes:
    return pw.word.to_bytes(8, "little")[:pw.len]


def shared_prefix_size(s1: PackedWord, s2: PackedWord) -> int:
    """Number of equal low-order bytes between two packed words (0..8)."""
    diff = (s1.word ^ s2.word) & U64
    if diff == 0:
        return 8
    # count_trailing_zeros(diff) // 8 via the lowest set bit
    return ((diff & -diff).bit_length() - 1) // 8


def is_prefix(inp: PackedWord, prefix: PackedWord) -> bool:
    """True iff ``prefix``'s bytes are a prefix of ``inp``'s bytes.

    The length guard comes first: zero padding makes shorter words compare
    equal in their high bytes, so shared_prefix_size alone would accept a
    'prefix' longer than the input.
    """
    return prefix.len <= inp.len and shared_prefix_size(inp, prefix) >= prefix.len


# ---------------------------------------------------------------------------
# dynamic matcher
# ---------------------------------------------------------------------------

def _short_key(word: int, length: int) -> int:
    # length in 1..8 occupies the low 3 bits below the packed word
    return (word << 3) | (length - 1)


class DynamicMatcher:
    """Mutable LPM engine used during training and for unbounded parsing.

    short_map keys combine packed word and length (see _short_key); bucket
    entries are (suffix_len, suffix_word | None, suffix_bytes, token_id)
    with suffix_word set only when the suffix fits in 8 bytes.
    """

    __slots__ = ("short_map", "long_buckets", "max_entry_len", "max_bucket_size")

    def __init__(self, max_entry_len: int = UNBOUNDED_MAX_LEN,
                 max_bucket_size: Optional[int] = None):
        self.short_map: dict[int, int] = {}
        self.long_buckets: dict[int, list] = {}
        self.max_entry_len = max_entry_len
        self.max_bucket_size = max_bucket_size

    def insert(self, content: bytes, token_id: int) -> None:
        """Register a pattern; keeps each bucket in descending-length order
        (stable among equal lengths).  The matcher is unchanged on error."""
        n = len(content)
        if not 1 <= n <= self.max_entry_len:
            raise EntryLengthError(f"pattern length {n} outside [1, {self.max_entry_len}]")
        if self.lookup_exact(content) is not None:
            raise ConfigError(f"pattern {content!r} already present")
        if n <= 8:
            self.short_map[_short_key(int.from_bytes(content, "little"), n)] = token_id
            return
        prefix = int.from_bytes(content[:8], "little")
        bucket = self.long_buckets.get(prefix)
        if bucket is None:
            bucket = self.long_buckets[prefix] = []
        elif self.max_bucket_size is not None and len(bucket) >= self.max_bucket_size:
            raise BucketFullError(
                f"bucket for prefix {content[:8]!r} holds {len(bucket)} suffixes")
        suffix = bytes(content[8:])
        slen = n - 8
        sword = int.from_bytes(suffix, "little") if slen <= 8 else None
        i = 0
        while i < len(bucket) and bucket[i][0] >= slen:
            i += 1
        bucket.insert(i, (slen, sword, suffix, token_id))

    def has_room(self, content: bytes) -> bool:
        """Whether insert(content) would not hit the bucket cap."""
        if len(content) <= 8 or self.max_bucket_size is None:
            return True
        bucket = self.long_buckets.get(int.from_bytes(content[:8], "little"))
        return bucket is None or len(bucket) < self.max_bucket_size

    def lookup_exact(self, content: bytes) -> Optional[int]:
        n = len(content)
        if n == 0:
            return None
        if n <= 8:
            return self.short_map.get(_short_key(int.from_bytes(content, "little"), n))
        bucket = self.long_buckets.get(int.from_bytes(content[:8], "little"))
        if bucket is None:
            return None
        suffix = content[8:]
        slen = n - 8
        for blen, _bword, bbytes, tid in bucket:
            if blen < slen:
                break
            if blen == slen and bbytes == suffix:
                return tid
        return None

    def longest_match(self, data, pos: int, end: int) -> tuple[int, int]:
        """Longest pattern prefixing data[pos:end] as (token_id, length).

        Comparisons never read past ``end``: every word compare is masked
        to the candidate length and candidates longer than the remaining
        input are skipped.
        """
        rem = end - pos
        w8 = int.from_bytes(data[pos:pos + 8], "little")
        if rem > 8:
            bucket = self.long_buckets.get(w8)
            if bucket is not None:
                avail = rem - 8
                w2 = -1
                for slen, sword, sbytes, tid in bucket:
                    if slen > avail:
                        continue
                    if sword is not None:
                        if w2 < 0:
                            w2 = int.from_bytes(data[pos + 8:pos + 16], "little")
                        if not ((w2 ^ sword) & MASKS[slen]):
                            return tid, 8 + slen
                    elif data.startswith(sbytes, pos + 8):
                        return tid, 8 + slen
        smap = self.short_map
        for l in range(rem if rem < 8 else 8, 0, -1):
            tid = smap.get(((w8 & MASKS[l]) << 3) | (l - 1))
            if tid is not None:
                return tid, l
        raise SsdcError("no match; matcher is missing single-byte patterns")

    def iter_patterns(self):
        """Yield (pattern bytes, token id) in no particular order."""
        for key, tid in self.short_map.items():
            length = (key & 0x7) + 1
            yield (key >> 3).to_bytes(8, "little")[:length], tid
        for prefix, bucket in self.long_buckets.items():
            pbytes = prefix.to_bytes(8, "little")
            for _slen, _sword, sbytes, tid in bucket:
                yield pbytes + sbytes, tid

    def pattern_count(self) -> int:
        return len(self.short_map) + sum(len(b) for b in self.long_buckets.values())


# ---------------------------------------------------------------------------
# minimal perfect hash over 64-bit keys (displacement construction)
# ---------------------------------------------------------------------------

def _mix64(x: int) -> int:
    x &= U64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & U64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & U64
    return x ^ (x >> 31)


def _slot(key: int, d: int, seed: int, m: int) -> int:
    return _mix64(key ^ _mix64(seed ^ d)) % m


_PHF_SEED_TRIES = 32
_PHF_MAX_DISPLACEMENT = 100_000


def _try_build_phf(keys: list[int], seed: int, m: int) -> Optional[list[int]]:
    first = [[] for _ in range(m)]
    for key in keys:
        first[_slot(key, 0, seed, m)].append(key)
    order = sorted((b for b in range(m) if first[b]), key=lambda b: -len(first[b]))
    g = [0] * m
    used = [False] * m
    singles = []
    for b in order:
        bkeys = first[b]
        if len(bkeys) == 1:
            singles.append(b)
            continue
        for d in range(1, _PHF_MAX_DISPLACEMENT):
            slots = [_slot(k, d, seed, m) for k in bkeys]
            if len(set(slots)) == len(slots) and not any(used[s] for s in slots):
                g[b] = d
                for s in slots:
                    used[s] = True
                break
        else:
            return None
    free = (i for i in range(m) if not used[i])
    for b in singles:
        # negative value encodes a direct slot assignment
        g[b] = -(next(free) + 1)
    return g


def _build_phf(keys: list[int]) -> tuple[int, list[int]]:
    m = len(keys)
    base = 0x9E3779B97F4A7C15
    for attempt in range(_PHF_SEED_TRIES):
        seed = _mix64(base * (attempt + 1))
        g = _try_build_phf(keys, seed, m)
        if g is not None:
            return seed, g
    raise PerfectHashError(f"no collision-free seed found for {m} keys "
                           f"after {_PHF_SEED_TRIES} attempts")


def _phf_slot(key: int, seed: int, g: list[int], m: int) -> int:
    d = g[_slot(key, 0, seed, m)]
    return -d - 1 if d < 0 else _slot(key, d, seed, m)


# ---------------------------------------------------------------------------
# static matcher (16-byte-bounded variant)
# ---------------------------------------------------------------------------

class StaticMatcher:
    """Frozen LPM engine for dictionaries whose entries are <= 16 bytes.

    bucket_infos[i] is the record
      (prefix, s1_len, s1_word, s1_id, s2_len, s2_word, s2_id,
       overflow_offset, overflow_size)
    holding the bucket's two longest suffixes inline; s*_len = 0 marks an
    empty inline slot, overflow_offset is None when nothing spilled.  The
    stored prefix guards against perfect-hash hits from absent keys.
    """

    __slots__ = ("short_map", "bucket_infos", "overflow", "phf_seed", "_g",
                 "_m", "max_entry_len")

    def __init__(self, short_map: dict[int, int], bucket_infos: list,
                 overflow: list, phf_seed: int, g: list[int], max_entry_len: int):
        self.short_map = short_map
        self.bucket_infos = bucket_infos
        self.overflow = overflow
        self.phf_seed = phf_seed
        self._g = g
        self._m = len(bucket_infos)
        self.max_entry_len = max_entry_len

    def longest_match(self, data, pos: int, end: int) -> tuple[int, int]:
        rem = end - pos
        w8 = int.from_bytes(data[pos:pos + 8], "little")
        if rem > 8 and self._m:
            d = self._g[_mix64(w8 ^ _mix64(self.phf_seed)) % self._m]
            slot = -d - 1 if d < 0 else _mix64(w8 ^ _mix64(self.phf_seed ^ d)) % self._m
            info = self.bucket_infos[slot]
            if info[0] == w8:
                avail = rem - 8
                w2 = int.from_bytes(data[pos + 8:pos + 16], "little")
                s1l = info[1]
                if s1l and s1l <= avail and not ((w2 ^ info[2]) & MASKS[s1l]):
                    return info[3], 8 + s1l
                s2l = info[4]
                if s2l and s2l <= avail and not ((w2 ^ info[5]) & MASKS[s2l]):
                    return info[6], 8 + s2l
                if info[8]:
                    base = info[7]
                    for i in range(base, base + info[8]):
                        slen, sword, tid = self.overflow[i]
                        if slen <= avail and not ((w2 ^ sword) & MASKS[slen]):
                            return tid, 8 + slen
        smap = self.short_map
        for l in range(rem if rem < 8 else 8, 0, -1):
            tid = smap.get(((w8 & MASKS[l]) << 3) | (l - 1))
            if tid is not None:
                return tid, l
        raise SsdcError("no match; matcher is missing single-byte patterns")


def finalize(dyn: DynamicMatcher) -> StaticMatcher:
    """Freeze a DynamicMatcher into the perfect-hash layout.

    Only valid when every entry fits in 16 bytes (suffixes <= 8 bytes pack
    into single words).  Search results are extensionally identical to the
    dynamic matcher's.
    """
    if dyn.max_entry_len > BOUNDED_MAX_LEN:
        raise ConfigError("static matcher requires entries of at most 16 bytes")
    prefixes = list(dyn.long_buckets)
    m = len(prefixes)
    if m:
        seed, g = _build_phf(prefixes)
    else:
        seed, g = 0, []
    infos: list = [None] * m
    overflow: list = []
    for prefix, bucket in dyn.long_buckets.items():
        slot = _phf_slot(prefix, seed, g, m)
        if infos[slot] is not None:
            raise PerfectHashError("slot collision; construction is inconsistent")
        inline = bucket[:INLINE_SUFFIXES]
        rest = bucket[INLINE_SUFFIXES:]
        if rest:
            ov_off, ov_size = len(overflow), len(rest)
            overflow.extend((slen, sword, tid) for slen, sword, _sb, tid in rest)
        else:
            ov_off, ov_size = None, 0
        s1l, s1w, s1t = inline[0][0], inline[0][1], inline[0][3]
        if len(inline) > 1:
            s2l, s2w, s2t = inline[1][0], inline[1][1], inline[1][3]
        else:
            s2l, s2w, s2t = 0, 0, 0
        infos[slot] = (prefix, s1l, s1w, s1t, s2l, s2w, s2t, ov_off, ov_size)
    return StaticMatcher(dict(dyn.short_map), infos, overflow, seed, g,
                         dyn.max_entry_len)


# ---------------------------------------------------------------------------
# construction from a dictionary
# ---------------------------------------------------------------------------

def build_matcher(dictionary: Dictionary) -> DynamicMatcher:
    """Dynamic matcher over every dictionary entry (identity tokens included)."""
    cap = DEFAULT_MAX_BUCKET if dictionary.max_entry_len == BOUNDED_MAX_LEN else None
    matcher = DynamicMatcher(dictionary.max_entry_len, cap)
    for tid, content in enumerate(dictionary.entries()):
        matcher.insert(content, tid)
    return matcher


def parsing_matcher(dictionary: Dictionary):
    """The parse-time engine for a dictionary: static for the 16-byte-bounded
    variant, dynamic otherwise."""
    dyn = build_matcher(dictionary)
    if dictionary.max_entry_len == BOUNDED_MAX_LEN:
        return finalize(dyn)
    return dyn


def lpm_search(matcher, buf) -> tuple[int, int]:
    """Longest dictionary entry prefixing ``buf`` as (token_id, match_len)."""
    return matcher.longest_match(buf, 0, len(buf))
