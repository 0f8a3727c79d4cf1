"""Token dictionary: contiguous entry bytes plus an offset table.

Layout mirrors the decoder's needs: all entry contents live in one
contiguous byte region (``data``) in token-ID order, and ``offsets[i]``
points at the first byte of entry ``i``.  The length of an entry is the
difference between consecutive offsets, so no per-entry length field is
stored.  Entries 0..255 are always the single-byte identity tokens.

File format (little-endian):

  MAGIC "SSDC" (4) | version u8 = 1 | variant u8 (0=unbounded, 1=bounded-16)
  | bits_per_token u8 | reserved u8 | entry_count u32
  | offsets: (entry_count+1) x u32 | data: offsets[entry_count] bytes
"""

from __future__ import annotations

import hashlib
import struct
from array import array

from .errors import CapacityError, ConfigError, EntryLengthError, FormatError, OutOfRangeError

TokenId = int

MAGIC = b"SSDC"
VERSION = 1

VARIANT_UNBOUNDED = "unbounded"
VARIANT_BOUNDED16 = "bounded16"

BOUNDED_MAX_LEN = 16
UNBOUNDED_MAX_LEN = 2**32  # practically unbounded

MIN_BITS = 9
MAX_BITS = 21
DEFAULT_BITS = 16

# Slack appended to the read-side copy of `data` so a fixed-width copy of
# the final entry never reads past the end of the region.
DATA_SLACK = 16

_HEADER = struct.Struct("<4sBBBBI")


def max_entry_len_for(variant: str) -> int:
    if variant == VARIANT_BOUNDED16:
        return BOUNDED_MAX_LEN
    if variant == VARIANT_UNBOUNDED:
        return UNBOUNDED_MAX_LEN
    raise ConfigError(f"unknown variant: {variant!r}")


class Dictionary:
    """Append-only token dictionary.

    Mutation happens only during training; afterwards the structure is
    immutable and safe to share read-only across threads.
    """

    __slots__ = ("data", "offsets", "max_entry_len", "bits_per_token",
                 "_hash", "_padded")

    def __init__(self, data: bytearray, offsets: list[int],
                 max_entry_len: int, bits_per_token: int):
        self.data = data
        self.offsets = offsets
        self.max_entry_len = max_entry_len
        self.bits_per_token = bits_per_token
        self._hash: bytes | None = None
        self._padded: bytes | None = None

    # -- basic accessors -------------------------------------------------

    @property
    def entry_count(self) -> int:
        return len(self.offsets) - 1

    @property
    def capacity(self) -> int:
        return 1 << self.bits_per_token

    @property
    def variant(self) -> str:
        return VARIANT_BOUNDED16 if self.max_entry_len == BOUNDED_MAX_LEN else VARIANT_UNBOUNDED

    def entry_len(self, token_id: TokenId) -> int:
        return self.offsets[token_id + 1] - self.offsets[token_id]

    def token_bytes(self, token_id: TokenId) -> bytes:
        """Content of entry ``token_id``."""
        if not 0 <= token_id < self.entry_count:
            raise OutOfRangeError(
                f"token id {token_id} out of range (entry_count={self.entry_count})")
        return bytes(self.data[self.offsets[token_id]:self.offsets[token_id + 1]])

    def entries(self):
        """Iterate entry contents in token-ID order."""
        data, offs = self.data, self.offsets
        for i in range(self.entry_count):
            yield bytes(data[offs[i]:offs[i + 1]])

    # -- mutation (training phase only) ----------------------------------

    def append_token(self, content: bytes) -> TokenId:
        """Append a new entry; returns its token ID."""
        if self.entry_count >= self.capacity:
            raise CapacityError(
                f"dictionary full ({self.entry_count} entries at {self.bits_per_token} bits)")
        if not 1 <= len(content) <= self.max_entry_len:
            raise EntryLengthError(
                f"entry length {len(content)} outside [1, {self.max_entry_len}]")
        new_id = self.entry_count
        self.data.extend(content)
        self.offsets.append(len(self.data))
        self._hash = None
        self._padded = None
        return new_id

    # -- decoding support -------------------------------------------------

    def padded_data(self) -> bytes:
        """Immutable copy of ``data`` with trailing slack so decoders can
        always copy a fixed 16-byte window from any entry start."""
        if self._padded is None:
            self._padded = bytes(self.data) + b"\x00" * DATA_SLACK
        return self._padded

    # -- accounting --------------------------------------------------------

    def memory_footprint(self) -> dict:
        offsets_bytes = 4 * (self.entry_count + 1)
        data_bytes = self.offsets[self.entry_count]
        return {
            "total_bytes": offsets_bytes + data_bytes,
            "data_bytes": data_bytes,
            "offsets_bytes": offsets_bytes,
        }

    def content_hash(self) -> bytes:
        """8-byte digest of the full structural state; pairs columns with
        the dictionary that produced them."""
        if self._hash is None:
            h = hashlib.blake2b(digest_size=8)
            h.update(struct.pack("<BBI", 1 if self.max_entry_len == BOUNDED_MAX_LEN else 0,
                                 self.bits_per_token, self.entry_count))
            h.update(array("I", self.offsets).tobytes())
            h.update(bytes(self.data))
            self._hash = h.digest()
        return self._hash

    # -- serialization ------------------------------------------------------

    def to_bytes(self) -> bytes:
        if self.max_entry_len == BOUNDED_MAX_LEN:
            variant_code = 1
        elif self.max_entry_len == UNBOUNDED_MAX_LEN:
            variant_code = 0
        else:
            raise FormatError(
                f"only the 16-byte-bounded and unbounded variants are serializable "
                f"(max_entry_len={self.max_entry_len})")
        if self.offsets[-1] >= 2**32:
            raise FormatError("data region too large for 32-bit offsets")
        header = _HEADER.pack(MAGIC, VERSION, variant_code,
                              self.bits_per_token, 0, self.entry_count)
        return header + array("I", self.offsets).tobytes() + bytes(self.data)

    @classmethod
    def from_bytes(cls, blob: bytes) -> "Dictionary":
        if len(blob) < _HEADER.size:
            raise FormatError("truncated header")
        magic, version, variant_code, bits, _reserved, entry_count = _HEADER.unpack_from(blob)
        if magic != MAGIC:
            raise FormatError("bad magic; not a dictionary file")
        if version != VERSION:
            raise FormatError(f"unsupported version {version}")
        if variant_code not in (0, 1):
            raise FormatError(f"unknown variant code {variant_code}")
        if not MIN_BITS <= bits <= MAX_BITS:
            raise FormatError(f"bits_per_token {bits} outside [{MIN_BITS}, {MAX_BITS}]")
        off_start = _HEADER.size
        off_end = off_start + 4 * (entry_count + 1)
        if len(blob) < off_end:
            raise FormatError("truncated offsets array")
        offsets = array("I")
        offsets.frombytes(blob[off_start:off_end])
        data_len = offsets[-1] if entry_count >= 0 else 0
        if len(blob) != off_end + data_len:
            raise FormatError("data region length mismatch")
        max_len = BOUNDED_MAX_LEN if variant_code == 1 else UNBOUNDED_MAX_LEN
        d = cls(bytearray(blob[off_end:]), offsets.tolist(), max_len, bits)
        d.validate()
        return d

    def save(self, path) -> None:
        with open(path, "wb") as f:
            f.write(self.to_bytes())

    @classmethod
    def load(cls, path) -> "Dictionary":
        with open(path, "rb") as f:
            return cls.from_bytes(f.read())

    # -- invariants -----------------------------------------------------------

    def validate(self) -> None:
        """Raise FormatError if any structural invariant is violated."""
        n = self.entry_count
        offs = self.offsets
        if not 256 <= n <= self.capacity:
            raise FormatError(f"entry count {n} outside [256, {self.capacity}]")
        if offs[0] != 0:
            raise FormatError("offsets[0] must be 0")
        if len(self.data) != offs[n]:
            raise FormatError("data length does not match final offset")
        prev = 0
        max_len = self.max_entry_len
        for i in range(1, n + 1):
            step = offs[i] - prev
            if not 1 <= step <= max_len:
                raise FormatError(f"entry {i - 1} has invalid length {step}")
            prev = offs[i]
        if bytes(self.data[:256]) != bytes(range(256)) or offs[256] != 256:
            raise FormatError("entries 0..255 must be the single-byte identity tokens")

    def __eq__(self, other) -> bool:
        return (isinstance(other, Dictionary)
                and self.data == other.data
                and self.offsets == other.offsets
                and self.max_entry_len == other.max_entry_len
                and self.bits_per_token == other.bits_per_token)

    def __repr__(self) -> str:
        return (f"Dictionary(entries={self.entry_count}, bits={self.bits_per_token}, "
                f"variant={self.variant})")


def new_base_dictionary(bits_per_token: int = DEFAULT_BITS,
                        max_entry_len: int = BOUNDED_MAX_LEN) -> Dictionary:
    """Dictionary holding exactly the 256 single-byte identity tokens."""
    if not MIN_BITS <= bits_per_token <= MAX_BITS:
        raise ConfigError(
            f"bits_per_token {bits_per_token} outside [{MIN_BITS}, {MAX_BITS}]")
    if max_entry_len < 2:
        raise ConfigError(f"max_entry_len {max_entry_len} must be >= 2")
    return Dictionary(bytearray(range(256)), list(range(257)),
                      max_entry_len, bits_per_token)
