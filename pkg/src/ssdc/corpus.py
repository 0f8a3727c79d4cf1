"""Corpus ingestion and the uncompressed baseline.

A corpus is one contiguous byte blob plus n+1 boundary offsets; string i
is data[boundaries[i]:boundaries[i+1]].  Input files are LF-delimited
text: LF separates records and is not part of any string, one trailing CR
per line is stripped for cross-platform files, and a final line without a
trailing LF still counts.  Empty lines are records.

Also provides a deterministic natural-text-like generator used by tests
and benchmarks, so quality measurements run without external datasets.
All of its randomness reduces to random.Random.random(), whose sequence
is stable across Python versions.
"""

from __future__ import annotations

import random
from bisect import bisect_right

from .errors import OutOfRangeError

MIB = 1 << 20


class Corpus:
    """Immutable set of byte strings with zero-copy indexed access."""

    __slots__ = ("data", "boundaries", "name", "_strings", "_view")

    def __init__(self, data: bytes, boundaries: list[int], name: str = ""):
        self.data = data
        self.boundaries = boundaries
        self.name = name
        self._strings: list[bytes] | None = None
        self._view = memoryview(data)

    @property
    def rows(self) -> int:
        return len(self.boundaries) - 1

    @property
    def total_bytes(self) -> int:
        return self.boundaries[-1]

    @property
    def strings(self) -> list[bytes]:
        """Materialized list of all strings (cached)."""
        if self._strings is None:
            b = self.boundaries
            data = self.data
            self._strings = [data[b[i]:b[i + 1]] for i in range(self.rows)]
        return self._strings

    def raw_access(self, i: int) -> memoryview:
        """Zero-copy view of string i; the uncompressed access baseline."""
        if not 0 <= i < self.rows:
            raise OutOfRangeError(f"string index {i} out of range ({self.rows})")
        return self._view[self.boundaries[i]:self.boundaries[i + 1]]

    def stats(self) -> dict:
        rows = self.rows
        total = self.total_bytes
        return {
            "size_mib": total / MIB,
            "rows": rows,
            "avg_len_bytes": total / rows if rows else 0.0,
        }


def corpus_from_strings(strings, name: str = "") -> Corpus:
    boundaries = [0]
    acc = 0
    for s in strings:
        acc += len(s)
        boundaries.append(acc)
    return Corpus(b"".join(strings), boundaries, name)


def load_lines(path, limit_bytes: int | None = None, name: str | None = None) -> Corpus:
    """Load an LF-delimited corpus, optionally capped at limit_bytes.

    When the cap cuts the file mid-line, the partial trailing record is
    dropped so a truncated load still holds only complete lines.
    """
    with open(path, "rb") as f:
        blob = f.read(limit_bytes) if limit_bytes is not None else f.read()
    if limit_bytes is not None and len(blob) == limit_bytes and not blob.endswith(b"\n"):
        cut = blob.rfind(b"\n")
        blob = blob[:cut + 1] if cut >= 0 else b""
    lines = blob.split(b"\n")
    if lines and lines[-1] == b"":
        lines.pop()  # trailing LF terminates the last record, not an empty one
    stripped = [ln[:-1] if ln.endswith(b"\r") else ln for ln in lines]
    return corpus_from_strings(stripped, name or str(path))


def write_lines(path, strings) -> None:
    """Write strings as LF-terminated lines (the load_lines inverse)."""
    with open(path, "wb") as f:
        for s in strings:
            f.write(s)
            f.write(b"\n")


# ---------------------------------------------------------------------------
# deterministic text generator
# ---------------------------------------------------------------------------

_SYLLABLES = [
    "ta", "ri", "mon", "ke", "lor", "vin", "sa", "du", "pra", "nel",
    "go", "sha", "ber", "li", "tor", "man", "del", "cu", "ros", "pen", "ha",
    "mi", "ver", "ol", "qua", "zen", "fi", "gar", "ten", "bo", "lux",
]

_LINE_MIN_WORDS = 5
_LINE_MAX_WORDS = 12


def _draw(rng: random.Random, cumweights: list[float]) -> int:
    # inverse-CDF sampling pinned to rng.random() for long-term stability
    return bisect_right(cumweights, rng.random() * cumweights[-1])


def synthetic_text_corpus(target_bytes: int = 4 * MIB, seed: int = 2024,
                          name: str = "synthetic") -> Corpus:
    """Natural-text-like corpus: Zipf-weighted invented vocabulary with
    first-order word transitions, 5 to 12 words per line.

    Deterministic in (target_bytes, seed); total size lands within one
    line of target_bytes.
    """
    rng = random.Random(seed)
    vocab: list[str] = []
    seen = set()
    while len(vocab) < 420:
        n_syl = 2 + (rng.random() < 0.35)
        w = "".join(_SYLLABLES[int(rng.random() * len(_SYLLABLES))]
                    for _ in range(n_syl))
        if w not in seen:
            seen.add(w)
            vocab.append(w)
    # global Zipf frequencies over the vocabulary
    cum = []
    acc = 0.0
    for i in range(len(vocab)):
        acc += 1.0 / (i + 1) ** 1.15
        cum.append(acc)
    # per-word successor tables: a handful of likely next words
    succ_cum = [0.35, 0.60, 0.75, 0.85, 0.93, 1.0]
    successors = [[_draw(rng, cum) for _ in range(len(succ_cum))]
                  for _ in range(len(vocab))]
    lines: list[bytes] = []
    total = 0
    while total < target_bytes:
        n_words = _LINE_MIN_WORDS + int(rng.random()
                                        * (_LINE_MAX_WORDS - _LINE_MIN_WORDS + 1))
        wi = _draw(rng, cum)
        words = [vocab[wi]]
        for _ in range(n_words - 1):
            if rng.random() < 0.85:
                wi = successors[wi][_draw(rng, succ_cum)]
            else:
                wi = _draw(rng, cum)
            words.append(vocab[wi])
        line = " ".join(words).encode("ascii")
        lines.append(line)
        total += len(line)
    return corpus_from_strings(lines, name)
