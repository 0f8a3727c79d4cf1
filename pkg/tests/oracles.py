"""Independent reference implementations the tests compare against.

Each oracle answers a question the library answers, using the dumbest
correct method available (byte-wise scans, linear search), so agreement
is meaningful evidence rather than a tautology.
"""


def brute_force_lpm(entries, data, pos=0, end=None):
    """Longest entry prefixing data[pos:end] by linear scan.

    ``entries`` is a list of (content, token_id) covering the whole
    dictionary, single-byte entries included.  Entries are unique, so ties
    cannot occur and 'first hit among length-sorted entries' is THE answer.
    """
    if end is None:
        end = len(data)
    window = bytes(data[pos:end])
    best = None
    for content, tid in entries:
        if window.startswith(content):
            if best is None or len(content) > len(best[1]):
                best = (tid, content)
    assert best is not None, "single-byte entries guarantee a match"
    return best[0], len(best[1])


def word_shared_prefix_oracle(a: bytes, b: bytes) -> int:
    """shared_prefix_size reference: compare the zero-padded 8-byte forms."""
    pa = a + b"\x00" * (8 - len(a))
    pb = b + b"\x00" * (8 - len(b))
    n = 0
    while n < 8 and pa[n] == pb[n]:
        n += 1
    return n


def is_byte_prefix(prefix: bytes, data: bytes) -> bool:
    return data.startswith(prefix)


def greedy_tokenize(entries, data):
    """Reference greedy parse: repeatedly take the brute-force LPM."""
    out = []
    pos = 0
    while pos < len(data):
        tid, length = brute_force_lpm(entries, data, pos)
        out.append(tid)
        pos += length
    return out
