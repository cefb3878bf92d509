"""Alphabets, encoded texts, Parikh vectors, and the sliding-window matcher.

A Parikh vector counts, per alphabet symbol, how often the symbol occurs in a
string. A query vector q occurs in a text s if some substring of s has
Parikh vector q. The window matcher here answers that directly in one linear
scan and serves as the ground-truth oracle for the index-based algorithms in
the sibling modules.

Positions are 1-based in all public interfaces. Symbols are stored internally
as dense 0-based indices into the alphabet.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._accel import NUMBA_ENABLED
from . import _kernels

#: Distinguished "no such position" value. Compares greater than any text
#: position, so max-combining propagates it.
INFEASIBLE = 1 << 62


@dataclass(frozen=True)
class Alphabet:
    """Ordered alphabet of distinct single characters."""

    symbols: tuple[str, ...]

    def __post_init__(self):
        if len(self.symbols) == 0:
            raise ValueError("empty alphabet")
        for sym in self.symbols:
            if len(sym) != 1:
                raise ValueError(f"alphabet symbols must be single characters, got {sym!r}")
        if any(a >= b for a, b in zip(self.symbols, self.symbols[1:])):
            raise ValueError("alphabet symbols must be strictly increasing")

    @property
    def size(self) -> int:
        return len(self.symbols)

    def index_of(self, char: str) -> int:
        try:
            return self._index()[char]
        except KeyError:
            raise ValueError(f"character {char!r} not in alphabet") from None

    def _index(self) -> dict[str, int]:
        # Cached lazily; the dataclass is frozen so go through __dict__.
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {c: i for i, c in enumerate(self.symbols)}
            self.__dict__["_idx"] = idx
        return idx

    def encode(self, raw_text: str) -> "EncodedText":
        idx = self._index()
        try:
            data = np.fromiter((idx[c] for c in raw_text), dtype=np.int64, count=len(raw_text))
        except KeyError as exc:
            raise ValueError(f"character {exc.args[0]!r} not in alphabet") from None
        data.setflags(write=False)
        return EncodedText(self, data)


def infer_alphabet(raw_text: str) -> Alphabet:
    """Alphabet of the sorted distinct characters of ``raw_text``."""
    if len(raw_text) == 0:
        raise ValueError("empty alphabet")
    return Alphabet(tuple(sorted(set(raw_text))))


class EncodedText:
    """A text mapped onto dense symbol indices, with its alphabet."""

    __slots__ = ("alphabet", "data", "n")

    def __init__(self, alphabet: Alphabet, data: np.ndarray):
        data = np.asarray(data, dtype=np.int64)
        if data.ndim != 1:
            raise ValueError("text data must be one-dimensional")
        if data.size and (data.min() < 0 or data.max() >= alphabet.size):
            raise ValueError("symbol index out of range for alphabet")
        if data.flags.writeable:
            data = data.copy()
            data.setflags(write=False)
        self.alphabet = alphabet
        self.data = data
        self.n = int(data.size)

    @classmethod
    def from_str(cls, raw_text: str, alphabet: Alphabet | None = None) -> "EncodedText":
        if alphabet is None:
            alphabet = infer_alphabet(raw_text)
        return alphabet.encode(raw_text)

    def decode(self) -> str:
        syms = self.alphabet.symbols
        return "".join(syms[i] for i in self.data)

    def char_at(self, pos: int) -> str:
        """Character at 1-based position ``pos``."""
        if not 1 <= pos <= self.n:
            raise IndexError(f"position {pos} out of range 1..{self.n}")
        return self.alphabet.symbols[int(self.data[pos - 1])]

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, EncodedText)
            and self.alphabet == other.alphabet
            and np.array_equal(self.data, other.data)
        )


class ParikhVector:
    """Per-symbol multiplicity vector. Immutable."""

    __slots__ = ("counts",)

    def __init__(self, counts: Iterable[int] | np.ndarray):
        arr = np.asarray(list(counts) if not isinstance(counts, np.ndarray) else counts,
                         dtype=np.int64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("Parikh vector must be a nonempty 1-d sequence of counts")
        if arr.min() < 0:
            raise ValueError("Parikh vector counts must be non-negative")
        arr = arr.copy()
        arr.setflags(write=False)
        self.counts = arr

    @property
    def dim(self) -> int:
        return int(self.counts.size)

    @property
    def length(self) -> int:
        """Total count, i.e. the length of any string with this vector."""
        return int(self.counts.sum())

    def __iter__(self):
        return iter(int(c) for c in self.counts)

    def __getitem__(self, k: int) -> int:
        return int(self.counts[k])

    def __eq__(self, other) -> bool:
        other = _as_pv(other)
        return np.array_equal(self.counts, other.counts)

    def __hash__(self):
        return hash(tuple(self.counts.tolist()))

    def __repr__(self):
        return f"ParikhVector({tuple(self.counts.tolist())})"

    def __add__(self, other):
        return pv_add(self, other)

    def __sub__(self, other):
        return pv_sub(self, other)

    def __le__(self, other):
        return pv_leq(self, other)


def _as_pv(p) -> ParikhVector:
    return p if isinstance(p, ParikhVector) else ParikhVector(p)


def _check_dims(p: ParikhVector, q: ParikhVector) -> None:
    if p.dim != q.dim:
        raise ValueError(f"dimension mismatch: {p.dim} vs {q.dim}")


def pv_leq(p, q) -> bool:
    """Componentwise ``p <= q``."""
    p, q = _as_pv(p), _as_pv(q)
    _check_dims(p, q)
    return bool(np.all(p.counts <= q.counts))


def pv_add(p, q) -> ParikhVector:
    p, q = _as_pv(p), _as_pv(q)
    _check_dims(p, q)
    return ParikhVector(p.counts + q.counts)


def pv_sub(p, q) -> ParikhVector:
    """Componentwise ``p - q``; requires ``q <= p``."""
    p, q = _as_pv(p), _as_pv(q)
    _check_dims(p, q)
    if not np.all(q.counts <= p.counts):
        raise ValueError("pv_sub would produce a negative component")
    return ParikhVector(p.counts - q.counts)


def parikh(text: EncodedText, start: int = 1, end: int | None = None) -> ParikhVector:
    """Parikh vector of the 1-based inclusive slice ``text[start..end]``.

    The empty slice (``end == start - 1``) yields the zero vector. Defaults
    cover the whole text.
    """
    n = text.n
    if end is None:
        end = n
    if not (1 <= start <= n + 1) or not (0 <= end <= n) or end < start - 1:
        raise IndexError(f"slice [{start}..{end}] out of range for text of length {n}")
    counts = np.bincount(text.data[start - 1:end], minlength=text.alphabet.size)
    return ParikhVector(counts.astype(np.int64))


@dataclass(frozen=True)
class Occurrence:
    """Substring occurrence as a 1-based inclusive position pair."""

    start: int
    end: int

    def __post_init__(self):
        if not 1 <= self.start <= self.end:
            raise ValueError(f"invalid occurrence ({self.start}, {self.end})")

    @property
    def length(self) -> int:
        return self.end - self.start + 1


def _validate_query(text: EncodedText, q) -> ParikhVector:
    q = _as_pv(q)
    if q.dim != text.alphabet.size:
        raise ValueError(
            f"query dimension {q.dim} does not match alphabet size {text.alphabet.size}"
        )
    if q.length == 0:
        raise ValueError("empty query")
    return q


def window_search(text: EncodedText, q, *, debug_recount_every: int = 0) -> list[Occurrence]:
    """All occurrences of ``q`` in ``text``, ascending by start position.

    A fixed-size window slides once over the text, maintaining the window's
    Parikh vector ``c`` and a mismatch counter ``r`` (number of symbols whose
    window count differs from the query), both updated in O(1) per shift.
    ``debug_recount_every`` > 0 re-derives ``c`` from scratch every that many
    shifts and asserts agreement (used by the test suite).
    """
    starts, _ = window_search_starts(text, q, debug_recount_every=debug_recount_every)
    m = _as_pv(q).length
    return [Occurrence(int(s), int(s) + m - 1) for s in starts]


def window_search_starts(text: EncodedText, q, *, debug_recount_every: int = 0):
    """Occurrence start positions plus the count of window update steps."""
    q = _validate_query(text, q)
    m = q.length
    n = text.n
    if m > n:
        return np.empty(0, dtype=np.int64), 0
    if NUMBA_ENABLED and debug_recount_every == 0:
        out = np.empty(n - m + 1, dtype=np.int64)
        cnt, steps = _kernels.window_scan(text.data, q.counts, m, out)
        return out[:cnt].copy(), int(steps)
    if debug_recount_every > 0:
        return _window_scan_debug(text, q, m, debug_recount_every)
    return _window_scan_numpy(text, q, m)


def _window_scan_numpy(text: EncodedText, q: ParikhVector, m: int):
    # Vectorized fallback: prefix-count differences give every window's vector.
    sigma = text.alphabet.size
    onehot = np.zeros((text.n + 1, sigma), dtype=np.int64)
    onehot[np.arange(1, text.n + 1), text.data] = 1
    prefix = np.cumsum(onehot, axis=0)
    windows = prefix[m:] - prefix[:-m]
    hits = np.all(windows == q.counts, axis=1)
    # Step accounting mirrors the scanning algorithm: m initial updates plus
    # 0 or 2 per shift depending on whether the boundary characters differ.
    diffs = int(np.count_nonzero(text.data[m:] != text.data[: text.n - m]))
    steps = m + 2 * diffs
    return np.flatnonzero(hits).astype(np.int64) + 1, steps


def _window_scan_debug(text: EncodedText, q: ParikhVector, m: int, every: int):
    data = text.data
    sigma = text.alphabet.size
    c = np.bincount(data[:m], minlength=sigma).astype(np.int64)
    r = int(np.count_nonzero(c != q.counts))
    steps = m
    starts = []
    if r == 0:
        starts.append(1)
    for start in range(2, text.n - m + 2):
        out_sym = data[start - 2]
        in_sym = data[start + m - 2]
        if out_sym != in_sym:
            for sym, delta in ((out_sym, -1), (in_sym, 1)):
                if c[sym] == q.counts[sym]:
                    r += 1
                c[sym] += delta
                if c[sym] == q.counts[sym]:
                    r -= 1
                steps += 1
        if every and (start % every == 0):
            recount = np.bincount(data[start - 1:start + m - 1], minlength=sigma)
            assert np.array_equal(c, recount), "window vector drifted from recount"
        if r == 0:
            starts.append(start)
    return np.asarray(starts, dtype=np.int64), steps


def brute_force_starts(text: EncodedText, q) -> list[int]:
    """Quadratic all-substrings oracle; reference only, used by tests."""
    q = _validate_query(text, q)
    m = q.length
    target = q.counts
    sigma = text.alphabet.size
    starts = []
    for i in range(1, text.n - m + 2):
        seg = np.bincount(text.data[i - 1:i - 1 + m], minlength=sigma)
        if np.array_equal(seg, target):
            starts.append(i)
    return starts


# ---------------------------------------------------------------------------
# Loaders


def load_text(path) -> str:
    """Plain loader: file bytes, one character per byte."""
    with open(path, "rb") as fh:
        return fh.read().decode("latin-1")


def load_fasta(path) -> list[tuple[str, str]]:
    """FASTA loader: list of (record name, uppercased sequence) pairs."""
    records: list[tuple[str, list[str]]] = []
    with open(path, "rb") as fh:
        text = fh.read().decode("latin-1")
    current: list[str] | None = None
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith(">"):
            name = line[1:].split()[0] if len(line) > 1 else f"record{len(records) + 1}"
            current = []
            records.append((name, current))
        else:
            if current is None:
                current = []
                records.append(("record1", current))
            current.append(line.upper())
    return [(name, "".join(parts)) for name, parts in records]


def concat_fasta(records: Sequence[tuple[str, str]]) -> str:
    return "".join(seq for _, seq in records)
