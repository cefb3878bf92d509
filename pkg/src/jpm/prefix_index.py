"""Inverted prefix table: per-symbol sorted occurrence positions.

Row k lists the positions of symbol k in ascending order, preceded by a 0
entry, so row[j] is the position of the j-th occurrence and also the first
prefix length whose count of symbol k reaches j. This makes firstfit a single
lookup per symbol and prefix counts a bounded binary search per symbol. All
rows live in one contiguous block with per-symbol offsets; the table fully
replaces the text.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import struct

import numpy as np

from ._accel import NUMBA_ENABLED
from . import _kernels
from .core import Alphabet, EncodedText, ParikhVector, INFEASIBLE, _as_pv


@dataclass
class ProbeCounter:
    """Mutable accumulator for instrumented search-probe counts."""

    probes: int = 0
    calls: int = 0


class InvertedPrefixTable:
    __slots__ = ("alphabet", "n", "counts", "_off", "_flat")

    def __init__(self, alphabet: Alphabet, counts: np.ndarray, off: np.ndarray,
                 flat: np.ndarray):
        self.alphabet = alphabet
        self.counts = counts
        self.n = int(counts.sum())
        self._off = off
        self._flat = flat

    @classmethod
    def build(cls, text: EncodedText) -> "InvertedPrefixTable":
        sigma = text.alphabet.size
        if NUMBA_ENABLED:
            counts, off, flat = _kernels.build_prefix_table(text.data, sigma)
        else:
            counts = np.bincount(text.data, minlength=sigma).astype(np.int64)
            off = np.zeros(sigma + 1, dtype=np.int64)
            np.cumsum(counts + 1, out=off[1:])
            flat = np.zeros(text.n + sigma, dtype=np.int64)
            for k in range(sigma):
                flat[off[k] + 1:off[k + 1]] = np.flatnonzero(text.data == k) + 1
        return cls(text.alphabet, counts, off, flat)

    @property
    def sigma(self) -> int:
        return self.alphabet.size

    def row(self, k: int) -> np.ndarray:
        """Row for symbol index k, including the leading 0 entry."""
        return self._flat[self._off[k]:self._off[k + 1]]

    # -- queries ------------------------------------------------------------

    def firstfit(self, p) -> int:
        """Smallest prefix length whose counts dominate p; INFEASIBLE if some
        component exceeds the symbol's total count."""
        p = _as_pv(p)
        if p.dim != self.sigma:
            raise ValueError(f"dimension mismatch: {p.dim} vs {self.sigma}")
        if np.any(p.counts > self.counts):
            return INFEASIBLE
        return int(self._flat[self._off[:-1] + p.counts].max())

    def prv(self, j: int, hint=None, counters: ProbeCounter | None = None) -> ParikhVector:
        """Prefix counts of the length-j prefix.

        ``hint`` is an optional pair of per-symbol arrays (lo, hi) bracketing
        each count; the search then probes only inside those windows. Without
        a hint, full rows are searched. One symbol is always derived from the
        identity sum(prv(j)) == j instead of being searched. A hint that does
        not bracket the true value is a caller contract violation and raises
        AssertionError.
        """
        if not 0 <= j <= self.n:
            raise IndexError(f"prefix length {j} out of range 0..{self.n}")
        sigma = self.sigma
        if hint is None:
            lo = np.zeros(sigma, dtype=np.int64)
            hi = self.counts
        else:
            lo = np.asarray(hint[0], dtype=np.int64)
            hi = np.asarray(hint[1], dtype=np.int64)
            if lo.size != sigma or hi.size != sigma:
                raise ValueError("hint arrays must have one window per symbol")
            lo = np.clip(lo, 0, self.counts)
            hi = np.clip(hi, 0, self.counts)
        out = np.empty(sigma, dtype=np.int64)
        probes = 0
        # Search sigma-1 rows, skipping the widest window; derive it from the
        # total-mass identity.
        skip = int(np.argmax(hi - lo)) if sigma > 1 else 0
        total = 0
        for k in range(sigma):
            if k == skip:
                continue
            base = int(self._off[k])
            lo_k, hi_k = int(lo[k]), int(hi[k])
            assert self._flat[base + lo_k] <= j, "hint does not bracket prv"
            if hi_k <= lo_k:
                v = lo_k
            else:
                v, p = _kernels.bisect_le(self._flat, base, lo_k, hi_k, j)
                v, probes = int(v), probes + int(p)
            assert v == self.counts[k] or self._flat[base + v + 1] > j, \
                "hint does not bracket prv"
            out[k] = v
            total += v
        out[skip] = j - total
        assert lo[skip] <= out[skip] <= hi[skip], "hint does not bracket prv"
        if counters is not None:
            counters.probes += probes
            counters.calls += 1
        return ParikhVector(out)

    def char_at(self, pos: int) -> str:
        """Character at 1-based position ``pos``, recovered from the rows."""
        if not 1 <= pos <= self.n:
            raise IndexError(f"position {pos} out of range 1..{self.n}")
        for k in range(self.sigma):
            base = int(self._off[k])
            v, _ = _kernels.bisect_le(self._flat, base, 0, int(self.counts[k]), pos)
            if self._flat[base + int(v)] == pos:
                return self.alphabet.symbols[k]
        raise AssertionError("corrupt table: position not found in any row")

    def reconstruct(self) -> EncodedText:
        """Rebuild the encoded text the table was constructed from."""
        data = np.empty(self.n, dtype=np.int64)
        for k in range(self.sigma):
            positions = self.row(k)[1:]
            data[positions - 1] = k
        return EncodedText(self.alphabet, data)

    # -- serialization ------------------------------------------------------

    def to_bytes(self) -> bytes:
        alpha = "".join(self.alphabet.symbols).encode("utf-8")
        head = struct.pack("<QIH", self.n, self.sigma, len(alpha))
        positives = np.concatenate([self.row(k)[1:] for k in range(self.sigma)]) \
            if self.sigma else np.empty(0, dtype=np.int64)
        return head + alpha + self.counts.astype("<i8").tobytes() + \
            positives.astype("<i8").tobytes()

    @classmethod
    def from_bytes(cls, payload: bytes) -> "InvertedPrefixTable":
        n, sigma, alen = struct.unpack_from("<QIH", payload, 0)
        pos = struct.calcsize("<QIH")
        alpha = payload[pos:pos + alen].decode("utf-8")
        pos += alen
        counts = np.frombuffer(payload, dtype="<i8", count=sigma, offset=pos).astype(np.int64)
        pos += sigma * 8
        positives = np.frombuffer(payload, dtype="<i8", count=n, offset=pos).astype(np.int64)
        off = np.zeros(sigma + 1, dtype=np.int64)
        np.cumsum(counts + 1, out=off[1:])
        flat = np.zeros(n + sigma, dtype=np.int64)
        at = 0
        for k in range(sigma):
            c = int(counts[k])
            flat[off[k] + 1:off[k + 1]] = positives[at:at + c]
            at += c
        return cls(Alphabet(tuple(alpha)), counts, off, flat)


def build_table(text: EncodedText) -> InvertedPrefixTable:
    return InvertedPrefixTable.build(text)


def firstfit_table(tbl: InvertedPrefixTable, p) -> int:
    return tbl.firstfit(p)


def prv_bounded(tbl: InvertedPrefixTable, j: int, hint=None,
                counters: ProbeCounter | None = None) -> ParikhVector:
    return tbl.prv(j, hint=hint, counters=counters)
