"""Succinct-style bit vector with O(1) rank and fast select.

Layout: bits are packed into 64-bit words. Each 512-bit superblock stores an
absolute count of ones before it (int64, one trailing sentinel with the
total); each 64-bit block stores the ones before it within its superblock
(uint16, since a superblock holds at most 512 ones). Rank is two table reads
plus one in-word popcount. Select binary-searches the superblock counts, scans
at most eight block counts, then scans inside one word.

The acceleration tables cost 0.375 bits per stored bit (16/64 + 64/512), so
auxiliary space stays below half the payload at any size.
"""

from __future__ import annotations

import numpy as np

from ._accel import NUMBA_ENABLED
from . import _kernels

INFEASIBLE = _kernels.INFEASIBLE

_SUPER = 512
_WORD = 64


class RankSelectBitVector:
    __slots__ = ("nbits", "words", "supers", "blocks", "total_ones")

    def __init__(self, bits):
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.ndim != 1:
            raise ValueError("bits must be one-dimensional")
        if bits.size and bits.max() > 1:
            raise ValueError("bits must be 0 or 1")
        self.nbits = int(bits.size)
        packed = np.packbits(bits, bitorder="little").tobytes()
        pad = (-len(packed)) % 8
        self.words = np.frombuffer(packed + b"\x00" * pad, dtype="<u8").astype(np.uint64)
        nwords = self.words.size
        ones_per_word = np.bitwise_count(self.words).astype(np.int64)
        word_cum = np.zeros(nwords + 1, dtype=np.int64)
        np.cumsum(ones_per_word, out=word_cum[1:])
        nsup = (self.nbits + _SUPER - 1) // _SUPER
        supers = np.empty(nsup + 1, dtype=np.int64)
        supers[:nsup] = word_cum[np.arange(nsup) * 8]
        supers[nsup] = word_cum[nwords]
        self.supers = supers
        w = np.arange(nwords)
        self.blocks = (word_cum[w] - supers[w >> 3]).astype(np.uint16)
        self.total_ones = int(word_cum[nwords])

    # -- queries ------------------------------------------------------------

    def rank(self, bit: int, i):
        """Count of ``bit`` among positions 1..i. Accepts a scalar or an
        array of prefix lengths in 0..nbits."""
        scalar = np.isscalar(i) or getattr(i, "ndim", 1) == 0
        idx = np.asarray(i, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() > self.nbits):
            raise IndexError(f"rank index out of range 0..{self.nbits}")
        ones = self._rank1(idx)
        out = ones if bit else idx - ones
        return int(out) if scalar else out

    def _rank1(self, idx: np.ndarray) -> np.ndarray:
        if self.nbits == 0:
            return np.zeros_like(idx)
        w = np.minimum(idx >> 6, self.words.size - 1)
        rem = (idx & 63).astype(np.uint64)
        inword = np.bitwise_count(self.words[w] & ((np.uint64(1) << rem) - np.uint64(1)))
        ones = self.supers[idx >> 9] + self.blocks[w].astype(np.int64) + inword.astype(np.int64)
        return np.where(idx == self.nbits, self.total_ones, ones)

    def select(self, bit: int, j: int) -> int:
        """1-based position of the j-th occurrence of ``bit``. select(0) is 0
        by convention; INFEASIBLE when j exceeds the available count."""
        if j < 0:
            raise ValueError("select count must be non-negative")
        return int(_kernels.bv_select(self.words, self.supers, self.blocks,
                                      np.int64(0), np.int64(0), np.int64(0),
                                      np.int64(self.nbits),
                                      np.int64(self.total_ones),
                                      np.int64(1 if bit else 0), np.int64(j)))

    def select_batch(self, bit: int, js) -> np.ndarray:
        js = np.asarray(js, dtype=np.int64)
        out = np.empty(js.size, dtype=np.int64)
        if NUMBA_ENABLED:
            _kernels.bv_select_batch(self.words, self.supers, self.blocks,
                                     np.int64(self.nbits),
                                     np.int64(self.total_ones),
                                     np.int64(1 if bit else 0), js, out)
        else:
            for t, j in enumerate(js):
                out[t] = self.select(bit, int(j))
        return out

    def bit(self, pos: int) -> int:
        """Bit value at 1-based position ``pos``."""
        if not 1 <= pos <= self.nbits:
            raise IndexError(f"position {pos} out of range 1..{self.nbits}")
        i = pos - 1
        return int((self.words[i >> 6] >> np.uint64(i & 63)) & np.uint64(1))

    # -- inspection ---------------------------------------------------------

    def to_bits(self) -> np.ndarray:
        raw = np.unpackbits(self.words.view(np.uint8), bitorder="little")
        return raw[: self.nbits]

    def to_bit_string(self) -> str:
        return "".join("1" if b else "0" for b in self.to_bits())

    def aux_bits(self) -> int:
        """Size of the rank/select acceleration tables, in bits."""
        return (self.supers.nbytes + self.blocks.nbytes) * 8

    def __len__(self) -> int:
        return self.nbits

    def __repr__(self):
        return f"RankSelectBitVector(nbits={self.nbits}, ones={self.total_ones})"
