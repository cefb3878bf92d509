"""Wavelet tree over an encoded text.

A complete binary tree with one leaf per alphabet symbol. Each inner node
covers a contiguous symbol range [lo, hi) and stores a bit vector over the
subsequence of the text routed to it: bit 1 sends a character to the right
child, 0 to the left. The split puts the first ceil(span/2) symbols on the
left, which makes the tree shape a pure function of sigma.

Batched queries traverse the whole tree once: prefix counts for all symbols
top-down, and the smallest dominating prefix length bottom-up via the
select-max recurrence. The jump engine uses a fused traversal (down for
prefix counts, up for the next pointer) so one loop iteration costs at most
two tree passes.
"""

from __future__ import annotations

import struct

import numpy as np

from . import _kernels
from .bitvector import RankSelectBitVector
from .core import Alphabet, EncodedText, ParikhVector, INFEASIBLE, _as_pv


class _Node:
    __slots__ = ("lo", "hi", "mid", "bv", "left", "right")

    def __init__(self, lo, hi, mid, bv, left, right):
        self.lo = lo
        self.hi = hi
        self.mid = mid
        self.bv = bv
        self.left = left    # inner-node index, or -(symbol+1) for a leaf
        self.right = right


class WaveletTree:
    def __init__(self, alphabet: Alphabet, n: int, nodes: list[_Node]):
        self.alphabet = alphabet
        self.n = n
        self.nodes = nodes  # preorder; empty for a single-symbol alphabet
        self._flatten()

    # -- construction ---------------------------------------------------------

    @classmethod
    def build(cls, text: EncodedText) -> "WaveletTree":
        sigma = text.alphabet.size
        nodes: list[_Node] = []

        def rec(sub: np.ndarray, lo: int, hi: int) -> int:
            if hi - lo == 1:
                return -(lo + 1)
            mid = lo + (hi - lo + 1) // 2
            idx = len(nodes)
            nodes.append(None)  # reserve preorder slot
            bits = (sub >= mid).astype(np.uint8)
            bv = RankSelectBitVector(bits)
            left = rec(sub[sub < mid], lo, mid)
            right = rec(sub[sub >= mid], mid, hi)
            nodes[idx] = _Node(lo, hi, mid, bv, left, right)
            return idx

        if sigma > 1:
            rec(text.data, 0, sigma)
        return cls(text.alphabet, text.n, nodes)

    def _flatten(self) -> None:
        inner = len(self.nodes)
        self._left = np.array([nd.left for nd in self.nodes], dtype=np.int64)
        self._right = np.array([nd.right for nd in self.nodes], dtype=np.int64)
        self._nbits = np.array([nd.bv.nbits for nd in self.nodes], dtype=np.int64)
        self._ones = np.array([nd.bv.total_ones for nd in self.nodes], dtype=np.int64)
        woff = np.zeros(inner, dtype=np.int64)
        soff = np.zeros(inner, dtype=np.int64)
        boff = np.zeros(inner, dtype=np.int64)
        w = s = b = 0
        for i, nd in enumerate(self.nodes):
            woff[i], soff[i], boff[i] = w, s, b
            w += nd.bv.words.size
            s += nd.bv.supers.size
            b += nd.bv.blocks.size
        self._woff, self._soff, self._boff = woff, soff, boff
        if inner:
            self._words = np.concatenate([nd.bv.words for nd in self.nodes])
            self._supers = np.concatenate([nd.bv.supers for nd in self.nodes])
            self._blocks = np.concatenate([nd.bv.blocks for nd in self.nodes])
        else:
            self._words = np.empty(0, dtype=np.uint64)
            self._supers = np.empty(0, dtype=np.int64)
            self._blocks = np.empty(0, dtype=np.uint16)

    @property
    def sigma(self) -> int:
        return self.alphabet.size

    def node_bits(self, lo: int, hi: int) -> str:
        """Bit string of the inner node covering symbol range [lo, hi)."""
        for nd in self.nodes:
            if nd.lo == lo and nd.hi == hi:
                return nd.bv.to_bit_string()
        raise KeyError(f"no inner node covers symbol range [{lo}, {hi})")

    # -- queries --------------------------------------------------------------

    def prv(self, j: int, hint=None) -> ParikhVector:
        """Counts of every symbol within the length-j prefix. One top-down
        traversal; the hint argument exists for interface compatibility and
        is ignored."""
        pv, _ = self.prv_counted(j)
        return pv

    def prv_counted(self, j: int):
        if not 0 <= j <= self.n:
            raise IndexError(f"prefix length {j} out of range 0..{self.n}")
        if self.sigma == 1:
            return ParikhVector([j] if j else [0]), 1
        out = np.empty(self.sigma, dtype=np.int64)
        t_buf = np.empty(len(self.nodes), dtype=np.int64)
        visits = _kernels.wt_prv_pass(self._left, self._right, self._soff,
                                      self._boff, self._woff, self._nbits,
                                      self._ones, self._words, self._supers,
                                      self._blocks, np.int64(j), out, t_buf)
        return ParikhVector(out), int(visits)

    def firstfit(self, p, node_values: bool = False):
        """Smallest prefix length dominating p, or INFEASIBLE. With
        ``node_values`` the per-node combined select values are returned as a
        dict keyed by each inner node's symbol range."""
        pos, visits, x_buf = self._firstfit_impl(p)
        if not node_values:
            return pos
        values = {
            self.alphabet.symbols[nd.lo:nd.hi]: int(x_buf[i])
            for i, nd in enumerate(self.nodes)
        }
        return pos, values

    def firstfit_counted(self, p):
        pos, visits, _ = self._firstfit_impl(p)
        return pos, visits

    def _firstfit_impl(self, p):
        p = _as_pv(p)
        if p.dim != self.sigma:
            raise ValueError(f"dimension mismatch: {p.dim} vs {self.sigma}")
        if self.sigma == 1:
            v = int(p.counts[0])
            return (v if v <= self.n else INFEASIBLE), 1, np.empty(0, np.int64)
        x_buf = np.empty(len(self.nodes), dtype=np.int64)
        pos, visits = _kernels.wt_firstfit_pass(
            self._left, self._right, self._soff, self._boff, self._woff,
            self._nbits, self._ones, self._words, self._supers, self._blocks,
            p.counts, x_buf)
        pos = int(pos)
        return (INFEASIBLE if pos >= INFEASIBLE else pos), int(visits), x_buf

    def step(self, t_root: int, q, sign: int):
        """Fused traversal: returns (firstfit(prv(t_root) + sign*q), prv(t_root))."""
        q = _as_pv(q)
        if self.sigma == 1:
            pv = np.array([t_root], dtype=np.int64)
            demand = t_root + sign * int(q.counts[0])
            pos = demand if demand <= self.n else INFEASIBLE
            return (pos if demand > 0 else 0), pv
        out = np.empty(self.sigma, dtype=np.int64)
        t_buf = np.empty(len(self.nodes), dtype=np.int64)
        x_buf = np.empty(len(self.nodes), dtype=np.int64)
        pos, _ = _kernels.wt_step(self._left, self._right, self._soff,
                                  self._boff, self._woff, self._nbits,
                                  self._ones, self._words, self._supers,
                                  self._blocks, np.int64(self.sigma),
                                  np.int64(t_root), q.counts, np.int64(sign),
                                  out, t_buf, x_buf)
        pos = int(pos)
        return (INFEASIBLE if pos >= INFEASIBLE else pos), out

    # -- serialization ----------------------------------------------------------

    def to_bytes(self) -> bytes:
        alpha = "".join(self.alphabet.symbols).encode("utf-8")
        chunks = [struct.pack("<QIH", self.n, self.sigma, len(alpha)), alpha,
                  struct.pack("<I", len(self.nodes))]
        for i in self._level_order():
            nd = self.nodes[i]
            payload = nd.bv.words.astype("<u8").tobytes()
            chunks.append(struct.pack("<IIQ", nd.lo, nd.hi, nd.bv.nbits))
            chunks.append(payload)
        return b"".join(chunks)

    def _level_order(self) -> list[int]:
        if not self.nodes:
            return []
        order, queue = [], [0]
        while queue:
            i = queue.pop(0)
            order.append(i)
            nd = self.nodes[i]
            if nd.left >= 0:
                queue.append(nd.left)
            if nd.right >= 0:
                queue.append(nd.right)
        return order

    @classmethod
    def from_bytes(cls, payload: bytes) -> "WaveletTree":
        n, sigma, alen = struct.unpack_from("<QIH", payload, 0)
        pos = struct.calcsize("<QIH")
        alpha = payload[pos:pos + alen].decode("utf-8")
        pos += alen
        (inner,) = struct.unpack_from("<I", payload, pos)
        pos += 4
        by_range: dict[tuple[int, int], np.ndarray] = {}
        for _ in range(inner):
            lo, hi, nbits = struct.unpack_from("<IIQ", payload, pos)
            pos += struct.calcsize("<IIQ")
            nwords = (nbits + 63) // 64
            words = np.frombuffer(payload, dtype="<u8", count=nwords, offset=pos)
            pos += nwords * 8
            bits = np.unpackbits(words.view(np.uint8), bitorder="little")[:nbits]
            by_range[(lo, hi)] = bits

        nodes: list[_Node] = []

        def rec(lo: int, hi: int) -> int:
            if hi - lo == 1:
                return -(lo + 1)
            mid = lo + (hi - lo + 1) // 2
            idx = len(nodes)
            nodes.append(None)
            bits = by_range.get((lo, hi))
            if bits is None:
                raise ValueError("index payload is missing a tree node")
            bv = RankSelectBitVector(bits)
            left = rec(lo, mid)
            right = rec(mid, hi)
            nodes[idx] = _Node(lo, hi, mid, bv, left, right)
            return idx

        if sigma > 1:
            rec(0, sigma)
        return cls(Alphabet(tuple(alpha)), n, nodes)


def build_wavelet(text: EncodedText) -> WaveletTree:
    return WaveletTree.build(text)


def wt_prv(wt: WaveletTree, j: int) -> ParikhVector:
    return wt.prv(j)


def wt_firstfit(wt: WaveletTree, p):
    return wt.firstfit(p)
