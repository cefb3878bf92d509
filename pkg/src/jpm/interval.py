"""Binary-alphabet decision index: per-length min/max first-symbol counts.

Sliding a fixed-size window one step changes its first-symbol count by at
most one, so for each window length m the achievable counts form a full
integer interval [pmin(m), pmax(m)]. A query (x, y) occurs iff
x is inside the interval for length x + y, giving O(1) decisions once the
entry is known. Entries can be built eagerly for all lengths (n sweeps of n
character steps each) or lazily, one O(n) sweep per distinct query length;
a lazy sweep performed for a live query also reports that query's occurrence
start positions as a side channel. The structure itself stores only the 2n
interval endpoints, never occurrence lists.
"""

from __future__ import annotations

import io
import threading
from dataclasses import dataclass

import numpy as np

from ._accel import NUMBA_ENABLED
from . import _kernels
from .core import Alphabet, EncodedText, ParikhVector, _as_pv


@dataclass
class FillResult:
    m: int
    pmin: int
    pmax: int
    #: Occurrence starts of the live query, only when this call actually swept.
    starts: list[int] | None = None


class IntervalIndex:
    def __init__(self, alphabet: Alphabet, n: int, *, isa: np.ndarray | None = None):
        if alphabet.size != 2:
            raise ValueError("interval index requires binary alphabet")
        self.alphabet = alphabet
        self.n = n
        self.pmin = np.zeros(n, dtype=np.int64)
        self.pmax = np.zeros(n, dtype=np.int64)
        self.filled = np.zeros(n, dtype=bool)
        self._isa = isa  # first-symbol indicator; None once the text is gone
        self._lock = threading.Lock()
        self.sweeps = 0
        self.char_steps = 0

    # -- construction ---------------------------------------------------------

    @classmethod
    def build_eager(cls, text: EncodedText) -> "IntervalIndex":
        """Fill every length in one preprocessing pass (n sweeps)."""
        idx = cls.lazy(text)
        n = text.n
        if n == 0:
            return idx
        if NUMBA_ENABLED:
            pmin, pmax, steps = _kernels.interval_eager_sweep(idx._isa)
            idx.pmin, idx.pmax = pmin, pmax
            idx.char_steps = int(steps)
        else:
            prefix = np.zeros(n + 1, dtype=np.int64)
            np.cumsum(idx._isa, out=prefix[1:])
            for m in range(1, n + 1):
                w = prefix[m:] - prefix[:-m]
                idx.pmin[m - 1] = w.min()
                idx.pmax[m - 1] = w.max()
            idx.char_steps = n * n  # cost-model equivalent of the n sweeps
        idx.filled[:] = True
        idx.sweeps = n
        return idx

    @classmethod
    def lazy(cls, text: EncodedText) -> "IntervalIndex":
        """Empty index that fills entries on demand; retains the text."""
        if text.alphabet.size != 2:
            raise ValueError("interval index requires binary alphabet")
        isa = (text.data == 0).astype(np.int64)
        return cls(text.alphabet, text.n, isa=isa)

    # -- filling ----------------------------------------------------------------

    def fill(self, m: int, query=None) -> FillResult:
        """Ensure entry m is filled; one O(n) window sweep when it is not.

        When the sweep happens for a live ``query`` (a dim-2 vector of length
        m), the sweep also reports that query's occurrence starts. A call on
        an already-filled entry is a state no-op and carries no side channel.
        """
        if not 1 <= m <= self.n:
            raise IndexError(f"length {m} out of range 1..{self.n}")
        if self.filled[m - 1]:
            return FillResult(m, int(self.pmin[m - 1]), int(self.pmax[m - 1]))
        if self._isa is None:
            raise ValueError("entry not filled and the text is no longer available")
        qx = -1
        if query is not None:
            query = _as_pv(query)
            if query.dim != 2 or query.length != m:
                raise ValueError("live query must be two-dimensional with length m")
            qx = int(query.counts[0])
        with self._lock:
            if self.filled[m - 1]:  # lost the race; entry is complete
                return FillResult(m, int(self.pmin[m - 1]), int(self.pmax[m - 1]))
            out = np.empty(self.n - m + 1, dtype=np.int64) if qx >= 0 \
                else np.empty(1, dtype=np.int64)
            mn, mx, cnt, steps = _kernels.interval_fill_sweep(
                self._isa, np.int64(m), np.int64(qx), out)
            self.pmin[m - 1] = mn
            self.pmax[m - 1] = mx
            self.sweeps += 1
            self.char_steps += int(steps)
            self.filled[m - 1] = True  # set last: readers see complete entries
        starts = [int(s) for s in out[:cnt]] if qx >= 0 else None
        return FillResult(m, int(mn), int(mx), starts)

    # -- queries ------------------------------------------------------------------

    def decide(self, q) -> bool:
        """Does q = (x, y) occur? O(1) once entry x+y is filled."""
        ok, _ = self.decide_with_occurrences(q, want_occurrences=False)
        return ok

    def decide_with_occurrences(self, q, want_occurrences: bool = True):
        """Decision plus, when this query triggers the filling sweep, the
        occurrence starts observed by that sweep (else None)."""
        q = _as_pv(q)
        if q.dim != 2:
            raise ValueError(f"interval queries are two-dimensional, got {q.dim}")
        m = q.length
        if m == 0:
            raise ValueError("empty query")
        if m > self.n:
            return False, None
        x = int(q.counts[0])
        if self.filled[m - 1]:
            return bool(self.pmin[m - 1] <= x <= self.pmax[m - 1]), None
        res = self.fill(m, query=q if want_occurrences else None)
        return res.pmin <= x <= res.pmax, res.starts

    def all_filled(self) -> bool:
        return bool(self.filled.all())

    # -- serialization ---------------------------------------------------------

    def to_csv_bytes(self) -> bytes:
        """Filled entries as CSV rows (m, pmin, pmax) plus a metadata line."""
        buf = io.StringIO()
        alpha = "".join(self.alphabet.symbols)
        buf.write(f"# n={self.n} alphabet={alpha}\n")
        buf.write("m,pmin,pmax\n")
        for m in range(1, self.n + 1):
            if self.filled[m - 1]:
                buf.write(f"{m},{int(self.pmin[m - 1])},{int(self.pmax[m - 1])}\n")
        return buf.getvalue().encode("utf-8")

    @classmethod
    def from_csv_bytes(cls, payload: bytes) -> "IntervalIndex":
        lines = payload.decode("utf-8").splitlines()
        if not lines or not lines[0].startswith("# n="):
            raise ValueError("malformed interval index payload")
        meta = dict(part.split("=", 1) for part in lines[0][2:].split())
        n = int(meta["n"])
        idx = cls(Alphabet(tuple(meta["alphabet"])), n)
        for line in lines[2:]:
            if not line.strip():
                continue
            m, mn, mx = (int(v) for v in line.split(","))
            idx.pmin[m - 1] = mn
            idx.pmax[m - 1] = mx
            idx.filled[m - 1] = True
        return idx


def build_eager(text: EncodedText) -> IntervalIndex:
    return IntervalIndex.build_eager(text)


def fill_lazy(index: IntervalIndex, m: int, query=None) -> FillResult:
    return index.fill(m, query=query)


def decide(index: IntervalIndex, q) -> bool:
    return index.decide(q)
