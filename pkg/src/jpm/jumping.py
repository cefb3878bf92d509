"""The jump engine: occurrence search by alternating pointer jumps.

Two pointers L and R move along the text. R jumps to the first prefix length
whose counts dominate prv(L) + q; if the window is not an exact occurrence,
L jumps to the first prefix length dominating prv(R) - q (the start of the
longest window suffix still inside q). After either jump, R - L == |q| is
the sole occurrence test. L strictly increases, so every occurrence is
reported exactly once in ascending order, and an infeasible R jump means no
further occurrence can exist.

The engine runs over any index exposing ``n``, ``firstfit(p)`` and
``prv(j, hint=None)`` with the consistency law firstfit(p) = min{j : prv(j)
dominates p}. The two built-in back-ends (inverted prefix table, wavelet
tree) dispatch to specialized kernels that track probe counters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol, runtime_checkable

import numpy as np

from . import _kernels
from .core import EncodedText, ParikhVector, INFEASIBLE, _as_pv
from .prefix_index import InvertedPrefixTable
from .wavelet import WaveletTree


@runtime_checkable
class JumpIndex(Protocol):
    """Capability contract for jump-search back-ends."""

    n: int

    def firstfit(self, p) -> int: ...

    def prv(self, j: int, hint=None) -> ParikhVector: ...


@dataclass
class JumpTrace:
    """Instrumentation from one jump search.

    ``iterations`` counts main-loop executions (J). ``pairs`` holds the
    (L, R) values after each R jump when full tracing is on; ``rows``
    additionally includes the rows created by a match found after an L jump,
    as (L, R, found). ``gap_sum``/``gap_count`` accumulate R - L after
    matchless R jumps. ``probes`` holds per-operation-kind counters whose
    keys depend on the back-end.
    """

    iterations: int = 0
    pairs: list[tuple[int, int]] | None = None
    rows: list[tuple[int, int, bool]] | None = None
    probes: dict[str, int] = field(default_factory=dict)
    gap_sum: int = 0
    gap_count: int = 0

    @property
    def mean_gap(self) -> float:
        return self.gap_sum / self.gap_count if self.gap_count else float("nan")


def jump_search(index, q, *, trace: bool = False, checked: bool = False,
                stop_at_first: bool = False) -> tuple[list[int], JumpTrace]:
    """All occurrence start positions of q, ascending, plus instrumentation.

    ``trace`` records the full (L, R) sequence. ``checked`` re-derives the
    maintained prefix vectors independently on every update and verifies the
    jump invariants, raising AssertionError on any violation.
    ``stop_at_first`` returns after the first occurrence (decision mode).
    """
    q = _as_pv(q)
    _validate(index, q)
    if isinstance(index, InvertedPrefixTable):
        return _run_kernel(index, q, trace, checked, stop_at_first, wavelet=False)
    if isinstance(index, WaveletTree):
        if index.sigma == 1:
            return _jump_single_symbol(index.n, q, trace, stop_at_first)
        return _run_kernel(index, q, trace, checked, stop_at_first, wavelet=True)
    return _jump_generic(index, q, trace, checked, stop_at_first)


def decide_jump(index, q) -> bool:
    """Decision form: does q occur at all? Stops at the first match."""
    starts, _ = jump_search(index, q, stop_at_first=True)
    return bool(starts)


def _validate(index, q: ParikhVector) -> None:
    sigma = getattr(index, "sigma", None)
    if sigma is None:
        sigma = len(getattr(index, "counts", q.counts))
    if q.dim != sigma:
        raise ValueError(f"query dimension {q.dim} does not match index alphabet {sigma}")
    if q.length == 0:
        raise ValueError("empty query")


def _run_kernel(index, q: ParikhVector, trace: bool, checked: bool,
                first_only: bool, wavelet: bool):
    n = index.n
    out_starts = np.empty(n + 1, dtype=np.int64)
    cap = 2 * n + 4 if trace else 1
    row_l = np.empty(cap, dtype=np.int64)
    row_r = np.empty(cap, dtype=np.int64)
    row_f = np.empty(cap, dtype=np.int8)
    row_k = np.empty(cap, dtype=np.int8)
    args = (np.int64(n), np.int64(index.sigma), q.counts, first_only, checked,
            trace, out_starts, row_l, row_r, row_f, row_k)
    if wavelet:
        res = _kernels.jump_wavelet(index._left, index._right, index._soff,
                                    index._boff, index._woff, index._nbits,
                                    index._ones, index._words, index._supers,
                                    index._blocks, *args)
    else:
        res = _kernels.jump_table(index._off, index._flat, index.counts, *args)
    n_occ, J, n_rows, p0, p1, p2, gap_sum, gap_cnt, viol = (int(x) for x in res)
    if checked and viol:
        raise AssertionError(f"jump invariants violated {viol} time(s)")
    if wavelet:
        probes = {"node_visits": p0}
    else:
        probes = {"bsearch_probes": p0, "firstfit_lookups": p1, "char_ident": p2}
    tr = JumpTrace(iterations=J, probes=probes, gap_sum=gap_sum, gap_count=gap_cnt)
    if trace:
        tr.rows = [(int(row_l[i]), int(row_r[i]), bool(row_f[i]))
                   for i in range(n_rows)]
        tr.pairs = [(int(row_l[i]), int(row_r[i]))
                    for i in range(n_rows) if row_k[i] == 0]
    return [int(s) for s in out_starts[:n_occ]], tr


def _jump_single_symbol(n: int, q: ParikhVector, trace: bool, first_only: bool):
    # One-symbol alphabet: every window matches, the loop reduces to a walk.
    m = q.length
    tr = JumpTrace()
    if trace:
        tr.rows, tr.pairs = [], []
    starts: list[int] = []
    L = 0
    while L <= n - m:
        tr.iterations += 1
        R = L + m
        if trace:
            tr.rows.append((L, R, True))
            tr.pairs.append((L, R))
        starts.append(L + 1)
        if first_only:
            return starts, tr
        L += 1
    return starts, tr


def _jump_generic(index, q: ParikhVector, trace: bool, checked: bool,
                  first_only: bool):
    """Reference engine over the JumpIndex protocol. Passes the windowed
    search hints derived from the jump invariants: prv(R) sits between
    prv(L) and prv(L) + (R - L), prv(L) between prv(R) - q and prv(R)."""
    n = index.n
    m = q.length
    qc = q.counts
    tr = JumpTrace(probes={"firstfit_calls": 0, "prv_calls": 0})
    if trace:
        tr.rows, tr.pairs = [], []
    starts: list[int] = []
    if m > n:
        return starts, tr
    L = 0
    prv_l = np.zeros(q.dim, dtype=np.int64)
    while L <= n - m:
        tr.iterations += 1
        R = index.firstfit(ParikhVector(prv_l + qc))
        tr.probes["firstfit_calls"] += 1
        if R >= INFEASIBLE:
            break
        if checked:
            assert L <= R, "pointer order violated"
            ref = index.prv(R).counts
            assert np.all(ref - prv_l >= qc), "dominance after R jump violated"
        matched = R - L == m
        if trace:
            tr.rows.append((L, R, matched))
            tr.pairs.append((L, R))
        if matched:
            starts.append(L + 1)
            if first_only:
                return starts, tr
            L += 1
            prv_l = index.prv(L).counts
            tr.probes["prv_calls"] += 1
            continue
        tr.gap_sum += R - L
        tr.gap_count += 1
        prv_r = index.prv(R, hint=(prv_l, prv_l + (R - L))).counts
        tr.probes["prv_calls"] += 1
        Lnew = index.firstfit(ParikhVector(prv_r - qc))
        tr.probes["firstfit_calls"] += 1
        if checked:
            assert Lnew <= R, "pointer order violated"
            assert Lnew > L, "left pointer must strictly increase"
        if R - Lnew == m:
            if trace:
                tr.rows.append((Lnew, R, True))
            starts.append(Lnew + 1)
            if first_only:
                return starts, tr
            L = Lnew + 1
            prv_l = index.prv(L).counts
            tr.probes["prv_calls"] += 1
        else:
            prv_l = index.prv(Lnew, hint=(prv_r - m, prv_r)).counts
            tr.probes["prv_calls"] += 1
            if checked:
                assert np.all(prv_r - prv_l <= qc), \
                    "sub-dominance after L jump violated"
            L = Lnew
    return starts, tr
