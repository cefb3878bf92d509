"""Hot inner loops, compiled with numba when enabled (see jpm._accel).

Every function here is also valid plain Python operating on NumPy arrays, so
the fallback path can call them directly; the high-level modules prefer
vectorized NumPy equivalents where those exist.

Conventions shared with the rest of the package:
  * text positions are 1-based; prefix index j means "first j characters",
  * symbols are dense 0-based indices,
  * INFEASIBLE is a large sentinel that compares greater than any position.
"""

import numpy as np

from ._accel import njit

INFEASIBLE = 1 << 62

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_U1 = np.uint64(1)
_U2 = np.uint64(2)
_U4 = np.uint64(4)
_U8 = np.uint64(8)
_U16 = np.uint64(16)
_U32 = np.uint64(32)
_LOW7 = np.uint64(0x7F)


@njit
def popcount64(x):
    x = x - ((x >> _U1) & _M1)
    x = (x & _M2) + ((x >> _U2) & _M2)
    x = (x + (x >> _U4)) & _M4
    x = x + (x >> _U8)
    x = x + (x >> _U16)
    x = x + (x >> _U32)
    return np.int64(x & _LOW7)


# ---------------------------------------------------------------------------
# Rank/select on a packed bit vector.
#
# words: uint64, bit i (0-based) lives in words[i >> 6] at bit (i & 63).
# blocks[w]: ones within the 512-bit superblock strictly before word w (uint16).
# supers[s]: ones strictly before superblock s; one trailing entry holds the
# total so binary searches have a sentinel.


@njit
def bv_rank1(words, supers, blocks, soff, boff, woff, nbits, total_ones, i):
    if i <= 0:
        return np.int64(0)
    if i >= nbits:
        return total_ones
    w = i >> 6
    r = supers[soff + (i >> 9)] + np.int64(blocks[boff + w])
    rem = i & 63
    if rem:
        mask = (_U1 << np.uint64(rem)) - _U1
        r += popcount64(words[woff + w] & mask)
    return r


@njit
def bv_select(words, supers, blocks, soff, boff, woff, nbits, total_ones, bit, j):
    """1-based position of the j-th bit equal to ``bit``; 0 for j<=0,
    INFEASIBLE when j exceeds the available count."""
    if j <= 0:
        return np.int64(0)
    total = total_ones if bit else nbits - total_ones
    if j > total:
        return np.int64(INFEASIBLE)
    nsup = (nbits + 511) >> 9
    # Superblock: largest s with count-before(s) < j.
    lo = np.int64(0)
    hi = np.int64(nsup)
    while lo < hi:
        mid = (lo + hi + 1) >> 1
        before = supers[soff + mid]
        if not bit:
            span = mid << 9
            if span > nbits:
                span = nbits
            before = span - before
        if before < j:
            lo = mid
        else:
            hi = mid - 1
    sb = lo
    nwords = (nbits + 63) >> 6
    w = sb << 3
    w_end = (sb + 1) << 3
    if w_end > nwords:
        w_end = nwords
    while w < w_end:
        ones_before = supers[soff + sb] + np.int64(blocks[boff + w])
        before = ones_before if bit else (w << 6) - ones_before
        valid = nbits - (w << 6)
        if valid > 64:
            valid = 64
        word = words[woff + w]
        inword_ones = popcount64(word)
        inword = inword_ones if bit else valid - inword_ones
        if before + inword >= j:
            target = j - before
            cnt = np.int64(0)
            for b in range(valid):
                isone = np.int64((word >> np.uint64(b)) & _U1)
                hit = isone if bit else 1 - isone
                cnt += hit
                if cnt == target:
                    return (w << 6) + b + 1
        w += 1
    return np.int64(INFEASIBLE)  # unreachable when j <= total


@njit
def bv_rank_batch(words, supers, blocks, nbits, total_ones, bit, idxs, out):
    z = np.int64(0)
    for t in range(idxs.size):
        r1 = bv_rank1(words, supers, blocks, z, z, z, nbits, total_ones, idxs[t])
        out[t] = r1 if bit else idxs[t] - r1


@njit
def bv_select_batch(words, supers, blocks, nbits, total_ones, bit, js, out):
    z = np.int64(0)
    for t in range(js.size):
        out[t] = bv_select(words, supers, blocks, z, z, z, nbits, total_ones,
                           bit, js[t])


# ---------------------------------------------------------------------------
# Sliding-window matcher.


@njit
def window_scan(data, q, m, out_starts):
    """Starts of all windows whose Parikh vector equals q; returns
    (number of starts, count of per-character window update steps)."""
    n = data.size
    sigma = q.size
    c = np.zeros(sigma, np.int64)
    for i in range(m):
        c[data[i]] += 1
    steps = m
    r = 0
    for k in range(sigma):
        if c[k] != q[k]:
            r += 1
    cnt = 0
    if r == 0:
        out_starts[cnt] = 1
        cnt += 1
    for start in range(2, n - m + 2):
        out_sym = data[start - 2]
        in_sym = data[start + m - 2]
        if out_sym != in_sym:
            if c[out_sym] == q[out_sym]:
                r += 1
            c[out_sym] -= 1
            if c[out_sym] == q[out_sym]:
                r -= 1
            if c[in_sym] == q[in_sym]:
                r += 1
            c[in_sym] += 1
            if c[in_sym] == q[in_sym]:
                r -= 1
            steps += 2
        if r == 0:
            out_starts[cnt] = start
            cnt += 1
    return cnt, steps


# ---------------------------------------------------------------------------
# Binary-alphabet min/max index sweeps. isa[i] = 1 where the text carries the
# first alphabet symbol.


@njit
def interval_eager_sweep(isa):
    n = isa.size
    pmin = np.empty(n, np.int64)
    pmax = np.empty(n, np.int64)
    steps = np.int64(0)
    for m in range(1, n + 1):
        c = np.int64(0)
        for i in range(m):
            c += isa[i]
            steps += 1
        mn = c
        mx = c
        for i in range(m, n):
            c += isa[i] - isa[i - m]
            steps += 1
            if c < mn:
                mn = c
            elif c > mx:
                mx = c
        pmin[m - 1] = mn
        pmax[m - 1] = mx
    return pmin, pmax, steps


@njit
def interval_fill_sweep(isa, m, qx, out_starts):
    """One window sweep for length m. When qx >= 0 also collects the start
    positions of windows with exactly qx first-symbol characters."""
    n = isa.size
    c = np.int64(0)
    for i in range(m):
        c += isa[i]
    mn = c
    mx = c
    cnt = 0
    if qx >= 0 and c == qx:
        out_starts[cnt] = 1
        cnt += 1
    for i in range(m, n):
        c += isa[i] - isa[i - m]
        if c < mn:
            mn = c
        elif c > mx:
            mx = c
        if qx >= 0 and c == qx:
            out_starts[cnt] = i - m + 2
            cnt += 1
    return mn, mx, cnt, np.int64(n)


# ---------------------------------------------------------------------------
# Inverted prefix table. Row k occupies flat[off[k] .. off[k+1]-1]; the first
# entry of each row is 0, entry j >= 1 is the position of the j-th occurrence
# of symbol k. off[sigma] == n + sigma.


@njit
def build_prefix_table(data, sigma):
    n = data.size
    counts = np.zeros(sigma, np.int64)
    for i in range(n):
        counts[data[i]] += 1
    off = np.zeros(sigma + 1, np.int64)
    for k in range(sigma):
        off[k + 1] = off[k] + counts[k] + 1
    flat = np.zeros(n + sigma, np.int64)
    cur = np.zeros(sigma, np.int64)
    for i in range(n):
        k = data[i]
        cur[k] += 1
        flat[off[k] + cur[k]] = i + 1
    return counts, off, flat


@njit
def bisect_le(flat, base, lo, hi, value):
    """Largest t in [lo, hi] with flat[base+t] <= value, plus probe count.
    Precondition: flat[base+lo] <= value."""
    probes = np.int64(0)
    while lo < hi:
        mid = (lo + hi + 1) >> 1
        probes += 1
        if flat[base + mid] <= value:
            lo = mid
        else:
            hi = mid - 1
    return lo, probes


@njit
def table_prv_full(off, flat, counts, sigma, j, out):
    probes = np.int64(0)
    for k in range(sigma):
        v, p = bisect_le(flat, off[k], 0, counts[k], j)
        out[k] = v
        probes += p
    return probes


@njit
def table_prv_anchored(off, flat, sigma, j, anchor, limit, slack, out):
    """prv(j) where anchor[k] <= prv(j)_k <= min(limit[k], anchor[k]+slack')
    and the per-symbol overshoots above anchor sum to at most ``slack``.
    The last symbol is derived from the total-mass identity sum(prv(j)) == j,
    and the slack budget shrinks as overshoot is discovered, so later rows
    search narrower windows."""
    probes = np.int64(0)
    found = np.int64(0)
    rem = slack
    for k in range(sigma - 1):
        lo = anchor[k]
        hi = limit[k]
        cap = lo + rem
        if cap < hi:
            hi = cap
        if hi <= lo:
            v = lo
        else:
            v, p = bisect_le(flat, off[k], lo, hi, j)
            probes += p
        out[k] = v
        rem -= v - lo
        found += v
    out[sigma - 1] = j - found
    return probes


@njit
def _table_char_step(off, flat, counts, sigma, prv_l, newpos):
    """Advance prv_l by the symbol at position newpos; returns (symbol probes,
    ok flag)."""
    probes = np.int64(0)
    for k in range(sigma):
        nxt = prv_l[k] + 1
        if nxt <= counts[k]:
            probes += 1
            if flat[off[k] + nxt] == newpos:
                prv_l[k] = nxt
                return probes, True
    return probes, False


@njit
def jump_table(off, flat, counts, n, sigma, q, first_only, checked, want_rows,
               out_starts, row_l, row_r, row_f, row_k):
    """Jump engine over the inverted prefix table.

    Returns (n_occ, J, n_rows, bsearch_probes, ff_probes, char_probes,
    gap_sum, gap_cnt, violations). ``violations`` counts failed internal
    invariant checks; it is only populated in checked mode, where the
    maintained prefix vectors are re-derived by unwindowed searches and the
    jump invariants (dominance after R-updates, sub-dominance after
    L-updates, L <= R, strictly increasing L) are verified on every update.
    """
    m = np.int64(0)
    for k in range(sigma):
        m += q[k]
    n_occ = np.int64(0)
    J = np.int64(0)
    n_rows = np.int64(0)
    bs = np.int64(0)
    ffp = np.int64(0)
    chp = np.int64(0)
    gap_sum = np.int64(0)
    gap_cnt = np.int64(0)
    viol = np.int64(0)
    if m > n or m <= 0:
        return n_occ, J, n_rows, bs, ffp, chp, gap_sum, gap_cnt, viol
    prv_l = np.zeros(sigma, np.int64)
    prv_r = np.empty(sigma, np.int64)
    anchor = np.empty(sigma, np.int64)
    chk = np.empty(sigma, np.int64)
    L = np.int64(0)
    prev_L = np.int64(-1)
    while L <= n - m:
        J += 1
        if checked:
            if L <= prev_L:
                viol += 1
            prev_L = L
            table_prv_full(off, flat, counts, sigma, L, chk)
            for k in range(sigma):
                if chk[k] != prv_l[k]:
                    viol += 1
        # R-update: first position whose prefix dominates prv(L) + q.
        R = np.int64(0)
        infeasible = False
        for k in range(sigma):
            t = prv_l[k] + q[k]
            if t > counts[k]:
                infeasible = True
                break
            ffp += 1
            pos = flat[off[k] + t]
            if pos > R:
                R = pos
        if infeasible:
            break
        if checked and L > R:
            viol += 1
        matched = R - L == m
        if want_rows:
            row_l[n_rows] = L
            row_r[n_rows] = R
            row_f[n_rows] = 1 if matched else 0
            row_k[n_rows] = 0
            n_rows += 1
        if matched:
            out_starts[n_occ] = L + 1
            n_occ += 1
            if checked:
                table_prv_full(off, flat, counts, sigma, R, chk)
                for k in range(sigma):
                    if chk[k] - prv_l[k] < q[k]:
                        viol += 1
            if first_only:
                return n_occ, J, n_rows, bs, ffp, chp, gap_sum, gap_cnt, viol
            newpos = L + 1
            p, ok = _table_char_step(off, flat, counts, sigma, prv_l, newpos)
            chp += p
            if not ok:
                viol += 1
                break
            L = newpos
            continue
        gap_sum += R - L
        gap_cnt += 1
        # prv(R): each component dominates prv(L) + q; overshoot sums to the
        # window excess (R - L) - m.
        excess = (R - L) - m
        for k in range(sigma):
            anchor[k] = prv_l[k] + q[k]
        bs += table_prv_anchored(off, flat, sigma, R, anchor, counts, excess, prv_r)
        if checked:
            table_prv_full(off, flat, counts, sigma, R, chk)
            for k in range(sigma):
                if chk[k] != prv_r[k]:
                    viol += 1
                if prv_r[k] - prv_l[k] < q[k]:
                    viol += 1
        # L-update: first position whose prefix dominates prv(R) - q.
        Lnew = np.int64(0)
        for k in range(sigma):
            t = prv_r[k] - q[k]
            ffp += 1
            pos = flat[off[k] + t]
            if pos > Lnew:
                Lnew = pos
        if checked:
            if Lnew > R:
                viol += 1
            if Lnew <= L:
                viol += 1
        matched = R - Lnew == m
        if matched:
            if want_rows:
                row_l[n_rows] = Lnew
                row_r[n_rows] = R
                row_f[n_rows] = 1
                row_k[n_rows] = 1
                n_rows += 1
            out_starts[n_occ] = Lnew + 1
            n_occ += 1
            for k in range(sigma):
                prv_l[k] = prv_r[k] - q[k]
            if checked:
                table_prv_full(off, flat, counts, sigma, Lnew, chk)
                for k in range(sigma):
                    if chk[k] != prv_l[k]:
                        viol += 1
            if first_only:
                return n_occ, J, n_rows, bs, ffp, chp, gap_sum, gap_cnt, viol
            newpos = Lnew + 1
            p, ok = _table_char_step(off, flat, counts, sigma, prv_l, newpos)
            chp += p
            if not ok:
                viol += 1
                break
            L = newpos
        else:
            # prv(Lnew): components sit between prv(R) - q and prv(R); the
            # overshoot above the anchor sums to m - (R - Lnew).
            slack = m - (R - Lnew)
            if checked and slack < 0:
                viol += 1
            for k in range(sigma):
                anchor[k] = prv_r[k] - q[k]
            bs += table_prv_anchored(off, flat, sigma, Lnew, anchor, prv_r, slack, prv_l)
            if checked:
                table_prv_full(off, flat, counts, sigma, Lnew, chk)
                for k in range(sigma):
                    if chk[k] != prv_l[k]:
                        viol += 1
                    if prv_r[k] - prv_l[k] > q[k]:
                        viol += 1
            L = Lnew
    return n_occ, J, n_rows, bs, ffp, chp, gap_sum, gap_cnt, viol


# ---------------------------------------------------------------------------
# Wavelet tree kernels. Inner nodes are stored in preorder; children of node
# i are nd_left[i]/nd_right[i], where values >= 0 index inner nodes and
# negative values encode leaves as -(symbol + 1). Per-node bit vectors live
# in shared flat arrays addressed by the nd_*_off arrays.


@njit
def build_wavelet_arrays(data, sigma):
    """Flat wavelet-tree arrays for a text; layout-identical to the ones the
    WaveletTree class assembles, so the query kernels can run on either. The
    batch verification suite builds thousands of small trees through this."""
    n = data.size
    csum = np.zeros(sigma + 1, np.int64)
    for i in range(n):
        csum[data[i] + 1] += 1
    for k in range(sigma):
        csum[k + 1] += csum[k]
    inner = sigma - 1
    nd_lo = np.empty(inner, np.int64)
    nd_hi = np.empty(inner, np.int64)
    nd_mid = np.empty(inner, np.int64)
    nd_left = np.empty(inner, np.int64)
    nd_right = np.empty(inner, np.int64)
    # Preorder enumeration: pop a range, reserve the next index, push right
    # below left so the left subtree is numbered first.
    st_lo = np.empty(2 * sigma + 2, np.int64)
    st_hi = np.empty(2 * sigma + 2, np.int64)
    st_par = np.empty(2 * sigma + 2, np.int64)
    st_isl = np.empty(2 * sigma + 2, np.int64)
    sp = 0
    st_lo[0], st_hi[0], st_par[0], st_isl[0] = 0, sigma, -1, 0
    sp = 1
    idx = 0
    while sp > 0:
        sp -= 1
        lo, hi, par, isl = st_lo[sp], st_hi[sp], st_par[sp], st_isl[sp]
        if hi - lo == 1:
            code = -(lo + 1)
            if par >= 0:
                if isl:
                    nd_left[par] = code
                else:
                    nd_right[par] = code
            continue
        me = idx
        idx += 1
        nd_lo[me], nd_hi[me] = lo, hi
        mid = lo + (hi - lo + 1) // 2
        nd_mid[me] = mid
        if par >= 0:
            if isl:
                nd_left[par] = me
            else:
                nd_right[par] = me
        st_lo[sp], st_hi[sp], st_par[sp], st_isl[sp] = mid, hi, me, 0
        sp += 1
        st_lo[sp], st_hi[sp], st_par[sp], st_isl[sp] = lo, mid, me, 1
        sp += 1
    nd_nbits = np.empty(inner, np.int64)
    nd_woff = np.zeros(inner, np.int64)
    nd_soff = np.zeros(inner, np.int64)
    nd_boff = np.zeros(inner, np.int64)
    tw = ts = tb = np.int64(0)
    for i in range(inner):
        nbits = csum[nd_hi[i]] - csum[nd_lo[i]]
        nd_nbits[i] = nbits
        nd_woff[i], nd_soff[i], nd_boff[i] = tw, ts, tb
        nwords = (nbits + 63) >> 6
        tw += nwords
        ts += ((nbits + 511) >> 9) + 1
        tb += nwords
    words = np.zeros(tw, np.uint64)
    supers = np.zeros(ts, np.int64)
    blocks = np.zeros(tb, np.uint16)
    nd_ones = np.zeros(inner, np.int64)
    for i in range(inner):
        lo, hi, mid = nd_lo[i], nd_hi[i], nd_mid[i]
        woff = nd_woff[i]
        j = np.int64(0)
        ones = np.int64(0)
        for p in range(n):
            sym = data[p]
            if lo <= sym < hi:
                if sym >= mid:
                    words[woff + (j >> 6)] |= _U1 << np.uint64(j & 63)
                    ones += 1
                j += 1
        nd_ones[i] = ones
        nwords = (nd_nbits[i] + 63) >> 6
        nsup = (nd_nbits[i] + 511) >> 9
        soff, boff = nd_soff[i], nd_boff[i]
        cum = np.int64(0)
        for w in range(nwords):
            sb = w >> 3
            if (w & 7) == 0:
                supers[soff + sb] = cum
            blocks[boff + w] = np.uint16(cum - supers[soff + sb])
            cum += popcount64(words[woff + w])
        supers[soff + nsup] = cum
    return (nd_left, nd_right, nd_soff, nd_boff, nd_woff, nd_nbits, nd_ones,
            words, supers, blocks)


@njit
def wt_prv_pass(nd_left, nd_right, nd_soff, nd_boff, nd_woff, nd_nbits,
                nd_ones, words, supers, blocks, j, out_pv, t_buf):
    """Top-down pass: all sigma prefix counts of prefix length j.
    Returns nodes visited (inner nodes plus leaves)."""
    inner = nd_left.size
    visits = np.int64(0)
    t_buf[0] = j
    for i in range(inner):
        visits += 1
        ti = t_buf[i]
        t1 = bv_rank1(words, supers, blocks, nd_soff[i], nd_boff[i],
                      nd_woff[i], nd_nbits[i], nd_ones[i], ti)
        t0 = ti - t1
        l = nd_left[i]
        if l >= 0:
            t_buf[l] = t0
        else:
            out_pv[-l - 1] = t0
            visits += 1
        r = nd_right[i]
        if r >= 0:
            t_buf[r] = t1
        else:
            out_pv[-r - 1] = t1
            visits += 1
    return visits


@njit
def wt_firstfit_pass(nd_left, nd_right, nd_soff, nd_boff, nd_woff, nd_nbits,
                     nd_ones, words, supers, blocks, demands, x_buf):
    """Bottom-up pass: smallest prefix length dominating the leaf demands.
    x_buf receives the per-inner-node combined values; returns
    (position or INFEASIBLE, nodes visited)."""
    inner = nd_left.size
    visits = np.int64(0)
    for i in range(inner - 1, -1, -1):
        l = nd_left[i]
        if l >= 0:
            xl = x_buf[l]
        else:
            xl = demands[-l - 1]
            visits += 1
        r = nd_right[i]
        if r >= 0:
            xr = x_buf[r]
        else:
            xr = demands[-r - 1]
            visits += 1
        a = bv_select(words, supers, blocks, nd_soff[i], nd_boff[i],
                      nd_woff[i], nd_nbits[i], nd_ones[i], 0, xl)
        b = bv_select(words, supers, blocks, nd_soff[i], nd_boff[i],
                      nd_woff[i], nd_nbits[i], nd_ones[i], 1, xr)
        x_buf[i] = a if a >= b else b
        visits += 1
    return x_buf[0], visits


@njit
def wt_step(nd_left, nd_right, nd_soff, nd_boff, nd_woff, nd_nbits, nd_ones,
            words, supers, blocks, sigma, t_root, q, sign, out_pv, t_buf, x_buf):
    """Fused traversal: compute prv(t_root) on the way down, then combine the
    leaf demands prv(t_root)_k + sign*q_k on the way back up. One call visits
    each of the 2*sigma - 1 nodes once. Returns (position, visits)."""
    inner = nd_left.size
    t_buf[0] = t_root
    for i in range(inner):
        ti = t_buf[i]
        t1 = bv_rank1(words, supers, blocks, nd_soff[i], nd_boff[i],
                      nd_woff[i], nd_nbits[i], nd_ones[i], ti)
        t0 = ti - t1
        l = nd_left[i]
        if l >= 0:
            t_buf[l] = t0
        else:
            out_pv[-l - 1] = t0
        r = nd_right[i]
        if r >= 0:
            t_buf[r] = t1
        else:
            out_pv[-r - 1] = t1
    for i in range(inner - 1, -1, -1):
        l = nd_left[i]
        xl = x_buf[l] if l >= 0 else out_pv[-l - 1] + sign * q[-l - 1]
        r = nd_right[i]
        xr = x_buf[r] if r >= 0 else out_pv[-r - 1] + sign * q[-r - 1]
        a = bv_select(words, supers, blocks, nd_soff[i], nd_boff[i],
                      nd_woff[i], nd_nbits[i], nd_ones[i], 0, xl)
        b = bv_select(words, supers, blocks, nd_soff[i], nd_boff[i],
                      nd_woff[i], nd_nbits[i], nd_ones[i], 1, xr)
        x_buf[i] = a if a >= b else b
    return x_buf[0], np.int64(2 * sigma - 1)


@njit
def jump_wavelet(nd_left, nd_right, nd_soff, nd_boff, nd_woff, nd_nbits,
                 nd_ones, words, supers, blocks, n, sigma, q, first_only,
                 checked, want_rows, out_starts, row_l, row_r, row_f, row_k):
    """Jump engine over the wavelet tree. Each loop iteration runs at most
    two fused traversals, so total node visits stay within
    (2*sigma - 1) * (2*J + 2). Returns the same tuple as jump_table with
    node visits in the probe slot (ff and char probe slots are zero)."""
    m = np.int64(0)
    for k in range(sigma):
        m += q[k]
    n_occ = np.int64(0)
    J = np.int64(0)
    n_rows = np.int64(0)
    visits = np.int64(0)
    gap_sum = np.int64(0)
    gap_cnt = np.int64(0)
    viol = np.int64(0)
    zero = np.int64(0)
    if m > n or m <= 0:
        return n_occ, J, n_rows, visits, zero, zero, gap_sum, gap_cnt, viol
    prv_l = np.empty(sigma, np.int64)
    prv_r = np.empty(sigma, np.int64)
    chk = np.empty(sigma, np.int64)
    inner = nd_left.size
    t_buf = np.empty(inner, np.int64)
    x_buf = np.empty(inner, np.int64)
    L = np.int64(0)
    prev_L = np.int64(-1)
    while L <= n - m:
        J += 1
        R, v = wt_step(nd_left, nd_right, nd_soff, nd_boff, nd_woff, nd_nbits,
                       nd_ones, words, supers, blocks, sigma, L, q,
                       np.int64(1), prv_l, t_buf, x_buf)
        visits += v
        if R >= INFEASIBLE:
            break
        if checked:
            if L <= prev_L:
                viol += 1
            prev_L = L
            if L > R:
                viol += 1
            s = np.int64(0)
            for k in range(sigma):
                s += prv_l[k]
            if s != L:
                viol += 1
            wt_prv_pass(nd_left, nd_right, nd_soff, nd_boff, nd_woff,
                        nd_nbits, nd_ones, words, supers, blocks, R, chk, t_buf)
            for k in range(sigma):
                if chk[k] - prv_l[k] < q[k]:
                    viol += 1
        matched = R - L == m
        if want_rows:
            row_l[n_rows] = L
            row_r[n_rows] = R
            row_f[n_rows] = 1 if matched else 0
            row_k[n_rows] = 0
            n_rows += 1
        if matched:
            out_starts[n_occ] = L + 1
            n_occ += 1
            if first_only:
                return n_occ, J, n_rows, visits, zero, zero, gap_sum, gap_cnt, viol
            L += 1
            continue
        gap_sum += R - L
        gap_cnt += 1
        Lnew, v = wt_step(nd_left, nd_right, nd_soff, nd_boff, nd_woff,
                          nd_nbits, nd_ones, words, supers, blocks, sigma, R,
                          q, np.int64(-1), prv_r, t_buf, x_buf)
        visits += v
        if Lnew >= INFEASIBLE:
            viol += 1
            break
        if checked:
            if Lnew > R or Lnew <= L:
                viol += 1
            wt_prv_pass(nd_left, nd_right, nd_soff, nd_boff, nd_woff,
                        nd_nbits, nd_ones, words, supers, blocks, Lnew, chk, t_buf)
            for k in range(sigma):
                if prv_r[k] - chk[k] > q[k]:
                    viol += 1
        if R - Lnew == m:
            if want_rows:
                row_l[n_rows] = Lnew
                row_r[n_rows] = R
                row_f[n_rows] = 1
                row_k[n_rows] = 1
                n_rows += 1
            out_starts[n_occ] = Lnew + 1
            n_occ += 1
            if first_only:
                return n_occ, J, n_rows, visits, zero, zero, gap_sum, gap_cnt, viol
            L = Lnew + 1
        else:
            L = Lnew
    return n_occ, J, n_rows, visits, zero, zero, gap_sum, gap_cnt, viol
