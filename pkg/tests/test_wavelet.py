import numpy as np
import pytest

from jpm.core import EncodedText, INFEASIBLE, ParikhVector
from jpm.prefix_index import build_table
from jpm.wavelet import WaveletTree, build_wavelet, wt_firstfit, wt_prv
from jpm import _kernels
from conftest import make_text

TEXT4 = "bbacaccabaddabccaaac"
TEXT3 = "cabcccaaabccbaacca"

# prefix counts of TEXT3, one row per symbol, columns are prefix lengths 1..18
TEXT3_PREFIX_ROWS = {
    "a": [0, 1, 1, 1, 1, 1, 2, 3, 4, 4, 4, 4, 4, 5, 6, 6, 6, 7],
    "b": [0, 0, 1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 3, 3, 3, 3, 3, 3],
    "c": [1, 1, 1, 2, 3, 4, 4, 4, 4, 4, 5, 6, 6, 6, 6, 7, 8, 8],
}


class TestBuild:
    def test_reference_tree_shape_and_bits(self):
        wt = build_wavelet(EncodedText.from_str(TEXT4))
        # alphabet splits {a,b} | {c,d}; routed subsequences are
        # "bbaaabaabaaa" on the left and "cccddccc" on the right
        assert wt.node_bits(0, 4) == "00010110001100110001"
        assert wt.node_bits(0, 2) == "110001001000"
        assert wt.node_bits(2, 4) == "00011000"

    def test_single_symbol_has_no_nodes(self):
        wt = build_wavelet(EncodedText.from_str("aaaa"))
        assert wt.nodes == []
        assert tuple(wt.prv(3)) == (3,)
        assert wt.firstfit((2,)) == 2
        assert wt.firstfit((5,)) == INFEASIBLE

    def test_binary_alphabet_single_node_is_binary_image(self):
        wt = build_wavelet(EncodedText.from_str("abbab"))
        assert len(wt.nodes) == 1
        assert wt.node_bits(0, 2) == "01101"

    def test_node_lengths_partition_text(self, rng):
        t = make_text(rng, 333, 7)
        wt = build_wavelet(t)
        root = wt.nodes[0]
        assert root.bv.nbits == t.n
        for nd in wt.nodes:
            routed = np.count_nonzero((t.data >= nd.lo) & (t.data < nd.hi))
            assert nd.bv.nbits == routed

    def test_kernel_build_matches_class_layout(self, rng):
        for sigma in (2, 3, 4, 5, 8):
            t = make_text(rng, int(rng.integers(1, 400)), sigma)
            wt = build_wavelet(t)
            arrs = _kernels.build_wavelet_arrays(t.data, sigma)
            ref = (wt._left, wt._right, wt._soff, wt._boff, wt._woff,
                   wt._nbits, wt._ones, wt._words, wt._supers, wt._blocks)
            for got, want in zip(arrs, ref):
                assert np.array_equal(got, want)


class TestPrv:
    def test_full_prefix(self):
        wt = build_wavelet(EncodedText.from_str(TEXT4))
        assert tuple(wt.prv(20)) == (8, 4, 6, 2)

    def test_empty_prefix(self):
        wt = build_wavelet(EncodedText.from_str(TEXT4))
        assert tuple(wt.prv(0)) == (0, 0, 0, 0)

    def test_all_prefixes_of_reference_text(self):
        wt = build_wavelet(EncodedText.from_str(TEXT3))
        for j in range(1, 19):
            want = tuple(TEXT3_PREFIX_ROWS[sym][j - 1] for sym in "abc")
            assert tuple(wt.prv(j)) == want

    def test_out_of_range(self):
        wt = build_wavelet(EncodedText.from_str(TEXT4))
        with pytest.raises(IndexError):
            wt.prv(21)

    def test_visit_budget(self, rng):
        for sigma in (2, 3, 4, 8, 16):
            t = make_text(rng, 100, sigma)
            wt = build_wavelet(t)
            _, visits = wt.prv_counted(int(rng.integers(0, 101)))
            assert visits <= 2 * sigma - 1


class TestFirstfit:
    def test_reference_cascade(self):
        wt = build_wavelet(EncodedText.from_str(TEXT4))
        pos, values = wt.firstfit((2, 3, 2, 1), node_values=True)
        assert pos == 11
        assert values[("a", "b")] == 6
        assert values[("c", "d")] == 4
        assert values[("a", "b", "c", "d")] == 11

    def test_zero_vector(self):
        wt = build_wavelet(EncodedText.from_str(TEXT4))
        assert wt.firstfit((0, 0, 0, 0)) == 0

    def test_infeasible_propagates(self):
        wt = build_wavelet(EncodedText.from_str(TEXT4))
        assert wt.firstfit((9, 0, 0, 0)) == INFEASIBLE
        assert wt.firstfit((0, 0, 0, 3)) == INFEASIBLE

    def test_visit_budget(self, rng):
        for sigma in (2, 4, 16):
            t = make_text(rng, 100, sigma)
            wt = build_wavelet(t)
            _, visits = wt.firstfit_counted(rng.integers(0, 5, sigma))
            assert visits <= 2 * sigma - 1

    def test_dimension_mismatch(self):
        wt = build_wavelet(EncodedText.from_str(TEXT4))
        with pytest.raises(ValueError, match="dimension"):
            wt.firstfit((1, 1))


class TestBackendEquivalence:
    def test_exhaustive_small(self, rng):
        # all prefix lengths and all short demand vectors on assorted texts
        for sigma in (2, 3, 4):
            for _ in range(4):
                t = make_text(rng, int(rng.integers(1, 65)), sigma)
                tbl = build_table(t)
                wt = build_wavelet(t)
                for j in range(t.n + 1):
                    assert wt.prv(j) == tbl.prv(j)
                grid = range(0, min(t.n, 6) + 1)
                stack = [[]]
                for _ in range(sigma):
                    stack = [s + [v] for s in stack for v in grid]
                for p in stack:
                    assert wt.firstfit(p) == tbl.firstfit(p)

    def test_randomized_large(self, rng):
        for _ in range(20):
            t = make_text(rng, 2000, int(rng.integers(2, 9)))
            tbl = build_table(t)
            wt = build_wavelet(t)
            sigma = t.alphabet.size
            for _ in range(50):
                j = int(rng.integers(0, t.n + 1))
                assert wt.prv(j) == tbl.prv(j)
                p = rng.integers(0, 2 * t.n // sigma, sigma)
                assert wt.firstfit(p) == tbl.firstfit(p)

    def test_fused_step_matches_separate_ops(self, rng):
        for _ in range(30):
            t = make_text(rng, 300, 4)
            wt = build_wavelet(t)
            tbl = build_table(t)
            q = rng.integers(0, 10, 4)
            j = int(rng.integers(0, t.n + 1))
            pos, pv = wt.step(j, q, 1)
            assert tuple(pv) == tuple(tbl.prv(j))
            want = tbl.firstfit(np.asarray(tuple(tbl.prv(j))) + q)
            assert pos == want


class TestSerialization:
    def test_roundtrip(self, rng):
        for sigma in (1, 2, 4, 6):
            t = make_text(rng, int(rng.integers(1, 300)), sigma)
            wt = build_wavelet(t)
            back = WaveletTree.from_bytes(wt.to_bytes())
            assert back.alphabet == wt.alphabet and back.n == wt.n
            for j in (0, t.n // 2, t.n):
                assert back.prv(j) == wt.prv(j)
            p = rng.integers(0, 4, sigma)
            assert back.firstfit(p) == wt.firstfit(p)

    def test_module_level_wrappers(self):
        wt = build_wavelet(EncodedText.from_str(TEXT4))
        assert tuple(wt_prv(wt, 20)) == (8, 4, 6, 2)
        assert wt_firstfit(wt, (2, 3, 2, 1)) == 11
