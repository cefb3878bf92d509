import numpy as np
import pytest

from jpm.bitvector import INFEASIBLE, RankSelectBitVector


def naive_rank(bits, bit, i):
    seg = bits[:i]
    return int(np.count_nonzero(seg == bit))


class TestRank:
    def test_small_example(self):
        bv = RankSelectBitVector([1, 0, 1, 0])
        assert bv.rank(1, 3) == 2
        assert bv.rank(0, 3) == 1

    def test_empty_prefix(self):
        bv = RankSelectBitVector([1, 1, 0])
        assert bv.rank(1, 0) == 0
        assert bv.rank(0, 0) == 0

    def test_out_of_range(self):
        bv = RankSelectBitVector([1, 0])
        with pytest.raises(IndexError):
            bv.rank(1, 3)
        with pytest.raises(IndexError):
            bv.rank(1, -1)

    def test_random_against_naive_scan(self, rng):
        # about 1e5 (vector, index) pairs in total
        for _ in range(200):
            n = int(rng.integers(1, 700))
            bits = rng.integers(0, 2, n).astype(np.uint8)
            bv = RankSelectBitVector(bits)
            idxs = rng.integers(0, n + 1, 500)
            got1 = bv.rank(1, idxs)
            got0 = bv.rank(0, idxs)
            cum = np.concatenate([[0], np.cumsum(bits)])
            assert np.array_equal(got1, cum[idxs])
            assert np.array_equal(got0, idxs - cum[idxs])

    def test_superblock_boundaries(self):
        n = 4 * 512 + 7
        bits = np.ones(n, dtype=np.uint8)
        bv = RankSelectBitVector(bits)
        for i in (0, 63, 64, 511, 512, 513, 1024, n - 1, n):
            assert bv.rank(1, i) == i


class TestSelect:
    def test_small_example(self):
        bv = RankSelectBitVector([1, 0, 1, 0])
        assert bv.select(1, 2) == 3
        assert bv.select(0, 2) == 4

    def test_zeroth_is_zero(self):
        bv = RankSelectBitVector([0, 1])
        assert bv.select(0, 0) == 0
        assert bv.select(1, 0) == 0

    def test_overflow_is_infeasible(self):
        bv = RankSelectBitVector([1, 0, 1])
        assert bv.select(1, 3) == INFEASIBLE
        assert bv.select(0, 2) == INFEASIBLE
        assert INFEASIBLE > bv.nbits

    def test_random_against_positions(self, rng):
        for _ in range(150):
            n = int(rng.integers(1, 1500))
            bits = rng.integers(0, 2, n).astype(np.uint8)
            bv = RankSelectBitVector(bits)
            for bit in (0, 1):
                pos = np.flatnonzero(bits == bit) + 1
                got = bv.select_batch(bit, np.arange(1, pos.size + 1))
                assert np.array_equal(got, pos)


class TestLaws:
    @pytest.mark.parametrize("pattern", ["random", "zeros", "ones", "alternating"])
    def test_rank_select_identities(self, pattern, rng):
        for trial in range(30):
            n = int(rng.integers(1, 2000))
            if pattern == "random":
                bits = rng.integers(0, 2, n).astype(np.uint8)
            elif pattern == "zeros":
                bits = np.zeros(n, dtype=np.uint8)
            elif pattern == "ones":
                bits = np.ones(n, dtype=np.uint8)
            else:
                bits = (np.arange(n) % 2).astype(np.uint8)
            bv = RankSelectBitVector(bits)
            i = np.arange(n + 1)
            assert np.array_equal(bv.rank(0, i) + bv.rank(1, i), i)
            for bit in (0, 1):
                total = bv.rank(bit, n)
                # select(rank(i)) <= i
                sel = bv.select_batch(bit, bv.rank(bit, i))
                assert np.all(sel <= i)
                # rank(select(j)) == j for 1 <= j <= total
                js = np.arange(1, total + 1)
                positions = bv.select_batch(bit, js)
                assert np.array_equal(bv.rank(bit, positions), js)


class TestSpace:
    def test_aux_ratio_below_half_at_64k(self):
        n = 1 << 16
        bv = RankSelectBitVector(np.random.default_rng(1).integers(0, 2, n).astype(np.uint8))
        assert bv.aux_bits() <= 0.5 * n

    def test_aux_ratio_converges_to_three_eighths(self):
        n = 1 << 20
        bv = RankSelectBitVector(np.zeros(n, dtype=np.uint8))
        assert abs(bv.aux_bits() / n - 0.375) < 0.01


class TestRoundTrips:
    def test_bits_roundtrip(self, rng):
        bits = rng.integers(0, 2, 130).astype(np.uint8)
        bv = RankSelectBitVector(bits)
        assert np.array_equal(bv.to_bits(), bits)
        assert bv.to_bit_string() == "".join(str(b) for b in bits)
        assert [bv.bit(i + 1) for i in range(130)] == bits.tolist()

    def test_empty_vector(self):
        bv = RankSelectBitVector([])
        assert bv.rank(1, 0) == 0
        assert bv.select(1, 1) == INFEASIBLE
        assert len(bv) == 0
