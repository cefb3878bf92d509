import math
from collections import Counter
from itertools import combinations

import numpy as np
import pytest

from jpm.core import EncodedText
from jpm.genstat import (
    CSV_COLUMNS,
    ExperimentConfig,
    ExperimentResult,
    ExperimentRow,
    gen_fixed_length,
    gen_quasi_balanced,
    gen_text,
    run_experiment,
    trend_check,
)
from jpm.jumping import jump_search
from jpm.prefix_index import build_table


class TestGenText:
    def test_deterministic(self):
        assert gen_text(500, 4, 99) == gen_text(500, 4, 99)

    def test_single_symbol(self):
        assert gen_text(10, 1, 0).decode() == "a" * 10

    def test_frequencies_concentrate(self):
        n, sigma = 100_000, 4
        t = gen_text(n, sigma, 7)
        counts = np.bincount(t.data, minlength=sigma)
        sd = math.sqrt(n * (1 / sigma) * (1 - 1 / sigma))
        assert np.all(np.abs(counts - n / sigma) <= 3 * sd)

    def test_validation(self):
        with pytest.raises(ValueError):
            gen_text(0, 2, 0)
        with pytest.raises(ValueError):
            gen_text(5, 0, 0)


class TestQuasiBalanced:
    def test_values_inside_open_interval(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            q = gen_quasi_balanced(4, 100, 10, rng)
            assert all(91 <= c <= 109 for c in q)

    def test_epsilon_one_is_exact(self):
        assert tuple(gen_quasi_balanced(3, 5, 1, 0)) == (5, 5, 5)

    def test_clamped_at_zero_never_negative(self):
        rng = np.random.default_rng(4)
        for _ in range(500):
            q = gen_quasi_balanced(5, 3, 10, rng)
            assert min(q) >= 0 and max(q) <= 12
            assert q.length >= 1  # all-zero draws are resampled

    def test_component_histogram_uniform(self):
        # chi-squared over the 2*eps - 1 admissible values, alpha = 0.01
        rng = np.random.default_rng(11)
        samples = 100_000
        sigma, x, eps = 4, 100, 10
        draws = np.concatenate(
            [gen_quasi_balanced(sigma, x, eps, rng).counts for _ in range(samples // sigma)])
        values, counts = np.unique(draws, return_counts=True)
        assert values.min() == 91 and values.max() == 109
        expected = draws.size / 19
        chi2 = float(((counts - expected) ** 2 / expected).sum())
        assert chi2 < 34.805  # df = 18, alpha = 0.01

    def test_degenerate_interval_rejected(self):
        with pytest.raises(ValueError):
            gen_quasi_balanced(3, 0, 1, 0)


class TestFixedLength:
    def test_total_always_m(self):
        rng = np.random.default_rng(5)
        for _ in range(300):
            sigma = int(rng.integers(1, 7))
            m = int(rng.integers(1, 40))
            assert gen_fixed_length(sigma, m, rng).length == m

    def test_single_symbol(self):
        assert tuple(gen_fixed_length(1, 7, 0)) == (7,)

    def test_uniform_over_compositions(self):
        # sigma=2, m=2 has exactly three compositions at 1/3 each
        rng = np.random.default_rng(6)
        samples = 100_000
        freq = Counter(tuple(gen_fixed_length(2, 2, rng)) for _ in range(samples))
        assert set(freq) == {(2, 0), (1, 1), (0, 2)}
        expected = samples / 3
        chi2 = sum((c - expected) ** 2 / expected for c in freq.values())
        assert chi2 < 9.210  # df = 2, alpha = 0.01

    def test_uniform_against_enumeration(self):
        # sigma=3, m=4: 15 compositions, frequency test at alpha = 0.01
        sigma, m = 3, 4
        comps = set()
        for bars in combinations(range(m + sigma - 1), sigma - 1):
            prev, parts = -1, []
            for b in bars:
                parts.append(b - prev - 1)
                prev = b
            parts.append(m + sigma - 2 - prev)
            comps.add(tuple(parts))
        assert len(comps) == math.comb(m + sigma - 1, sigma - 1)
        rng = np.random.default_rng(8)
        samples = 60_000
        freq = Counter(tuple(gen_fixed_length(sigma, m, rng)) for _ in range(samples))
        assert set(freq) == comps
        expected = samples / len(comps)
        chi2 = sum((c - expected) ** 2 / expected for c in freq.values())
        assert chi2 < 29.141  # df = 14, alpha = 0.01


class TestRunExperiment:
    def test_deterministic_given_seed(self):
        cfg = ExperimentConfig(n=3000, sigma=3, m_values=(8, 32), texts=2,
                               queries_per_text=5, seed=21)
        a = run_experiment(cfg, "table").to_csv(include_timing=False)
        b = run_experiment(cfg, "table").to_csv(include_timing=False)
        assert a == b

    def test_backends_agree_on_counters(self):
        cfg = ExperimentConfig(n=2000, sigma=4, m_values=(16,), texts=2,
                               queries_per_text=8, seed=2)
        rt = run_experiment(cfg, "table").rows[0]
        rw = run_experiment(cfg, "wavelet").rows[0]
        assert rt.mean_J == rw.mean_J
        assert rt.mean_occurrences == rw.mean_occurrences
        assert rt.mean_gap == rw.mean_gap

    def test_unit_length_queries(self):
        # single-symbol queries: occurrences equal that symbol's count and
        # the loop runs once per reported position plus bounded overhead
        cfg = ExperimentConfig(n=400, sigma=3, m_values=(1,), texts=3,
                               queries_per_text=6, seed=9)
        res = run_experiment(cfg, "table")
        row = res.rows[0]
        total = 0
        checks = 0
        for ti in range(3):
            t = gen_text(400, 3, np.random.SeedSequence((9, 0, 0, ti)))
            tbl = build_table(t)
            qrng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((9, 1, 0, ti))))
            for _ in range(6):
                while True:
                    q = gen_quasi_balanced(3, 1, 10, qrng)
                    if q.length == 1:
                        break
                starts, tr = jump_search(tbl, q)
                sym = int(np.argmax(q.counts))
                assert len(starts) == int(np.count_nonzero(t.data == sym))
                total += len(starts)
                checks += tr.iterations
        assert row.mean_occurrences == total / 18
        assert row.mean_J == checks / 18

    def test_fixed_text_mode(self):
        text = gen_text(5000, 4, 123)
        cfg = ExperimentConfig(n=5000, sigma=4, m_values=(32,), texts=3,
                               queries_per_text=5, seed=1)
        res = run_experiment(cfg, "table", text=text)
        assert res.rows[0].queries == 15

    def test_gap_exceeds_query_length(self):
        # an R jump lands at least m positions past L
        cfg = ExperimentConfig(n=4000, sigma=4, m_values=(16, 64), texts=2,
                               queries_per_text=6, seed=3)
        for row in run_experiment(cfg, "table").rows:
            assert row.mean_gap >= row.m

    def test_csv_schema(self):
        cfg = ExperimentConfig(n=1000, sigma=2, m_values=(4,), texts=1,
                               queries_per_text=2, seed=0)
        csv = run_experiment(cfg, "table").to_csv()
        header = csv.splitlines()[0].split(",")
        assert header == CSV_COLUMNS
        no_timing = run_experiment(cfg, "table").to_csv(include_timing=False)
        assert no_timing.splitlines()[0].split(",") == CSV_COLUMNS[:-2]

    def test_bad_config(self):
        with pytest.raises(ValueError):
            ExperimentConfig(n=100, sigma=2, m_values=(200,))
        with pytest.raises(ValueError):
            ExperimentConfig(n=100, sigma=2, query_model="nonsense")
        with pytest.raises(ValueError):
            ExperimentConfig(n=100, sigma=2, epsilon=0)
        cfg = ExperimentConfig(n=100, sigma=2)
        with pytest.raises(ValueError):
            run_experiment(cfg, "interval")


def _synthetic_result(ms, js, n=1000, sigma=2):
    cfg = ExperimentConfig(n=n, sigma=sigma, m_values=tuple(ms))
    res = ExperimentResult(cfg, "table")
    for m, j in zip(ms, js):
        res.rows.append(ExperimentRow(
            n=n, sigma=sigma, m=m, query_model="quasi-balanced",
            backend="table", texts=1, queries=1, mean_J=j,
            mean_occurrences=0.0, mean_gap=float(m), mean_probe_count=0.0,
            mean_window_steps=float(n), jump_time_s=0.0, window_time_s=0.0))
    return res


class TestTrendCheck:
    def test_sqrt_decay_passes(self):
        ms = [16, 64, 256]
        js = [1000 / math.sqrt(m) for m in ms]
        rep = trend_check(_synthetic_result(ms, js))
        assert not rep.flagged
        assert abs(rep.slope + 0.5) < 1e-9

    def test_constant_jumps_flagged(self):
        rep = trend_check(_synthetic_result([4, 16, 64], [500.0, 500.0, 500.0]))
        assert rep.flagged
        assert abs(rep.slope) < 1e-9

    def test_alternating_text_family_flagged(self):
        # worst-case texts keep J at n/2 regardless of the length grid cell
        k = 500
        t = EncodedText.from_str("ab" * k)
        tbl = build_table(t)
        _, tr = jump_search(tbl, (2, 0))
        assert tr.iterations == k
        rep = trend_check(_synthetic_result([2, 8, 32], [float(tr.iterations)] * 3,
                                            n=2 * k))
        assert rep.flagged

    def test_degenerate_input(self):
        with pytest.raises(ValueError, match="degenerate"):
            trend_check(_synthetic_result([4], [10.0]))

    def test_reports_constant_and_residuals(self):
        ms = [16, 64, 256]
        n, sigma = 100_000, 4
        js = [0.8 * n / math.sqrt(m * sigma * math.log(sigma)) for m in ms]
        rep = trend_check(_synthetic_result(ms, js, n=n, sigma=sigma))
        assert abs(rep.c_fit - 0.8) < 1e-6
        assert max(abs(r) for r in rep.residuals) < 1e-9
