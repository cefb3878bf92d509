"""Random instance generation and jump-count experiments.

Texts are i.i.d. uniform over the alphabet. Queries come in two models:

* quasi-balanced: every component drawn uniformly from the open interval
  (x - eps, x + eps), clamped below at zero, around a common center x.
  These are the hardest shape for the jump engine because balanced demands
  minimize how far each R jump can reach.
* fixed-length: uniform over all count vectors with a given total m
  (compositions of m into sigma non-negative parts).

``run_experiment`` aggregates jump counts, occurrence counts, window-baseline
step counts, probe counters, and the mean R-L gap after matchless R jumps
per (m, model, back-end) cell, deterministically for a given seed: every
(m, text, purpose) cell derives its own PCG64 stream from
SeedSequence((seed, purpose, m_index, text_index)), so results are
independent of execution order. CSV output follows CSV_COLUMNS.
"""

from __future__ import annotations

import io
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .core import Alphabet, EncodedText, ParikhVector, window_search_starts
from .jumping import jump_search
from .prefix_index import build_table
from .wavelet import build_wavelet

SCHEMA_VERSION = 1

#: CSV column order; timing columns are the last two and can be suppressed.
CSV_COLUMNS = [
    "schema_version", "n", "sigma", "m", "query_model", "backend",
    "texts", "queries", "mean_J", "mean_occurrences", "mean_gap",
    "mean_probe_count", "mean_window_steps", "jump_time_s", "window_time_s",
]

QUERY_MODELS = ("quasi-balanced", "fixed-length")
BACKENDS = ("table", "wavelet")


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def _alphabet(sigma: int) -> Alphabet:
    if not 1 <= sigma <= 26:
        raise ValueError("generated alphabets support 1..26 symbols")
    return Alphabet(tuple(chr(ord("a") + i) for i in range(sigma)))


def gen_text(n: int, sigma: int, seed) -> EncodedText:
    """Uniform i.i.d. text of length n; deterministic for a given seed."""
    if n < 1 or sigma < 1:
        raise ValueError("n and sigma must be positive")
    rng = _rng(seed)
    data = rng.integers(0, sigma, size=n, dtype=np.int64)
    return EncodedText(_alphabet(sigma), data)


def gen_quasi_balanced(sigma: int, x: int, epsilon: int, seed) -> ParikhVector:
    """Vector with every component uniform over the integers strictly inside
    (x - epsilon, x + epsilon), clamped below at 0. All-zero draws are
    rejected and resampled."""
    if epsilon < 1:
        raise ValueError("epsilon must be at least 1")
    if x < 0:
        raise ValueError("center must be non-negative")
    rng = _rng(seed)
    lo = max(0, x - epsilon + 1)
    hi = x + epsilon - 1
    if hi <= 0 and lo <= 0:
        raise ValueError("sampling interval admits only the zero vector")
    while True:
        counts = rng.integers(lo, hi + 1, size=sigma, dtype=np.int64)
        if counts.any():
            return ParikhVector(counts)


def gen_fixed_length(sigma: int, m: int, seed) -> ParikhVector:
    """Uniform over all compositions of m into sigma non-negative parts."""
    if m < 1:
        raise ValueError("length must be positive")
    if sigma == 1:
        return ParikhVector([m])
    rng = _rng(seed)
    bars = np.sort(rng.choice(m + sigma - 1, size=sigma - 1, replace=False))
    counts = np.empty(sigma, dtype=np.int64)
    counts[0] = bars[0]
    counts[1:-1] = np.diff(bars) - 1
    counts[-1] = (m + sigma - 2) - bars[-1]
    return ParikhVector(counts)


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    sigma: int
    query_model: str = "quasi-balanced"
    m_values: tuple[int, ...] | None = None
    m_lo: int | None = None
    m_hi: int | None = None
    m_points: int = 8
    epsilon: int = 10
    texts: int = 10
    queries_per_text: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.query_model not in QUERY_MODELS:
            raise ValueError(f"unknown query model {self.query_model!r}")
        if self.epsilon < 1:
            raise ValueError("epsilon must be at least 1")
        if self.texts < 1 or self.queries_per_text < 1:
            raise ValueError("texts and queries_per_text must be positive")
        for m in self.resolved_m_values():
            if not 1 <= m <= self.n:
                raise ValueError(f"query length {m} out of range 1..{self.n}")

    def resolved_m_values(self) -> tuple[int, ...]:
        """Explicit lengths, or a geometric grid between the defaults
        log2(n) and sqrt(n)."""
        if self.m_values is not None:
            return tuple(self.m_values)
        lo = self.m_lo if self.m_lo is not None else max(1, int(math.log2(max(self.n, 2))))
        hi = self.m_hi if self.m_hi is not None else max(lo, int(math.isqrt(self.n)))
        if lo < 1 or hi > self.n or lo > hi:
            raise ValueError(f"bad length range [{lo}, {hi}] for n={self.n}")
        pts = np.unique(np.geomspace(lo, hi, self.m_points).round().astype(int))
        return tuple(int(v) for v in pts)


@dataclass
class ExperimentRow:
    n: int
    sigma: int
    m: int
    query_model: str
    backend: str
    texts: int
    queries: int
    mean_J: float
    mean_occurrences: float
    mean_gap: float
    mean_probe_count: float
    mean_window_steps: float
    jump_time_s: float
    window_time_s: float


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    backend: str
    rows: list[ExperimentRow] = field(default_factory=list)

    def to_csv(self, include_timing: bool = True) -> str:
        cols = CSV_COLUMNS if include_timing else CSV_COLUMNS[:-2]
        buf = io.StringIO()
        buf.write(",".join(cols) + "\n")
        for r in self.rows:
            vals = {
                "schema_version": SCHEMA_VERSION, "n": r.n, "sigma": r.sigma,
                "m": r.m, "query_model": r.query_model, "backend": r.backend,
                "texts": r.texts, "queries": r.queries,
                "mean_J": f"{r.mean_J:.6g}",
                "mean_occurrences": f"{r.mean_occurrences:.6g}",
                "mean_gap": f"{r.mean_gap:.6g}",
                "mean_probe_count": f"{r.mean_probe_count:.6g}",
                "mean_window_steps": f"{r.mean_window_steps:.6g}",
                "jump_time_s": f"{r.jump_time_s:.6g}",
                "window_time_s": f"{r.window_time_s:.6g}",
            }
            buf.write(",".join(str(vals[c]) for c in cols) + "\n")
        return buf.getvalue()


def _gen_query(cfg: ExperimentConfig, m: int, rng: np.random.Generator) -> ParikhVector:
    if cfg.query_model == "fixed-length":
        return gen_fixed_length(cfg.sigma, m, rng)
    # Quasi-balanced cells aggregate queries of one size, so draws around
    # x = m/sigma are conditioned on total length exactly m (uniform over all
    # quasi-balanced vectors of that length).
    x = max(1, round(m / cfg.sigma))
    for _ in range(100_000):
        q = gen_quasi_balanced(cfg.sigma, x, cfg.epsilon, rng)
        if q.length == m:
            return q
    raise RuntimeError(f"could not sample a quasi-balanced vector of length {m}")


def run_experiment(cfg: ExperimentConfig, backend: str = "table",
                   text: EncodedText | None = None, baseline: bool = True,
                   timing_repeats: int = 1) -> ExperimentResult:
    """Run the jump engine over the configured grid and aggregate per cell.

    With ``text`` given (e.g. a genomic sequence), the text is held fixed and
    only queries are random; otherwise each repetition draws a fresh text.
    ``timing_repeats`` > 1 re-times each cell that many times and keeps the
    median (counters are unaffected).
    """
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    if text is not None and text.alphabet.size != cfg.sigma:
        raise ValueError("fixed text alphabet size does not match config")
    build = build_table if backend == "table" else build_wavelet
    result = ExperimentResult(cfg, backend)
    for mi, m in enumerate(cfg.resolved_m_values()):
        tot_J = tot_occ = tot_gap_sum = tot_gap_cnt = tot_probes = tot_wsteps = 0
        queries_run = 0
        jump_times: list[float] = []
        window_times: list[float] = []
        plans = []  # (index, queries) per text, reused for timing repeats
        for ti in range(cfg.texts):
            t = text if text is not None else \
                gen_text(cfg.n, cfg.sigma, np.random.SeedSequence((cfg.seed, 0, mi, ti)))
            index = build(t)
            qrng = _rng(np.random.SeedSequence((cfg.seed, 1, mi, ti)))
            queries = [_gen_query(cfg, m, qrng) for _ in range(cfg.queries_per_text)]
            plans.append((t, index, queries))
            for q in queries:
                starts, tr = jump_search(index, q)
                tot_J += tr.iterations
                tot_occ += len(starts)
                tot_gap_sum += tr.gap_sum
                tot_gap_cnt += tr.gap_count
                tot_probes += sum(tr.probes.values())
                if baseline:
                    _, steps = window_search_starts(t, q)
                    tot_wsteps += steps
                queries_run += 1
        for _ in range(max(1, timing_repeats)):
            t0 = time.perf_counter()
            for _, index, queries in plans:
                for q in queries:
                    jump_search(index, q)
            jump_times.append(time.perf_counter() - t0)
            if baseline:
                t0 = time.perf_counter()
                for t, _, queries in plans:
                    for q in queries:
                        window_search_starts(t, q)
                window_times.append(time.perf_counter() - t0)
        result.rows.append(ExperimentRow(
            n=cfg.n, sigma=cfg.sigma, m=m, query_model=cfg.query_model,
            backend=backend, texts=cfg.texts, queries=queries_run,
            mean_J=tot_J / queries_run,
            mean_occurrences=tot_occ / queries_run,
            mean_gap=tot_gap_sum / tot_gap_cnt if tot_gap_cnt else float("nan"),
            mean_probe_count=tot_probes / queries_run,
            mean_window_steps=tot_wsteps / queries_run if baseline else float("nan"),
            jump_time_s=float(np.median(jump_times)),
            window_time_s=float(np.median(window_times)) if baseline else float("nan"),
        ))
    return result


@dataclass
class TrendReport:
    """Fit of mean jump counts against the sublinear prediction."""

    slope: float            # fitted exponent of m in log-log space
    c_fit: float            # constant in mean_J ~ c * n / sqrt(m sigma ln sigma)
    residuals: list[float]  # log-space residuals of the c-fit
    decrease_ratio: float   # mean_J(smallest m) / mean_J(largest m)
    decrease_threshold: float
    flagged: bool           # true when the decrease is weaker than required

    def __str__(self):
        status = "FLAGGED" if self.flagged else "ok"
        return (f"TrendReport(slope={self.slope:.3f}, c={self.c_fit:.3f}, "
                f"decrease={self.decrease_ratio:.2f} vs >= "
                f"{self.decrease_threshold:.2f}, {status})")


def trend_check(result: ExperimentResult) -> TrendReport:
    """Least-squares log-log fit of mean J vs m, plus a sanity flag: mean J
    must fall by at least sqrt(m_hi/m_lo)/2 between the extreme lengths."""
    rows = sorted(result.rows, key=lambda r: r.m)
    if len(rows) < 2:
        raise ValueError("degenerate fit: need at least two length points")
    ms = np.array([r.m for r in rows], dtype=float)
    js = np.array([r.mean_J for r in rows], dtype=float)
    if np.any(js <= 0):
        raise ValueError("degenerate fit: non-positive mean jump count")
    slope, _ = np.polyfit(np.log(ms), np.log(js), 1)
    sigma = rows[0].sigma
    n = rows[0].n
    pred = n / np.sqrt(ms * sigma * math.log(sigma)) if sigma > 1 else np.full_like(ms, n)
    log_c = np.log(js) - np.log(pred)
    c_fit = float(np.exp(log_c.mean()))
    residuals = (log_c - log_c.mean()).tolist()
    ratio = float(js[0] / js[-1])
    threshold = math.sqrt(ms[-1] / ms[0]) / 2
    return TrendReport(slope=float(slope), c_fit=c_fit, residuals=residuals,
                       decrease_ratio=ratio, decrease_threshold=threshold,
                       flagged=ratio < threshold)
