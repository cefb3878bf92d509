"""Jumbled (Parikh vector) pattern matching.

Does a multiset of characters occur as a contiguous substring, and where?
The package provides the linear-scan window matcher, an O(1)-decision
interval index for binary texts, and the jump engine over two O(n) index
back-ends (inverted prefix table and wavelet tree), plus generators and a
benchmark harness for jump-count experiments.
"""

from .core import (
    INFEASIBLE,
    Alphabet,
    EncodedText,
    Occurrence,
    ParikhVector,
    concat_fasta,
    infer_alphabet,
    load_fasta,
    load_text,
    parikh,
    pv_add,
    pv_leq,
    pv_sub,
    window_search,
    window_search_starts,
)
from .bitvector import RankSelectBitVector
from .interval import IntervalIndex, build_eager, decide, fill_lazy
from .prefix_index import (
    InvertedPrefixTable,
    ProbeCounter,
    build_table,
    firstfit_table,
    prv_bounded,
)
from .wavelet import WaveletTree, build_wavelet, wt_firstfit, wt_prv
from .jumping import JumpIndex, JumpTrace, decide_jump, jump_search
from .genstat import (
    ExperimentConfig,
    ExperimentResult,
    TrendReport,
    gen_fixed_length,
    gen_quasi_balanced,
    gen_text,
    run_experiment,
    trend_check,
)

__version__ = "0.1.0"

__all__ = [
    "INFEASIBLE", "Alphabet", "EncodedText", "Occurrence", "ParikhVector",
    "concat_fasta", "infer_alphabet", "load_fasta", "load_text", "parikh",
    "pv_add", "pv_leq", "pv_sub", "window_search", "window_search_starts",
    "RankSelectBitVector",
    "IntervalIndex", "build_eager", "decide", "fill_lazy",
    "InvertedPrefixTable", "ProbeCounter", "build_table", "firstfit_table",
    "prv_bounded",
    "WaveletTree", "build_wavelet", "wt_firstfit", "wt_prv",
    "JumpIndex", "JumpTrace", "decide_jump", "jump_search",
    "ExperimentConfig", "ExperimentResult", "TrendReport", "gen_fixed_length",
    "gen_quasi_balanced", "gen_text", "run_experiment", "trend_check",
    "__version__",
]
