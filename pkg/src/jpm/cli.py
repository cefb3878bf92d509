"""Command-line interface: build indexes, answer queries, run benchmarks.

Exit codes are stable for scripting: 0 success / query found, 1 decision
query not found, 2 usage or input-validation error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .core import Alphabet, EncodedText, infer_alphabet, load_fasta, load_text
from .genstat import (BACKENDS, QUERY_MODELS, ExperimentConfig, run_experiment)
from .interval import IntervalIndex
from .jumping import jump_search
from .prefix_index import InvertedPrefixTable
from .serialize import dump_index, load_index
from .wavelet import WaveletTree


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, AssertionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jpm",
                                description="Jumbled (Parikh vector) pattern matching")
    sub = p.add_subparsers(dest="command", required=True)

    ix = sub.add_parser("index", help="build and save a text index")
    ix.add_argument("--input", required=True, help="input text file")
    ix.add_argument("--format", choices=("plain", "fasta"), default="plain")
    ix.add_argument("--backend", choices=("table", "wavelet", "interval"),
                    default="table")
    ix.add_argument("--output", required=True, help="index file to write")
    ix.add_argument("--concat", action="store_true",
                    help="concatenate FASTA records into one text")
    ix.add_argument("--alphabet", default=None,
                    help="explicit alphabet (characters in order); inferred by default")
    ix.set_defaults(func=cmd_index)

    qy = sub.add_parser("query", help="answer a Parikh vector query")
    qy.add_argument("--index", default=None, help="saved index file")
    qy.add_argument("--input", default=None, help="raw text file (indexed in memory)")
    qy.add_argument("--format", choices=("plain", "fasta"), default="plain")
    qy.add_argument("--backend", choices=("table", "wavelet", "interval"),
                    default="table", help="back-end for --input mode")
    qy.add_argument("--concat", action="store_true")
    qy.add_argument("--alphabet", default=None)
    qy.add_argument("--query", required=True,
                    help="counts: positional '3,1,2' or pairs 'a=3 b=1 c=2'")
    qy.add_argument("--mode", choices=("decision", "occurrences"),
                    default="occurrences")
    qy.add_argument("--trace", action="store_true",
                    help="print the pointer trace (occurrence mode)")
    qy.set_defaults(func=cmd_query)

    bn = sub.add_parser("bench", help="run jump-count / runtime experiments")
    bn.add_argument("--n", type=int, default=100_000, help="text length")
    bn.add_argument("--sigma", type=int, default=4, help="alphabet size")
    bn.add_argument("--backend", choices=("table", "wavelet", "interval"),
                    default="table")
    bn.add_argument("--query-model", choices=QUERY_MODELS, default="quasi-balanced")
    bn.add_argument("--epsilon", type=int, default=10)
    bn.add_argument("--m", default=None,
                    help="explicit query lengths, comma separated")
    bn.add_argument("--m-lo", type=int, default=None)
    bn.add_argument("--m-hi", type=int, default=None)
    bn.add_argument("--m-points", type=int, default=8)
    bn.add_argument("--reps", type=int, default=10, help="texts per length point")
    bn.add_argument("--queries", type=int, default=20, help="queries per text")
    bn.add_argument("--seed", type=int, default=None,
                    help="PRNG seed (falls back to PM_SEED, then 0)")
    bn.add_argument("--baseline", action="store_true",
                    help="also run and time the window matcher")
    bn.add_argument("--no-timing", action="store_true",
                    help="omit wall-clock columns (byte-stable output)")
    bn.add_argument("--input", default=None,
                    help="fixed text file (queries random, text fixed)")
    bn.add_argument("--format", choices=("plain", "fasta"), default="plain")
    bn.add_argument("--concat", action="store_true",
                    help="concatenate FASTA records into one text")
    bn.add_argument("--output", default=None, help="CSV path (stdout by default)")
    bn.set_defaults(func=cmd_bench)
    return p


# ---------------------------------------------------------------------------


def _load_records(args) -> list[tuple[str, str]]:
    if args.format == "fasta":
        records = load_fasta(args.input)
        if not records or all(not seq for _, seq in records):
            raise ValueError("no sequence data in input")
        if args.concat:
            return [("all", "".join(seq for _, seq in records))]
        return records
    raw = load_text(args.input)
    if not raw:
        raise ValueError("input file is empty")
    return [("text", raw)]


def _encode_records(records, alphabet_arg):
    if alphabet_arg is not None:
        alphabet = Alphabet(tuple(alphabet_arg))
    else:
        alphabet = infer_alphabet("".join(seq for _, seq in records))
    return [(name, alphabet.encode(seq)) for name, seq in records], alphabet


def cmd_index(args) -> int:
    records, alphabet = _encode_records(_load_records(args), args.alphabet)
    payloads = []
    for name, text in records:
        if args.backend == "table":
            payloads.append((name, InvertedPrefixTable.build(text).to_bytes()))
        elif args.backend == "wavelet":
            payloads.append((name, WaveletTree.build(text).to_bytes()))
        else:
            idx = IntervalIndex.build_eager(text)
            payloads.append((name, idx.to_csv_bytes()))
    dump_index(args.output, args.backend, payloads)
    print(f"wrote {args.backend} index: {len(payloads)} record(s), "
          f"alphabet '{''.join(alphabet.symbols)}' -> {args.output}")
    return 0


def parse_query(spec: str, alphabet: Alphabet) -> np.ndarray:
    """Parse '3,1,2' (positional) or 'a=3 b=1 c=2' (symbol=count pairs)."""
    spec = spec.strip()
    counts = np.zeros(alphabet.size, dtype=np.int64)
    if "=" in spec:
        for token in spec.replace(",", " ").split():
            sym, _, val = token.partition("=")
            if not val:
                raise ValueError(f"malformed query token {token!r}")
            counts[alphabet.index_of(sym)] = int(val)
    else:
        values = [int(v) for v in spec.replace(",", " ").split()]
        if len(values) != alphabet.size:
            raise ValueError(
                f"query has {len(values)} counts but the alphabet has "
                f"{alphabet.size} symbols")
        counts[:] = values
    if counts.min() < 0:
        raise ValueError("query counts must be non-negative")
    if counts.sum() == 0:
        raise ValueError("empty query (all counts zero)")
    return counts


def _open_indexes(args):
    """Yields (record name, backend, index object, alphabet)."""
    if (args.index is None) == (args.input is None):
        raise ValueError("give exactly one of --index or --input")
    out = []
    if args.index is not None:
        backend, records = load_index(args.index)
        for name, payload in records:
            if backend == "table":
                idx = InvertedPrefixTable.from_bytes(payload)
            elif backend == "wavelet":
                idx = WaveletTree.from_bytes(payload)
            else:
                idx = IntervalIndex.from_csv_bytes(payload)
            out.append((name, backend, idx, idx.alphabet))
        return out
    records, alphabet = _encode_records(_load_records(args), args.alphabet)
    for name, text in records:
        if args.backend == "table":
            idx = InvertedPrefixTable.build(text)
        elif args.backend == "wavelet":
            idx = WaveletTree.build(text)
        else:
            idx = IntervalIndex.lazy(text)  # filled on demand by the query
        out.append((name, args.backend, idx, alphabet))
    return out


def cmd_query(args) -> int:
    indexes = _open_indexes(args)
    alphabet = indexes[0][3]
    q = parse_query(args.query, alphabet)
    many = len(indexes) > 1
    found_any = False
    for name, backend, idx, _ in indexes:
        label = f"{name}\t" if many else ""
        if backend == "interval":
            if args.mode != "decision":
                raise ValueError(
                    "the interval index answers decision queries only "
                    "(it stores no occurrence lists)")
            ok = idx.decide(q)
            found_any |= ok
            print(f"{label}{'yes' if ok else 'no'}")
            continue
        if args.mode == "decision":
            starts, _ = jump_search(idx, q, stop_at_first=True)
            found_any |= bool(starts)
            print(f"{label}{'yes' if starts else 'no'}")
            continue
        starts, tr = jump_search(idx, q, trace=args.trace)
        found_any |= bool(starts)
        for s in starts:
            print(f"{label}{s}")
        probes = " ".join(f"{k}={v}" for k, v in tr.probes.items())
        print(f"# {name}: count={len(starts)} J={tr.iterations} {probes}")
        if args.trace and tr.rows:
            print("# k\tL\tR\tfound")
            for i, (l, r, f) in enumerate(tr.rows, 1):
                print(f"# {i}\t{l}\t{r}\t{'yes' if f else '-'}")
    return 0 if found_any else 1


def cmd_bench(args) -> int:
    if args.backend == "interval":
        raise ValueError("the interval back-end does not run the jump engine "
                         "(capability mismatch)")
    if args.backend not in BACKENDS:
        raise ValueError(f"unknown backend {args.backend}")
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("PM_SEED", "0"))
    text = None
    n, sigma = args.n, args.sigma
    if args.input is not None:
        records, alphabet = _encode_records(_load_records(args), None)
        if len(records) > 1:
            raise ValueError("bench uses a single text; pass --format fasta "
                             "with one record or concatenate beforehand")
        text = records[0][1]
        n, sigma = text.n, alphabet.size
    m_values = None
    if args.m is not None:
        m_values = tuple(int(v) for v in args.m.replace(",", " ").split())
    cfg = ExperimentConfig(n=n, sigma=sigma, query_model=args.query_model,
                           m_values=m_values, m_lo=args.m_lo, m_hi=args.m_hi,
                           m_points=args.m_points, epsilon=args.epsilon,
                           texts=args.reps, queries_per_text=args.queries,
                           seed=seed)
    result = run_experiment(cfg, args.backend, text=text, baseline=args.baseline,
                            timing_repeats=1 if args.no_timing else 3)
    csv = result.to_csv(include_timing=not args.no_timing)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(csv)
        print(f"wrote {len(result.rows)} row(s) -> {args.output}")
    else:
        sys.stdout.write(csv)
    return 0


if __name__ == "__main__":
    sys.exit(main())
