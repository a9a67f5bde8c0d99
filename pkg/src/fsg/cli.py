"""Command-line front end.

Subcommands: index, build, oracle, gen, stats, bench. Exit codes: 0 on
success, 2 on input errors (3 is reserved). Warnings go to stderr, data
to stdout unless -o is given.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import resource
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .fmindex import FmIndex, build_index, _MAGIC
from .graph_io import parse_tsv, stats_json, write_gfa1, write_tsv
from .instrument import PipelineCounters
from .oracle import naive_overlap_graph, naive_reduce
from .overlap import compute_basic_arcsets
from .reduce import Arc, StringGraph, reduce_graph
from .seqio import (
    AlphabetError,
    ContainedReadError,
    EmptyInputError,
    ParseError,
    Read,
    ReadSet,
    NormalizationReport,
    load_reads,
)

_INPUT_ERRORS = (
    ParseError,
    AlphabetError,
    EmptyInputError,
    ContainedReadError,
    FileNotFoundError,
    IsADirectoryError,
    PermissionError,
    ValueError,
)


def _is_index_file(path: str) -> bool:
    try:
        with open(path, "rb") as fh:
            return fh.read(4) == _MAGIC
    except OSError:
        return False


def _load_any(path: str, add_rc: bool, contained: str) -> tuple[FmIndex, ReadSet | None]:
    """Accept either a serialized index or a FASTA/FASTQ file."""
    if _is_index_file(path):
        return FmIndex.load(path), None
    rs = load_reads(path, add_rc=add_rc, contained=contained)
    return build_index(rs), rs


def _readset_from_index(idx: FmIndex) -> ReadSet:
    reads = [Read(id=i, name=f"r{i}", seq=idx.extract_read(i)) for i in range(idx.n)]
    return ReadSet(reads=reads, max_len=idx.max_len, report=NormalizationReport(n_final=idx.n))


def generate_reads(
    genome_len: int, read_len: int, coverage: float, seed: int
) -> tuple[str, list[tuple[str, str]]]:
    """Sample ceil(G*c/m) error-free reads from a uniform random genome.

    Deterministic under the seed (numpy PCG64); the same seed with a
    higher coverage extends the lower-coverage sample.
    """
    if not genome_len >= read_len >= 1:
        raise ValueError("need genome-len >= read-len >= 1")
    if coverage <= 0:
        raise ValueError("coverage must be positive")
    rng = np.random.Generator(np.random.PCG64(seed))
    genome = "".join("acgt"[k] for k in rng.integers(0, 4, size=genome_len))
    n_reads = math.ceil(genome_len * coverage / read_len)
    starts = rng.integers(0, genome_len - read_len + 1, size=n_reads)
    reads = [
        (f"sim_{i} start={int(s)}", genome[int(s) : int(s) + read_len])
        for i, s in enumerate(starts)
    ]
    return genome, reads


def _emit_graph(g: StringGraph, rs, fmt: str, out: str | None) -> None:
    if fmt == "gfa":
        if out:
            write_gfa1(g, rs, out)
        else:
            write_gfa1(g, rs, sys.stdout)
    else:
        if out:
            write_tsv(g, out, rs)
        else:
            write_tsv(g, sys.stdout, rs)


def cmd_index(args) -> int:
    rs = load_reads(args.input, add_rc=args.rc, contained=args.keep_contained)
    idx = build_index(rs)
    out = args.output or str(Path(args.input).with_suffix(".fsgi"))
    idx.save(out)
    return 0


def _build_graph(args) -> tuple[StringGraph, ReadSet | None]:
    idx, rs = _load_any(args.input, args.rc, "drop")
    flags = []
    if args.rc:
        flags.append("--rc")
    if args.allow_self_loops:
        flags.append("--allow-self-loops")
    provenance = " ".join([args.input, f"--min-overlap {args.min_overlap}"] + flags)
    if args.min_overlap >= idx.max_len:
        print(
            f"warning: --min-overlap {args.min_overlap} is not below the longest "
            f"read ({idx.max_len}); the graph is empty",
            file=sys.stderr,
        )
        return StringGraph(idx.n, [], args.min_overlap, provenance), rs
    basics = compute_basic_arcsets(idx, args.min_overlap, threads=args.threads)
    g = reduce_graph(
        idx,
        basics,
        args.min_overlap,
        allow_self_loops=args.allow_self_loops,
        dest_mode=args.dest_mode,
        threads=args.threads,
        provenance=provenance,
    )
    return g, rs


def cmd_build(args) -> int:
    if args.min_overlap < 1:
        raise ValueError("--min-overlap must be >= 1")
    g, rs = _build_graph(args)
    if args.format == "gfa" and rs is None:
        # GFA needs sequences; recover them from the index itself.
        idx = FmIndex.load(args.input)
        rs = _readset_from_index(idx)
    _emit_graph(g, rs, args.format, args.output)
    return 0


def cmd_oracle(args) -> int:
    if args.min_overlap < 1:
        raise ValueError("--min-overlap must be >= 1")
    rs = load_reads(args.input, add_rc=args.rc, contained="drop")
    arcs = naive_overlap_graph(rs, args.min_overlap, allow_self_loops=args.allow_self_loops)
    if not args.overlap_graph:
        arcs = naive_reduce(arcs)
    flags = ["--rc"] if args.rc else []
    if args.allow_self_loops:
        flags.append("--allow-self-loops")
    provenance = " ".join([args.input, f"--min-overlap {args.min_overlap}"] + flags)
    g = StringGraph(
        n_reads=len(rs),
        arcs=[Arc(*t) for t in sorted(arcs, key=lambda t: (t[0], t[1], -t[2]))],
        tau=args.min_overlap,
        provenance=provenance,
    )
    _emit_graph(g, rs, "tsv", args.output)
    return 0


def cmd_gen(args) -> int:
    _, reads = generate_reads(args.genome_len, args.read_len, args.coverage, args.seed)
    lines = []
    for name, seq in reads:
        lines.append(f">{name}\n{seq}\n")
    text = "".join(lines)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_stats(args) -> int:
    g, _ = parse_tsv(args.input)
    text = stats_json(g) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _peak_rss_mib() -> float:
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024.0


_BENCH_FIELDS = [
    "tau",
    "n_reads",
    "index_s",
    "wall_s",
    "peak_mib",
    "extensions",
    "clusters",
    "arcsets",
    "stack_peak",
    "arcs",
]


def cmd_bench(args) -> int:
    taus = [int(t) for t in args.tau_list.split(",") if t.strip()]
    rs = load_reads(args.input, add_rc=args.rc, contained="drop")
    t0 = time.perf_counter()
    idx = build_index(rs)
    index_s = time.perf_counter() - t0

    rows = []
    for tau in taus:
        counters = PipelineCounters()
        t0 = time.perf_counter()
        basics = compute_basic_arcsets(idx, tau, counters=counters, threads=args.threads)
        g = reduce_graph(
            idx,
            basics,
            tau,
            allow_self_loops=args.allow_self_loops,
            threads=args.threads,
            counters=counters,
        )
        wall = time.perf_counter() - t0
        rows.append(
            {
                "tau": tau,
                "n_reads": idx.n,
                "index_s": f"{index_s:.3f}",
                "wall_s": f"{wall:.3f}",
                "peak_mib": f"{_peak_rss_mib():.1f}",
                "extensions": counters.backward_exts if args.count_extensions else "",
                "clusters": counters.clusters,
                "arcsets": counters.arcsets,
                "stack_peak": counters.stack_peak,
                "arcs": len(g.arcs),
            }
        )

    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=_BENCH_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    if args.output:
        Path(args.output).write_text(buf.getvalue())
        if not args.no_plot:
            _plot_bench(rows, Path(args.output).with_suffix(".png"), args.count_extensions)
    else:
        sys.stdout.write(buf.getvalue())
    return 0


def _plot_bench(rows, png_path: Path, with_extensions: bool) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    taus = [r["tau"] for r in rows]
    n_panels = 2 if with_extensions else 1
    fig, axes = plt.subplots(1, n_panels, figsize=(5 * n_panels, 4), squeeze=False)
    ax = axes[0][0]
    ax.plot(taus, [float(r["wall_s"]) for r in rows], "o-", label="graph")
    ax.plot(taus, [float(r["index_s"]) for r in rows], "s--", label="index")
    ax.set_xlabel("minimum overlap")
    ax.set_ylabel("wall time [s]")
    ax.legend()
    if with_extensions:
        ax2 = axes[0][1]
        ax2.plot(taus, [int(r["extensions"]) for r in rows], "o-")
        ax2.set_xlabel("minimum overlap")
        ax2.set_ylabel("backward extensions")
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)


def _add_common_build_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rc", action="store_true", help="add reverse complements")
    p.add_argument(
        "--allow-self-loops", action="store_true", help="keep arcs from a read to itself"
    )
    p.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("FSG_THREADS", "1")),
        help="worker threads (FSG_THREADS is the fallback); output does not depend on it",
    )


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fsg", description="String graphs of read collections, straight from an FM-index."
    )
    ap.add_argument(
        "--version",
        action="version",
        version=f"fsg {__version__} (rng: numpy PCG64)",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="build and serialize the FM-index of a read file")
    p.add_argument("input")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--rc", action="store_true", help="add reverse complements")
    p.add_argument(
        "--keep-contained",
        choices=["drop", "error"],
        default="drop",
        help="policy for duplicate/contained reads",
    )
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("build", help="construct the string graph")
    p.add_argument("input", help="reads (FASTA/FASTQ) or a serialized index")
    p.add_argument("--min-overlap", type=int, required=True, metavar="TAU")
    p.add_argument("--format", choices=["tsv", "gfa"], default="tsv")
    p.add_argument("--dest-mode", choices=["set", "window"], default="set")
    p.add_argument("-o", "--output", default=None)
    _add_common_build_args(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("oracle", help="brute-force reference pipeline (small inputs)")
    p.add_argument("input")
    p.add_argument("--min-overlap", type=int, required=True, metavar="TAU")
    p.add_argument("--rc", action="store_true")
    p.add_argument("--allow-self-loops", action="store_true")
    p.add_argument(
        "--overlap-graph",
        action="store_true",
        help="emit the unreduced overlap graph",
    )
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="sample error-free reads from a random genome")
    p.add_argument("--genome-len", type=int, required=True)
    p.add_argument("--read-len", type=int, required=True)
    p.add_argument("--coverage", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("stats", help="summary statistics of a TSV graph")
    p.add_argument("input")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bench", help="instrumented runs over a list of overlap thresholds")
    p.add_argument("input")
    p.add_argument("--tau-list", default="55,65,75,85")
    p.add_argument("--count-extensions", action="store_true")
    p.add_argument("--no-plot", action="store_true", help="skip the figure next to -o")
    p.add_argument("-o", "--output", default=None)
    _add_common_build_args(p)
    p.set_defaults(func=cmd_bench)

    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"fsg {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
