"""String graph construction for read collections, driven by an FM-index.

The library ingests reads (``seqio``), indexes them (``fmindex``),
enumerates all suffix-prefix overlaps of a minimum length (``overlap``),
removes transitive arcs (``reduce``), and serializes the resulting graph
(``graph_io``). ``oracle`` holds independent brute-force references used
for verification, and ``cli`` the command-line front end.
"""

__version__ = "0.1.0"

from .fmindex import FmIndex, Interval, QRepr, build_index, substr, suff
from .graph_io import display_names, parse_tsv, stats, write_gfa1, write_tsv
from .instrument import PipelineCounters
from .oracle import naive_bwt, naive_overlap_graph, naive_reduce
from .overlap import BasicArcSet, PotentialOverlap, compute_basic_arcsets
from .reduce import Arc, ArcSet, Cluster, StringGraph, WindowDest, process_cluster, reduce_graph
from .seqio import (
    AlphabetError,
    ContainedReadError,
    EmptyInputError,
    NormalizationReport,
    ParseError,
    Read,
    ReadSet,
    load_reads,
    normalize,
    parse_reads,
    revcomp,
)

__all__ = [
    "__version__",
    "Arc",
    "ArcSet",
    "AlphabetError",
    "BasicArcSet",
    "Cluster",
    "ContainedReadError",
    "EmptyInputError",
    "FmIndex",
    "Interval",
    "NormalizationReport",
    "ParseError",
    "PipelineCounters",
    "PotentialOverlap",
    "QRepr",
    "Read",
    "ReadSet",
    "StringGraph",
    "WindowDest",
    "build_index",
    "compute_basic_arcsets",
    "display_names",
    "load_reads",
    "naive_bwt",
    "naive_overlap_graph",
    "naive_reduce",
    "normalize",
    "parse_reads",
    "parse_tsv",
    "process_cluster",
    "reduce_graph",
    "revcomp",
    "stats",
    "substr",
    "suff",
    "write_gfa1",
    "write_tsv",
]
