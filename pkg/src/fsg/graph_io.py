"""String-graph serialization (TSV, GFA1) and summary statistics."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Sequence, TextIO, Union

from .reduce import Arc, StringGraph
from .seqio import ReadSet

_FORMAT_TAG = "fsg-graph"
_FORMAT_VERSION = 1


def display_names(rs: Optional[ReadSet], n_reads: int) -> list[str]:
    """Output names: first header token, "/rc" suffix for reverse-complement
    duplicates, ".k" appended on collisions, generated names as fallback."""
    names: list[str] = []
    if rs is not None:
        for r in rs.reads:
            base = r.name.split()[0] if r.name.split() else f"r{r.id}"
            if r.rc_of is not None:
                base += "/rc"
            names.append(base)
    else:
        names = [f"r{i}" for i in range(n_reads)]
    seen: dict[str, int] = {}
    out = []
    for name in names:
        k = seen.get(name, 0)
        seen[name] = k + 1
        out.append(name if k == 0 else f"{name}.{k}")
    return out


def _open_out(path_or_io: Union[str, Path, TextIO]):
    if hasattr(path_or_io, "write"):
        return path_or_io, False
    return open(path_or_io, "w", encoding="utf-8", newline="\n"), True


def write_tsv(
    g: StringGraph,
    path: Union[str, Path, TextIO],
    rs: Optional[ReadSet] = None,
) -> None:
    """Write the graph as headered TSV, one arc per row.

    The header carries the read-name table, so the file is lossless and
    :func:`parse_tsv` inverts it exactly.
    """
    names = display_names(rs, g.n_reads)
    fh, owned = _open_out(path)
    try:
        fh.write(f"# {_FORMAT_TAG}\t{_FORMAT_VERSION}\n")
        fh.write(f"# input\t{g.provenance}\n")
        fh.write(f"# n_reads\t{g.n_reads}\n")
        fh.write(f"# tau\t{g.tau}\n")
        fh.write(f"# arcs\t{len(g.arcs)}\n")
        for i, name in enumerate(names):
            fh.write(f"# read\t{i}\t{name}\n")
        for a in g.arcs:
            fh.write(f"{names[a.source]}\t{names[a.target]}\t{a.overlap_len}\t{a.label}\n")
    finally:
        if owned:
            fh.close()


def parse_tsv(path: Union[str, Path]) -> tuple[StringGraph, list[str]]:
    """Read a TSV graph back; returns the graph and the read-name table."""
    n_reads = 0
    tau = 0
    provenance = ""
    names: list[str] = []
    arcs: list[Arc] = []
    name_to_id: dict[str, int] = {}
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line:
            continue
        if line.startswith("#"):
            fields = line[1:].strip().split("\t")
            key = fields[0].strip()
            if key == "n_reads":
                n_reads = int(fields[1])
            elif key == "tau":
                tau = int(fields[1])
            elif key == "input":
                provenance = fields[1] if len(fields) > 1 else ""
            elif key == "read":
                rid, name = int(fields[1]), fields[2]
                while len(names) <= rid:
                    names.append("")
                names[rid] = name
                name_to_id[name] = rid
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            raise ValueError(f"{path}:{line_no}: expected 4 tab-separated fields")
        src, tgt, ov, label = fields
        arcs.append(Arc(name_to_id[src], name_to_id[tgt], int(ov), label))
    return StringGraph(n_reads=n_reads, arcs=arcs, tau=tau, provenance=provenance), names


def write_gfa1(
    g: StringGraph,
    rs: ReadSet,
    path: Union[str, Path, TextIO],
) -> None:
    """Write the graph as GFA1: one S line per read, one L line per arc.

    Orientations are always '+': reverse complements, when requested, are
    separate reads rather than bidirected edges.
    """
    names = display_names(rs, g.n_reads)
    fh, owned = _open_out(path)
    try:
        fh.write("H\tVN:Z:1.0\n")
        for r in rs.reads:
            fh.write(f"S\t{names[r.id]}\t{r.seq}\n")
        for a in g.arcs:
            fh.write(f"L\t{names[a.source]}\t+\t{names[a.target]}\t+\t{a.overlap_len}M\n")
    finally:
        if owned:
            fh.close()


def stats(g: StringGraph) -> dict:
    """Summary record: arc count, touched vertices, degree and overlap
    histograms. JSON-ready (string keys)."""
    in_deg: dict[int, int] = {}
    out_deg: dict[int, int] = {}
    ov_hist: dict[str, int] = {}
    for a in g.arcs:
        out_deg[a.source] = out_deg.get(a.source, 0) + 1
        in_deg[a.target] = in_deg.get(a.target, 0) + 1
        key = str(a.overlap_len)
        ov_hist[key] = ov_hist.get(key, 0) + 1

    def hist(degrees: dict[int, int]) -> dict[str, int]:
        h: dict[str, int] = {}
        for d in degrees.values():
            h[str(d)] = h.get(str(d), 0) + 1
        return h

    return {
        "arcs": len(g.arcs),
        "n_reads": g.n_reads,
        "tau": g.tau,
        "vertices_with_degree": len(set(in_deg) | set(out_deg)),
        "in_degree_hist": hist(in_deg),
        "out_degree_hist": hist(out_deg),
        "overlap_hist": ov_hist,
    }


def stats_json(g: StringGraph) -> str:
    return json.dumps(stats(g), sort_keys=True)
