"""Brute-force reference implementations for verification.

Everything here works by direct string comparison on the read sequences
and deliberately shares no code with the index or the graph construction,
so agreement between the two paths is evidence rather than tautology.
Arcs are plain ``(source_id, target_id, overlap_len, label)`` tuples.
"""

from __future__ import annotations

from typing import Sequence, Union

from .seqio import ReadSet

ArcTuple = tuple[int, int, int, str]


def _seqs(rs: Union[ReadSet, Sequence[str]]) -> list[str]:
    if isinstance(rs, ReadSet):
        return rs.seqs
    return [s.lower() for s in rs]


def naive_overlap_graph(
    rs: Union[ReadSet, Sequence[str]], tau: int, allow_self_loops: bool = False
) -> list[ArcTuple]:
    """All suffix-prefix overlap arcs of length >= tau, by direct comparison.

    Every overlap length is kept, so a read pair may contribute several
    parallel arcs. The label of an arc is the part of the source that
    precedes the overlap. O(n^2 m^2).
    """
    seqs = _seqs(rs)
    arcs: list[ArcTuple] = []
    for i, a in enumerate(seqs):
        for j, b in enumerate(seqs):
            if i == j and not allow_self_loops:
                continue
            top = min(len(a), len(b))
            if i == j:
                top = len(a) - 1  # a full self-overlap is not an arc
            for ell in range(tau, top + 1):
                if a[len(a) - ell :] == b[:ell]:
                    arcs.append((i, j, ell, a[: len(a) - ell]))
    arcs.sort(key=lambda t: (t[0], t[1], -t[2]))
    return arcs


def naive_reduce(arcs: Sequence[ArcTuple]) -> list[ArcTuple]:
    """Drop every arc whose target receives another arc with a label that
    is a proper suffix of its own label. Quadratic per target."""
    by_target: dict[int, list[ArcTuple]] = {}
    for arc in arcs:
        by_target.setdefault(arc[1], []).append(arc)
    kept: list[ArcTuple] = []
    for arc in arcs:
        src, tgt, ell, label = arc
        transitive = any(
            len(other[3]) < len(label) and label.endswith(other[3])
            for other in by_target[tgt]
        )
        if not transitive:
            kept.append(arc)
    return kept


def naive_bwt(rs: Union[ReadSet, Sequence[str]]) -> tuple[str, list[int]]:
    """BWT by enumerating and sorting every suffix of every read.

    Each read is terminated implicitly; sorting on (suffix text, read id)
    reproduces the id tie-breaking of the index without sharing any code
    with it. Returns the BWT string and the map from sentinel occurrence
    rank to read id.
    """
    seqs = _seqs(rs)
    entries = []
    for rid, seq in enumerate(seqs):
        for pos in range(len(seq) + 1):
            entries.append((seq[pos:], rid, pos))
    entries.sort(key=lambda t: (t[0], t[1]))
    bwt = "".join("$" if pos == 0 else seqs[rid][pos - 1] for _, rid, pos in entries)
    dollar_map = [rid for _, rid, pos in entries if pos == 0]
    return bwt, dollar_map


def sorted_suffixes(rs: Union[ReadSet, Sequence[str]]) -> list[tuple[str, int]]:
    """Every (suffix, read id) pair in global lexicographic order."""
    seqs = _seqs(rs)
    entries = [
        (seq[pos:], rid) for rid, seq in enumerate(seqs) for pos in range(len(seq) + 1)
    ]
    entries.sort()
    return entries


def naive_interval(suffixes: Sequence[tuple[str, int]], omega: str) -> tuple[int, int]:
    """1-based maximal range of sorted suffixes prefixed by omega (binary search)."""
    import bisect

    lo = bisect.bisect_left(suffixes, (omega,))
    hi = bisect.bisect_left(suffixes, (omega + "\x7f",))
    return lo + 1, hi


def count_occurrences(rs: Union[ReadSet, Sequence[str]], s: str) -> int:
    """Occurrences of s across all reads, counting overlapping matches."""
    total = 0
    for seq in _seqs(rs):
        start = seq.find(s)
        while start != -1:
            total += 1
            start = seq.find(s, start + 1)
    return total
