"""Overlap enumeration by iterative potential-overlap extension.

A potential overlap is a string that is a proper suffix of some read and
also occurs somewhere else not as a suffix; every overlap's suffixes are
themselves potential overlaps, so prepending one character at a time to
the previous generation visits every overlap while touching each distinct
string exactly once. A potential overlap that is also a read prefix is an
overlap; those of length >= tau are emitted as basic arc-sets, the
compact form of the overlap graph.

The length filter applies to emission only. Shorter overlaps must still
be explored because longer potential overlaps are built on top of them.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .fmindex import FmIndex, QRepr
from .instrument import PipelineCounters
from .seqio import ALPHABET

_SIGMA = tuple(ALPHABET)


@dataclass(frozen=True)
class PotentialOverlap:
    """A proper read suffix that also occurs elsewhere not as a suffix."""

    repr: QRepr

    @property
    def length(self) -> int:
        return self.repr.length


@dataclass
class BasicArcSet:
    """All overlap-graph arcs sharing one overlap string.

    ``dest_lo..dest_hi`` is the (1-based, inclusive) range of sentinel
    ranks holding the reads that start with the overlap; its width equals
    the number of such reads. ``overlap_str`` is only carried around in
    validate mode.
    """

    overlap_repr: QRepr
    overlap_len: int
    dest_lo: int
    dest_hi: int
    overlap_str: Optional[str] = None

    @property
    def n_dest(self) -> int:
        return self.dest_hi - self.dest_lo + 1

    def dest_ids(self, idx: FmIndex) -> list[int]:
        return [int(x) for x in idx.dollar_map[self.dest_lo - 1 : self.dest_hi]]


class _Generation:
    """Structure-of-arrays view of one Last/New list of triples."""

    __slots__ = ("length", "b", "e", "ed", "strings")

    def __init__(self, length, b, e, ed, strings=None):
        self.length = length
        self.b = b
        self.e = e
        self.ed = ed
        self.strings = strings

    def __len__(self) -> int:
        return self.b.size


def _seed_generation(idx: FmIndex, counters: Optional[PipelineCounters]) -> _Generation:
    b, e, ed, strings = [], [], [], []
    for c in _SIGMA:
        q = idx.init_repr(c)
        n_suff = q.e_dollar - q.b + 1
        n_substr = q.e - q.b + 1
        if n_suff > 0 and n_substr > n_suff:
            b.append(q.b)
            e.append(q.e)
            ed.append(q.e_dollar)
            strings.append(c)
    gen = _Generation(
        1,
        np.array(b, dtype=np.int64),
        np.array(e, dtype=np.int64),
        np.array(ed, dtype=np.int64),
        strings,
    )
    if counters is not None:
        counters.seeds = len(gen)
        counters.explored += len(gen)
    return gen


def _extend_rows(idx, code, b, e, ed):
    cc = int(idx._cum[code])
    nb = cc + idx._occ_batch(code, b) + 1
    ne = cc + idx._occ_batch(code, e + 1)
    ned = cc + idx._occ_batch(code, ed + 1)
    return nb, ne, ned


def _next_generation(
    idx: FmIndex,
    gen: _Generation,
    counters: Optional[PipelineCounters],
    threads: int,
) -> _Generation:
    parts_b, parts_e, parts_ed = [], [], []
    strings = [] if gen.strings is not None else None

    def chunk_children(lo: int, hi: int):
        out = []
        for ci in range(len(_SIGMA)):
            nb, ne, ned = _extend_rows(idx, ci + 1, gen.b[lo:hi], gen.e[lo:hi], gen.ed[lo:hi])
            keep = (ned >= nb) & (ne > ned)  # suff > 0 and substr > suff
            out.append((ci, nb[keep], ne[keep], ned[keep], np.flatnonzero(keep) + lo))
        return out

    if threads > 1 and len(gen) >= 2 * threads:
        bounds = np.linspace(0, len(gen), threads + 1, dtype=int)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunked = list(pool.map(lambda ab: chunk_children(*ab), zip(bounds[:-1], bounds[1:])))
    else:
        chunked = [chunk_children(0, len(gen))]

    # Children grouped per character, chunks concatenated in order, keeps
    # every generation in lexicographic order independent of thread count.
    for ci, c in enumerate(_SIGMA):
        for part in chunked:
            _, nb, ne, ned, src_rows = part[ci]
            parts_b.append(nb)
            parts_e.append(ne)
            parts_ed.append(ned)
            if strings is not None:
                strings.extend(c + gen.strings[r] for r in src_rows)

    if counters is not None:
        counters.extend_calls += len(gen) * len(_SIGMA)
        counters.backward_exts += 2 * len(gen) * len(_SIGMA)

    nxt = _Generation(
        gen.length + 1,
        np.concatenate(parts_b),
        np.concatenate(parts_e),
        np.concatenate(parts_ed),
        strings,
    )
    if counters is not None:
        counters.explored += len(nxt)
        if counters.validate and len(nxt):
            # Same-length strings coincide iff their ranges share a lower
            # bound, so begin-uniqueness certifies each string is reached
            # by exactly one extension.
            assert np.unique(nxt.b).size == len(nxt), "a string was explored twice"
    return nxt


def _generations(
    idx: FmIndex,
    counters: Optional[PipelineCounters] = None,
    threads: int = 1,
) -> Iterator[_Generation]:
    keep_strings = counters is not None and counters.validate
    gen = _seed_generation(idx, counters)
    if not keep_strings:
        gen.strings = None
    while len(gen):
        if counters is not None and counters.validate:
            counters.generations.append(list(gen.strings))
        yield gen
        gen = _next_generation(idx, gen, counters, threads)


def explore_potential_overlaps(
    idx: FmIndex, counters: Optional[PipelineCounters] = None
) -> Iterator[PotentialOverlap]:
    """Every potential overlap, shortest first, lexicographic within a length."""
    for gen in _generations(idx, counters):
        for i in range(len(gen)):
            yield PotentialOverlap(
                QRepr(int(gen.b[i]), int(gen.e[i]), int(gen.ed[i]), gen.length)
            )


def compute_basic_arcsets(
    idx: FmIndex,
    tau: int,
    counters: Optional[PipelineCounters] = None,
    threads: int = 1,
) -> list[BasicArcSet]:
    """Enumerate all overlaps of length >= tau as basic arc-sets.

    The union over the result of {reads ending with the overlap} x
    {destination reads} is exactly the arc set of the overlap graph
    restricted to overlaps of length >= tau. Every overlap appears once.
    """
    if tau < 1:
        raise ValueError(f"tau must be >= 1, got {tau}")
    basics: list[BasicArcSet] = []
    for gen in _generations(idx, counters, threads):
        # One backward $-extension per row decides prefix-ness and, for
        # emitted rows, already provides the destination rank range.
        pd_b = idx._occ_batch(0, gen.b)
        pd_e = idx._occ_batch(0, gen.e + 1)
        if counters is not None:
            counters.backward_exts += len(gen)
        emit = np.flatnonzero((pd_e > pd_b) & (gen.length >= tau))
        for i in emit:
            basics.append(
                BasicArcSet(
                    overlap_repr=QRepr(
                        int(gen.b[i]), int(gen.e[i]), int(gen.ed[i]), gen.length
                    ),
                    overlap_len=gen.length,
                    dest_lo=int(pd_b[i]) + 1,
                    dest_hi=int(pd_e[i]),
                    overlap_str=gen.strings[i] if gen.strings is not None else None,
                )
            )
    if counters is not None:
        counters.basic_arcsets = len(basics)
    return basics
