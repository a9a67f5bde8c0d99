"""Transitive reduction of the overlap arcs by cluster-ordered processing.

Starting from the basic arc-sets, arc-sets grow their extension one
leading character at a time. Arc-sets sharing an extension form a
cluster; a cluster is processed only after the clusters of every proper
suffix of its extension, which the construction guarantees by itself
because the cluster for c·a is created while processing the cluster for a.

Within a cluster, an arc-set whose string is itself a read is terminal:
its arcs all leave that read, they are irreducible, and they make every
same-cluster arc into the same destinations transitive. Terminal arc-sets
therefore emit their arcs and their destinations are subtracted from the
surviving members before those are extended further. An arc into a read
is transitive exactly when some other arc into the same read has a label
that is a proper suffix of its own label, and this schedule removes
exactly those arcs.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .fmindex import FmIndex, QRepr
from .instrument import PipelineCounters
from .overlap import BasicArcSet
from .seqio import ALPHABET

_SIGMA = tuple(ALPHABET)


@dataclass(frozen=True)
class Arc:
    """One string-graph arc: the source's suffix of length ``overlap_len``
    is a prefix of the target, and ``label`` is the rest of the source."""

    source: int
    target: int
    overlap_len: int
    label: str


@dataclass
class StringGraph:
    n_reads: int
    arcs: list[Arc]
    tau: int
    provenance: str = ""


@dataclass(frozen=True)
class WindowDest:
    """Destination set as a base range of sentinel ranks plus an exclusion
    mask over that range. Immutable: subtraction returns a new object."""

    lo: int
    hi: int
    excl: np.ndarray  # bool, length hi - lo + 1

    def ranks(self) -> np.ndarray:
        return self.lo + np.flatnonzero(~self.excl)

    def __len__(self) -> int:
        return int(np.count_nonzero(~self.excl))

    def subtract(self, dbits: np.ndarray, span_lo: int) -> "WindowDest":
        cut = dbits[self.lo - span_lo : self.hi - span_lo + 1]
        if not cut.any():
            return self
        return WindowDest(self.lo, self.hi, self.excl | cut)


DestinationSet = Union[frozenset, WindowDest]


@dataclass
class ArcSet:
    """Arcs whose source ends with ``body`` (= extension + overlap) and
    whose target lies in ``dest``. The overlap length is fixed when the
    basic arc-set is created; only the extension grows."""

    body: QRepr
    overlap_len: int
    dest: DestinationSet
    body_str: Optional[str] = None  # validate mode only

    @property
    def extension_len(self) -> int:
        return self.body.length - self.overlap_len


@dataclass
class Cluster:
    """Live arc-sets sharing one extension, in lexicographic body order."""

    extension: str
    members: list[ArcSet]


def _dest_ids(idx: FmIndex, dest: DestinationSet) -> list[int]:
    if isinstance(dest, WindowDest):
        return [int(idx.dollar_map[r - 1]) for r in dest.ranks()]
    return sorted(dest)


def _basic_cluster(idx: FmIndex, basics: list[BasicArcSet], dest_mode: str) -> Cluster:
    members = []
    for bas in basics:
        if dest_mode == "window":
            dest: DestinationSet = WindowDest(
                bas.dest_lo, bas.dest_hi, np.zeros(bas.n_dest, dtype=bool)
            )
        else:
            dest = frozenset(bas.dest_ids(idx))
        members.append(
            ArcSet(
                body=bas.overlap_repr,
                overlap_len=bas.overlap_len,
                dest=dest,
                body_str=bas.overlap_str,
            )
        )
    # Lexicographic body order: range start ascending, then wider range
    # first (a prefix covers a superset of occurrences), then shorter.
    members.sort(key=lambda m: (m.body.b, -m.body.e, m.overlap_len))
    return Cluster(extension="", members=members)


def process_cluster(
    idx: FmIndex,
    cluster: Cluster,
    tau: int,
    arcs_out: list[Arc],
    allow_self_loops: bool = False,
    counters: Optional[PipelineCounters] = None,
) -> list[Cluster]:
    """Process one cluster; emit its terminal arcs and return the child
    clusters in alphabet order of the prepended character.

    First pass: every member whose string is a read resolves its unique
    source, emits one arc per destination (labelled with the cluster
    extension) and adds those destinations to the cluster-local removal
    set. Second pass: each surviving member drops the removed destinations
    and, if anything is left, is extended by every character that keeps it
    a read suffix.
    """
    members = cluster.members
    k = len(members)
    b = np.fromiter((m.body.b for m in members), dtype=np.int64, count=k)
    e = np.fromiter((m.body.e for m in members), dtype=np.int64, count=k)
    ed = np.fromiter((m.body.e_dollar for m in members), dtype=np.int64, count=k)

    n_substr = e - b + 1
    n_suff = ed - b + 1
    pd_b = idx._occ_batch(0, b)
    pd_e = idx._occ_batch(0, e + 1)
    n_pref = pd_e - pd_b
    if counters is not None:
        counters.clusters += 1
        counters.backward_exts += k
        if counters.validate:
            _log_cluster(idx, cluster, counters)

    terminal = (n_substr == n_pref) & (n_pref == n_suff) & (n_suff > 0)

    window = isinstance(members[0].dest, WindowDest) if k else False
    if window:
        span_lo = int(min(m.dest.lo for m in members))
        span_hi = int(max(m.dest.hi for m in members))
        dbits = np.zeros(span_hi - span_lo + 1, dtype=bool)
    removed: set[int] = set()

    survivors: list[int] = []
    for i in range(k):
        if not terminal[i]:
            survivors.append(i)
            continue
        m = members[i]
        src = int(idx.dollar_map[int(pd_b[i])])  # listpref of the body, width 1
        src_rank = int(pd_b[i]) + 1
        if window:
            for r in map(int, m.dest.ranks()):
                if r == src_rank and not allow_self_loops:
                    continue
                arcs_out.append(
                    Arc(src, int(idx.dollar_map[r - 1]), m.overlap_len, cluster.extension)
                )
                dbits[r - span_lo] = True
        else:
            for x in sorted(m.dest):
                if x == src and not allow_self_loops:
                    continue
                arcs_out.append(Arc(src, x, m.overlap_len, cluster.extension))
                removed.add(x)

    child_members: list[list[ArcSet]] = [[] for _ in _SIGMA]
    for i in survivors:
        m = members[i]
        if window:
            residual: DestinationSet = m.dest.subtract(dbits, span_lo)
            if len(residual) == 0:
                continue
        else:
            residual = m.dest - removed
            if not residual:
                continue
        for ci, c in enumerate(_SIGMA):
            code = ci + 1
            cc = int(idx._cum[code])
            at_b = idx.occ(c, int(b[i]))
            ned = cc + idx.occ(c, int(ed[i]) + 1)
            nb = cc + at_b + 1
            if ned < nb:  # no read has the extended body as a suffix
                continue
            ne = cc + idx.occ(c, int(e[i]) + 1)
            child_members[ci].append(
                ArcSet(
                    body=QRepr(nb, ne, ned, m.body.length + 1),
                    overlap_len=m.overlap_len,
                    dest=residual,
                    body_str=None if m.body_str is None else c + m.body_str,
                )
            )
    if counters is not None:
        counters.extend_calls += 4 * len(survivors)
        counters.backward_exts += 8 * len(survivors)
        counters.arcsets += sum(len(rows) for rows in child_members)

    return [
        Cluster(extension=c + cluster.extension, members=rows)
        for c, rows in zip(_SIGMA, child_members)
        if rows
    ]


def _log_cluster(idx: FmIndex, cluster: Cluster, counters: PipelineCounters) -> None:
    counters.cluster_log.append(
        (
            cluster.extension,
            [
                (m.body_str, m.overlap_len, tuple(_dest_ids(idx, m.dest)))
                for m in cluster.members
            ],
        )
    )


def _drain(
    idx: FmIndex,
    roots: list[Cluster],
    tau: int,
    allow_self_loops: bool,
    counters: Optional[PipelineCounters],
) -> list[Arc]:
    arcs: list[Arc] = []
    stack = list(roots)
    if counters is not None:
        counters.stack_peak = max(counters.stack_peak, len(stack))
    while stack:
        cluster = stack.pop()
        stack.extend(
            process_cluster(
                idx, cluster, tau, arcs, allow_self_loops=allow_self_loops, counters=counters
            )
        )
        if counters is not None:
            counters.stack_peak = max(counters.stack_peak, len(stack))
    return arcs


def reduce_graph(
    idx: FmIndex,
    basics: list[BasicArcSet],
    tau: int,
    allow_self_loops: bool = False,
    dest_mode: str = "set",
    threads: int = 1,
    counters: Optional[PipelineCounters] = None,
    provenance: str = "",
) -> StringGraph:
    """Build the string graph from the basic arc-sets.

    The single basic cluster goes on a stack and clusters are processed
    depth-first until it empties; depth-first keeps the stack small, and
    any schedule that respects the parent-before-child order would yield
    the same arcs. The result is the overlap graph restricted to overlaps
    of length >= tau minus all transitive arcs, sorted by (source, target,
    overlap length descending). Output never depends on ``threads``.

    ``dest_mode`` selects the destination-set representation: "set" keeps
    explicit id sets, "window" keeps rank ranges with exclusion masks.
    Both emit identical arcs.
    """
    if dest_mode not in ("set", "window"):
        raise ValueError(f"dest_mode must be 'set' or 'window', got {dest_mode!r}")
    if counters is not None:
        counters.arcsets += len(basics)
    arcs: list[Arc] = []
    if basics:
        root = _basic_cluster(idx, basics, dest_mode)
        if threads > 1:
            first_children = _drain_one_level(
                idx, root, tau, allow_self_loops, counters, arcs
            )
            locals_ = [PipelineCounters() for _ in first_children]
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(
                    pool.map(
                        lambda cl_cnt: _drain(idx, [cl_cnt[0]], tau, allow_self_loops, cl_cnt[1]),
                        zip(first_children, locals_),
                    )
                )
            for sub in results:
                arcs.extend(sub)
            if counters is not None:
                for lc in locals_:
                    counters.merge(lc)
        else:
            arcs.extend(_drain(idx, [root], tau, allow_self_loops, counters))
    arcs.sort(key=lambda a: (a.source, a.target, -a.overlap_len))
    if counters is not None:
        counters.arcs += len(arcs)
    return StringGraph(n_reads=idx.n, arcs=arcs, tau=tau, provenance=provenance)


def _drain_one_level(idx, root, tau, allow_self_loops, counters, arcs) -> list[Cluster]:
    children = process_cluster(
        idx, root, tau, arcs, allow_self_loops=allow_self_loops, counters=counters
    )
    if counters is not None:
        counters.stack_peak = max(counters.stack_peak, 1 + len(children))
    return children
