"""Counters shared by the overlap and reduction phases.

The counters are cheap enough to keep on for benchmarking; ``validate``
additionally turns on exact structural assertions and string tracking,
which is meant for tests on small inputs only.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class PipelineCounters:
    extend_calls: int = 0      # one per (string, character) representation extension
    backward_exts: int = 0     # one per interval extension against the index
    seeds: int = 0             # single-character potential overlaps
    explored: int = 0          # potential overlaps examined, seeds included
    basic_arcsets: int = 0
    arcsets: int = 0           # arc-sets ever created during reduction, basics included
    clusters: int = 0          # clusters processed
    stack_peak: int = 0        # largest cluster-stack size seen
    arcs: int = 0              # arcs emitted

    validate: bool = False
    # validate only: list of string lists, one per exploration generation
    generations: list = field(default_factory=list)
    # validate only: (extension, [(body_string, overlap_len, dest_ids), ...]) per cluster
    cluster_log: list = field(default_factory=list)

    def merge(self, other: "PipelineCounters") -> None:
        self.extend_calls += other.extend_calls
        self.backward_exts += other.backward_exts
        self.seeds += other.seeds
        self.explored += other.explored
        self.basic_arcsets += other.basic_arcsets
        self.arcsets += other.arcsets
        self.clusters += other.clusters
        self.stack_peak = max(self.stack_peak, other.stack_peak)
        self.arcs += other.arcs
        self.generations.extend(other.generations)
        self.cluster_log.extend(other.cluster_log)
