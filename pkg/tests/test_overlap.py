import random

import pytest

from fsg import PipelineCounters, build_index, normalize, substr, suff
from fsg.overlap import compute_basic_arcsets, explore_potential_overlaps
from fsg.oracle import count_occurrences

from conftest import R5_SEQS, random_seqs


def overlap_oracle(seqs, tau):
    """Distinct proper read suffixes that are also read prefixes, >= tau long.

    Whole reads are excluded: under substring-freeness they prefix only
    themselves, which is the trivial full self-overlap, not an arc.
    """
    out = set()
    for a in seqs:
        for k in range(tau, len(a)):
            beta = a[-k:]
            if any(b.startswith(beta) for b in seqs):
                out.add(beta)
    return out


def potential_overlap_oracle(seqs):
    """Proper read suffixes that occur somewhere else not as a suffix."""
    out = set()
    n_suffix = {}
    for a in seqs:
        for k in range(1, len(a)):
            s = a[-k:]
            n_suffix[s] = sum(b.endswith(s) for b in seqs)
    for s, ns in n_suffix.items():
        total = sum(count_occurrences([a], s) for a in seqs)
        if total > ns:
            out.add(s)
    return out


def test_r5_basic_arcsets(r5_index):
    basics = compute_basic_arcsets(r5_index, 2)
    table = {(b.overlap_len, tuple(b.dest_ids(r5_index))) for b in basics}
    assert table == {(2, (3, 4)), (5, (3, 4)), (4, (2,))}
    for b in basics:
        assert b.n_dest == len(b.dest_ids(r5_index))


def test_single_read_self_overlap_is_emitted():
    idx = build_index(normalize(["acgtac"]))
    basics = compute_basic_arcsets(idx, 2)
    assert len(basics) == 1
    assert basics[0].overlap_len == 2
    assert basics[0].dest_ids(idx) == [0]


def test_no_shared_suffix_prefix_means_no_arcsets():
    # No string is both a read suffix and a read prefix here.
    idx = build_index(normalize(["ca", "cta"]))
    assert compute_basic_arcsets(idx, 1) == []


def test_self_only_overlaps_are_still_emitted():
    # "aaaa" overlaps itself; the basic stage keeps those arc-sets and the
    # self-loop policy is applied downstream, like the single-read case.
    idx = build_index(normalize(["aaaa", "cccc"]))
    basics = compute_basic_arcsets(idx, 1)
    assert {b.overlap_str for b in basics} == {None}
    assert sorted(b.overlap_len for b in basics) == [1, 1, 2, 2, 3, 3]
    from fsg.reduce import reduce_graph

    assert reduce_graph(idx, basics, 1).arcs == []  # all self-loops, filtered


def test_tau_must_be_positive(r5_index):
    with pytest.raises(ValueError):
        compute_basic_arcsets(r5_index, 0)


def test_emitted_overlaps_match_enumeration_oracle():
    rng = random.Random(31)
    for _ in range(30):
        seqs = random_seqs(rng, n_max=12, len_hi=20)
        rs = normalize(seqs)
        idx = build_index(rs)
        tau = rng.randint(1, 6)
        cnt = PipelineCounters(validate=True)
        basics = compute_basic_arcsets(idx, tau, counters=cnt)
        emitted = {b.overlap_str for b in basics}
        assert emitted == overlap_oracle(rs.seqs, tau)
        # every emitted overlap satisfies the defining counts
        for b in basics:
            assert suff(b.overlap_repr) > 0
            assert b.n_dest > 0
            assert b.overlap_len >= tau


def test_explored_set_is_exactly_the_potential_overlaps():
    rng = random.Random(77)
    for _ in range(15):
        rs = normalize(random_seqs(rng, n_max=10, len_hi=15))
        idx = build_index(rs)
        cnt = PipelineCounters(validate=True)
        compute_basic_arcsets(idx, 1, counters=cnt)
        explored = {s for gen in cnt.generations for s in gen}
        assert explored == potential_overlap_oracle(rs.seqs)


def test_proposition_closure_suffixes_of_overlaps_are_explored():
    rng = random.Random(13)
    rs = normalize(random_seqs(rng, n_max=15, len_hi=15))
    idx = build_index(rs)
    cnt = PipelineCounters(validate=True)
    basics = compute_basic_arcsets(idx, 2, counters=cnt)
    explored = {s for gen in cnt.generations for s in gen}
    for b in basics:
        beta = b.overlap_str
        for k in range(1, len(beta) + 1):
            assert beta[-k:] in explored


def test_each_string_explored_once_and_bounded():
    rng = random.Random(41)
    for _ in range(15):
        rs = normalize(random_seqs(rng, n_max=12, len_hi=18))
        idx = build_index(rs)
        cnt = PipelineCounters(validate=True)
        compute_basic_arcsets(idx, 1, counters=cnt)
        all_strings = [s for gen in cnt.generations for s in gen]
        assert len(all_strings) == len(set(all_strings))
        assert cnt.explored == len(all_strings)
        distinct_suffixes = {s[i:] for s in rs.seqs for i in range(len(s))}
        assert cnt.explored <= len(distinct_suffixes)
        assert len(distinct_suffixes) <= len(rs) * rs.max_len
        # one extension per character per explored string
        assert cnt.extend_calls == 4 * cnt.explored


def test_exploration_order_is_lexicographic_within_generations(r5_index):
    cnt = PipelineCounters(validate=True)
    compute_basic_arcsets(r5_index, 2, counters=cnt)
    assert cnt.generations[0] == ["a", "g", "t"]
    for gen in cnt.generations:
        assert gen == sorted(gen)
        assert len({len(s) for s in gen}) == 1


def test_potential_overlap_iterator_matches_generations(r5_index):
    cnt = PipelineCounters(validate=True)
    compute_basic_arcsets(r5_index, 2, counters=cnt)
    flat = [s for gen in cnt.generations for s in gen]
    pos = list(explore_potential_overlaps(r5_index))
    assert len(pos) == len(flat)
    for po, s in zip(pos, flat):
        assert po.length == len(s)
        assert substr(po.repr) > suff(po.repr) > 0


def test_threads_do_not_change_basics(r5_index):
    rng = random.Random(3)
    rs = normalize(random_seqs(rng, n_max=25, len_hi=30))
    idx = build_index(rs)
    one = compute_basic_arcsets(idx, 2, threads=1)
    four = compute_basic_arcsets(idx, 2, threads=4)
    assert [(b.overlap_repr, b.overlap_len, b.dest_lo, b.dest_hi) for b in one] == [
        (b.overlap_repr, b.overlap_len, b.dest_lo, b.dest_hi) for b in four
    ]
