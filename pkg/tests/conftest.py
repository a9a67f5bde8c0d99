import random

import pytest

from fsg import build_index, normalize
from fsg.seqio import parse_reads

R5_FASTA = """>r1
CCGTACA
>r2
TCGTACA
>r3
TACATGT
>r4
CATGTAA
>r5
CATGTGG
"""

R5_SEQS = ["ccgtaca", "tcgtaca", "tacatgt", "catgtaa", "catgtgg"]

# The 4-arc golden graph of the R5 fixture at tau=2, as
# (source, target, overlap_len, label) with ids 0..4 for r1..r5.
R5_GOLDEN_ARCS = [
    (0, 2, 4, "ccg"),
    (1, 2, 4, "tcg"),
    (2, 3, 5, "ta"),
    (2, 4, 5, "ta"),
]


@pytest.fixture(scope="session")
def r5_readset(tmp_path_factory):
    path = tmp_path_factory.mktemp("r5") / "r5.fa"
    path.write_text(R5_FASTA)
    raw, report = parse_reads(path)
    return normalize(raw, report=report)


@pytest.fixture(scope="session")
def r5_index(r5_readset):
    return build_index(r5_readset)


@pytest.fixture
def r5_fasta(tmp_path):
    path = tmp_path / "r5.fa"
    path.write_text(R5_FASTA)
    return path


def random_seqs(rng: random.Random, n_max: int = 40, len_lo: int = 8, len_hi: int = 40):
    n = rng.randint(2, n_max)
    return [
        "".join(rng.choice("acgt") for _ in range(rng.randint(len_lo, len_hi)))
        for _ in range(n)
    ]


def arcs_as_tuples(graph):
    return [(a.source, a.target, a.overlap_len, a.label) for a in graph.arcs]


_acceptance_results = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        _acceptance_results.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, outcome in _acceptance_results:
        terminalreporter.write_line(f"ACCEPTANCE {name}: {outcome.upper()}")
