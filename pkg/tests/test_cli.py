import random

import pytest

from fsg.cli import generate_reads, main

from conftest import R5_FASTA


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_index_writes_magic(tmp_path, r5_fasta, capsys):
    out = tmp_path / "r5.fsgi"
    code, _, _ = run(capsys, "index", str(r5_fasta), "-o", str(out))
    assert code == 0
    assert out.read_bytes()[:4] == b"FSGI"


def test_index_missing_file_exits_2(tmp_path, capsys):
    code, _, err = run(capsys, "index", str(tmp_path / "nope.fa"))
    assert code == 2
    assert "error" in err


def test_index_rc_doubles_r5(tmp_path, r5_fasta, capsys):
    out = tmp_path / "rc.fsgi"
    code, _, _ = run(capsys, "index", str(r5_fasta), "--rc", "-o", str(out))
    assert code == 0
    from fsg.fmindex import FmIndex

    assert FmIndex.load(out).n == 10


def test_keep_contained_error_policy(tmp_path, capsys):
    p = tmp_path / "dup.fa"
    p.write_text(">a\nACGT\n>b\nACGT\n")
    code, _, err = run(capsys, "index", str(p))
    assert code == 0  # default drops
    code, _, err = run(capsys, "index", str(p), "--keep-contained", "error")
    assert code == 2


def test_build_golden_tsv(tmp_path, r5_fasta, capsys):
    out = tmp_path / "g.tsv"
    code, _, _ = run(capsys, "build", str(r5_fasta), "--min-overlap", "2", "-o", str(out))
    assert code == 0
    rows = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
    assert rows == [
        "r1\tr3\t4\tccg",
        "r2\tr3\t4\ttcg",
        "r3\tr4\t5\tta",
        "r3\tr5\t5\tta",
    ]


def test_build_from_index_file(tmp_path, r5_fasta, capsys):
    idx_path = tmp_path / "r5.fsgi"
    run(capsys, "index", str(r5_fasta), "-o", str(idx_path))
    code, out, _ = run(capsys, "build", str(idx_path), "--min-overlap", "2")
    assert code == 0
    rows = [ln for ln in out.splitlines() if not ln.startswith("#")]
    # names are generated when building from a bare index
    assert rows[0] == "r0\tr2\t4\tccg"


def test_build_gfa_from_index_recovers_sequences(tmp_path, r5_fasta, capsys):
    idx_path = tmp_path / "r5.fsgi"
    run(capsys, "index", str(r5_fasta), "-o", str(idx_path))
    code, out, _ = run(capsys, "build", str(idx_path), "--min-overlap", "2", "--format", "gfa")
    assert code == 0
    s_lines = [ln for ln in out.splitlines() if ln.startswith("S\t")]
    assert sorted(ln.split("\t")[2] for ln in s_lines) == sorted(
        ["ccgtaca", "tcgtaca", "tacatgt", "catgtaa", "catgtgg"]
    )


def test_build_overlong_tau_warns_and_emits_empty(tmp_path, r5_fasta, capsys):
    out = tmp_path / "empty.tsv"
    code, _, err = run(
        capsys, "build", str(r5_fasta), "--min-overlap", "100", "-o", str(out)
    )
    assert code == 0
    assert "warning" in err
    rows = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
    assert rows == []


def test_build_threads_identical_bytes(tmp_path, capsys):
    src = tmp_path / "reads.fa"
    run(capsys, "gen", "--genome-len", "2000", "--read-len", "50", "--coverage", "5",
        "--seed", "3", "-o", str(src))
    outs = []
    for k in ("1", "4", "8"):
        out = tmp_path / f"g{k}.tsv"
        code, _, _ = run(capsys, "build", str(src), "--min-overlap", "20",
                         "--threads", k, "-o", str(out))
        assert code == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_gen_arithmetic_and_substrings(tmp_path, capsys):
    genome, reads = generate_reads(1000, 100, 4, seed=7)
    assert len(reads) == 40
    assert all(seq in genome for _, seq in reads)
    genome2, reads2 = generate_reads(1000, 100, 4, seed=7)
    assert genome == genome2 and reads == reads2
    _, few = generate_reads(1000, 100, 0.5, seed=7)
    assert len(few) == 5


def test_gen_cli_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.fa", tmp_path / "b.fa"
    run(capsys, "gen", "--genome-len", "500", "--read-len", "40", "--coverage", "2",
        "--seed", "11", "-o", str(a))
    run(capsys, "gen", "--genome-len", "500", "--read-len", "40", "--coverage", "2",
        "--seed", "11", "-o", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_gen_validates_arguments(capsys):
    code, _, err = run(capsys, "gen", "--genome-len", "10", "--read-len", "20",
                       "--coverage", "1")
    assert code == 2


def test_oracle_matches_build_end_to_end(tmp_path, capsys):
    rng = random.Random(2)
    for seed in (1, 2, 3):
        src = tmp_path / f"e2e{seed}.fa"
        run(capsys, "gen", "--genome-len", "300", "--read-len", "30", "--coverage", "3",
            "--seed", str(seed), "-o", str(src))
        tau = str(rng.randint(5, 15))
        b_out = tmp_path / f"b{seed}.tsv"
        o_out = tmp_path / f"o{seed}.tsv"
        assert run(capsys, "build", str(src), "--min-overlap", tau, "-o", str(b_out))[0] == 0
        assert run(capsys, "oracle", str(src), "--min-overlap", tau, "-o", str(o_out))[0] == 0
        assert b_out.read_text() == o_out.read_text()


def test_oracle_overlap_graph_flag(tmp_path, r5_fasta, capsys):
    code, out, _ = run(capsys, "oracle", str(r5_fasta), "--min-overlap", "2",
                       "--overlap-graph")
    assert code == 0
    rows = [ln for ln in out.splitlines() if not ln.startswith("#")]
    assert len(rows) == 8


def test_stats_subcommand(tmp_path, r5_fasta, capsys):
    g_out = tmp_path / "g.tsv"
    run(capsys, "build", str(r5_fasta), "--min-overlap", "2", "-o", str(g_out))
    code, out, _ = run(capsys, "stats", str(g_out))
    assert code == 0
    import json

    s = json.loads(out)
    assert s["arcs"] == 4
    assert s["overlap_hist"] == {"4": 2, "5": 2}


def test_bench_csv_columns(tmp_path, capsys):
    src = tmp_path / "reads.fa"
    run(capsys, "gen", "--genome-len", "1000", "--read-len", "50", "--coverage", "4",
        "--seed", "5", "-o", str(src))
    code, out, _ = run(capsys, "bench", str(src), "--tau-list", "20,30",
                       "--count-extensions")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].split(",")[:2] == ["tau", "n_reads"]
    assert len(lines) == 3
    row = dict(zip(lines[0].split(","), lines[1].split(",")))
    assert int(row["extensions"]) > 0
    assert int(row["arcs"]) >= 0


def test_bench_extension_column_empty_when_off(tmp_path, capsys):
    src = tmp_path / "reads.fa"
    run(capsys, "gen", "--genome-len", "500", "--read-len", "40", "--coverage", "3",
        "--seed", "5", "-o", str(src))
    code, out, _ = run(capsys, "bench", str(src), "--tau-list", "15")
    assert code == 0
    lines = out.strip().splitlines()
    row = dict(zip(lines[0].split(","), lines[1].split(",")))
    assert row["extensions"] == ""


def test_bench_renders_figure_next_to_csv(tmp_path, capsys):
    src = tmp_path / "reads.fa"
    run(capsys, "gen", "--genome-len", "800", "--read-len", "40", "--coverage", "3",
        "--seed", "9", "-o", str(src))
    out = tmp_path / "report.csv"
    code, _, _ = run(capsys, "bench", str(src), "--tau-list", "10,20",
                     "--count-extensions", "-o", str(out))
    assert code == 0
    assert out.exists()
    png = tmp_path / "report.png"
    assert png.exists() and png.stat().st_size > 0


def test_bench_no_plot(tmp_path, capsys):
    src = tmp_path / "reads.fa"
    run(capsys, "gen", "--genome-len", "400", "--read-len", "30", "--coverage", "2",
        "--seed", "9", "-o", str(src))
    out = tmp_path / "report.csv"
    code, _, _ = run(capsys, "bench", str(src), "--tau-list", "10", "--no-plot",
                     "-o", str(out))
    assert code == 0
    assert not (tmp_path / "report.png").exists()


def test_version_documents_rng(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    assert "PCG64" in out


def test_fsg_threads_env_fallback(tmp_path, r5_fasta, capsys, monkeypatch):
    monkeypatch.setenv("FSG_THREADS", "4")
    out = tmp_path / "g.tsv"
    code, _, _ = run(capsys, "build", str(r5_fasta), "--min-overlap", "2", "-o", str(out))
    assert code == 0
    rows = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
    assert len(rows) == 4
