"""FASTA/FASTQ ingestion and read-set normalization.

The index and the overlap machinery require a substring-free collection:
no read may be a duplicate of another read or occur inside one. Parsing
keeps original headers, folds sequences to lowercase and drops reads with
ambiguous bases; normalization enforces substring-freeness, optionally
augments the collection with reverse complements, and logs everything it
removed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

ALPHABET = "acgt"

_COMPLEMENT = str.maketrans("acgt", "tgca")
_KNOWN_CHARS = frozenset(ALPHABET + "n")


class ParseError(ValueError):
    """Malformed FASTA/FASTQ input. Carries the offending line number."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class AlphabetError(ValueError):
    """A sequence contains characters outside {a,c,g,t,n}."""


class EmptyInputError(ValueError):
    """No read survived parsing and normalization."""


class ContainedReadError(ValueError):
    """Duplicate/contained reads found while the policy forbids dropping them."""


def revcomp(seq: str) -> str:
    """Reverse complement of a lowercase acgt string."""
    return seq.translate(_COMPLEMENT)[::-1]


@dataclass(frozen=True)
class Read:
    """One input sequence.

    `id` is dense and zero-based after normalization. `rc_of` is set on
    reads that were added as the reverse complement of another read and
    holds the originating read's id.
    """

    id: int
    name: str
    seq: str
    rc_of: Optional[int] = None


@dataclass
class NormalizationReport:
    n_input: int = 0
    n_invalid: int = 0
    n_dropped: int = 0
    duplicates_removed: int = 0
    contained_removed: int = 0
    rc_added: int = 0
    n_final: int = 0


@dataclass
class ReadSet:
    """Normalized, substring-free collection with dense ids."""

    reads: list[Read]
    max_len: int
    report: NormalizationReport

    def __len__(self) -> int:
        return len(self.reads)

    def __iter__(self):
        return iter(self.reads)

    @property
    def seqs(self) -> list[str]:
        return [r.seq for r in self.reads]


def _check_sequence(name: str, seq: str, line_no: int) -> str:
    seq = seq.lower()
    bad = set(seq) - _KNOWN_CHARS
    if bad:
        raise AlphabetError(
            f"line {line_no}: read {name!r} contains disallowed characters "
            f"{sorted(bad)!r} (allowed: a,c,g,t plus droppable n)"
        )
    return seq


def _parse_fasta(lines: list[str], report: NormalizationReport) -> list[Read]:
    reads: list[Read] = []
    name = None
    chunks: list[str] = []
    header_line = 0

    def flush(at_line: int) -> None:
        nonlocal name, chunks
        if name is None:
            return
        seq = _check_sequence(name, "".join(chunks), at_line)
        _store_record(reads, report, name, seq)
        name, chunks = None, []

    for i, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith(">"):
            flush(i)
            name = line[1:].strip()
            header_line = i
        else:
            if name is None:
                raise ParseError("sequence data before any FASTA header", i)
            chunks.append(line)
    flush(header_line + 1)
    return reads


def _parse_fastq(lines: list[str], report: NormalizationReport) -> list[Read]:
    reads: list[Read] = []
    body = [(i, ln.strip()) for i, ln in enumerate(lines, start=1) if ln.strip()]
    if len(body) % 4 != 0:
        raise ParseError("FASTQ record truncated (records are 4 lines)", body[-1][0])
    for k in range(0, len(body), 4):
        (h_no, header), (s_no, seq), (p_no, plus), (q_no, qual) = body[k : k + 4]
        if not header.startswith("@"):
            raise ParseError("expected '@' header", h_no)
        if not plus.startswith("+"):
            raise ParseError("expected '+' separator", p_no)
        if len(qual) != len(seq):
            raise ParseError("quality string length differs from sequence", q_no)
        name = header[1:].strip()
        _store_record(reads, report, name, _check_sequence(name, seq, s_no))
    return reads


def _store_record(reads: list[Read], report: NormalizationReport, name: str, seq: str) -> None:
    report.n_input += 1
    if not seq:
        report.n_invalid += 1
        return
    if "n" in seq:
        report.n_dropped += 1
        return
    reads.append(Read(id=len(reads), name=name, seq=seq))


def parse_reads(
    path: Union[str, Path], format: str = "auto"
) -> tuple[list[Read], NormalizationReport]:
    """Parse a FASTA or FASTQ file into raw reads.

    Sequences are folded to lowercase. Reads containing 'n' are dropped
    and counted in the returned report (not fatal); any other character
    outside the alphabet raises AlphabetError. Returns the raw read list
    plus a report pre-filled with parse-stage counts, meant to be passed
    on to :func:`normalize`.
    """
    if format not in ("fasta", "fastq", "auto"):
        raise ValueError(f"unknown format {format!r}")
    text = Path(path).read_text()
    lines = text.splitlines()
    report = NormalizationReport()
    if format == "auto":
        first = next((ln for ln in lines if ln.strip()), "")
        if first.startswith(">"):
            format = "fasta"
        elif first.startswith("@"):
            format = "fastq"
        elif not first:
            return [], report
        else:
            raise ParseError("cannot detect format (no '>' or '@' header)", 1)
    if format == "fasta":
        return _parse_fasta(lines, report), report
    return _parse_fastq(lines, report), report


def _coerce(reads: Iterable[Union[Read, str]]) -> list[Read]:
    out: list[Read] = []
    for i, r in enumerate(reads):
        if isinstance(r, str):
            out.append(Read(id=i, name=f"r{i}", seq=r.lower()))
        else:
            out.append(r)
    return out


def _drop_duplicates(records: list[dict], report: NormalizationReport) -> list[dict]:
    seen: set[str] = set()
    kept = []
    for rec in records:
        if rec["seq"] in seen:
            report.duplicates_removed += 1
        else:
            seen.add(rec["seq"])
            kept.append(rec)
    return kept


def _drop_contained(records: list[dict], report: NormalizationReport) -> list[dict]:
    # A read can only be contained in a strictly longer read (equal length
    # plus containment means equality, which duplicate removal already
    # handled). Scan lengths in decreasing order against a growing haystack.
    by_len: dict[int, list[dict]] = {}
    for rec in records:
        by_len.setdefault(len(rec["seq"]), []).append(rec)
    haystack = ""
    contained: set[int] = set()
    for length in sorted(by_len, reverse=True):
        if haystack:
            for rec in by_len[length]:
                if rec["seq"] in haystack:
                    contained.add(id(rec))
        haystack = "#".join([haystack] + [rec["seq"] for rec in by_len[length]])
    kept = [rec for rec in records if id(rec) not in contained]
    report.contained_removed += len(records) - len(kept)
    return kept


def normalize(
    reads: Sequence[Union[Read, str]],
    add_rc: bool = False,
    contained: str = "drop",
    report: Optional[NormalizationReport] = None,
) -> ReadSet:
    """Turn raw reads into a substring-free ReadSet with dense ids.

    Exact duplicates are removed (first occurrence wins), then reads that
    occur inside another read. With `add_rc`, the reverse complement of
    every surviving read is appended (tagged via `rc_of`) and
    substring-freeness is re-enforced over the union. `contained` may be
    "drop" (default) or "error", which raises ContainedReadError instead
    of silently removing anything.

    Raises EmptyInputError when nothing survives.
    """
    if contained not in ("drop", "error"):
        raise ValueError(f"contained policy must be 'drop' or 'error', got {contained!r}")
    rep = report if report is not None else NormalizationReport()
    items = _coerce(reads)
    if report is None:
        rep.n_input = len(items)

    records = [{"seq": r.seq, "name": r.name, "origin": None, "rc_of": r.rc_of} for r in items]
    records = _drop_contained(_drop_duplicates(records, rep), rep)

    if add_rc:
        rc_records = [
            {"seq": revcomp(rec["seq"]), "name": rec["name"], "origin": rec, "rc_of": None}
            for rec in records
        ]
        records = _drop_contained(_drop_duplicates(records + rc_records, rep), rep)
        rep.rc_added = sum(1 for rec in records if rec["origin"] is not None)

    if contained == "error" and (rep.duplicates_removed or rep.contained_removed):
        raise ContainedReadError(
            f"{rep.duplicates_removed} duplicate and {rep.contained_removed} "
            "contained reads present"
        )
    if not records:
        raise EmptyInputError("no read survived normalization")

    final_id = {id(rec): i for i, rec in enumerate(records)}
    out: list[Read] = []
    for i, rec in enumerate(records):
        if rec["origin"] is not None:
            rc_of = final_id.get(id(rec["origin"]))
        else:
            rc_of = rec["rc_of"]
        out.append(Read(id=i, name=rec["name"], seq=rec["seq"], rc_of=rc_of))
    rep.n_final = len(out)
    return ReadSet(reads=out, max_len=max(len(r.seq) for r in out), report=rep)


def load_reads(
    path: Union[str, Path],
    format: str = "auto",
    add_rc: bool = False,
    contained: str = "drop",
) -> ReadSet:
    """Parse and normalize in one step."""
    raw, report = parse_reads(path, format=format)
    if not raw:
        raise EmptyInputError(f"no reads in {path}")
    return normalize(raw, add_rc=add_rc, contained=contained, report=report)
