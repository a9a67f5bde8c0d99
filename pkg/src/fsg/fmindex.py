"""BWT/FM-index of a read collection and the string queries built on it.

Every suffix of every read takes part in one global lexicographic order,
including the one-character sentinel suffix of each read. Ties between
identical suffixes of different reads are broken by read id, which is the
same as giving each read its own sentinel, smaller than every base and
ordered by id. Under that order:

* position ``i`` of the BWT holds the character preceding the i-th
  smallest suffix inside its read, or ``$`` when the suffix is the whole
  read;
* the first ``n`` positions of the suffix order are the sentinel suffixes,
  one per read, in id order;
* the p-th ``$`` inside the BWT (in BWT position order) belongs to the
  read whose full sequence is the p-th smallest, and ``dollar_map`` records
  that read id.

A string ``w`` that occurs in the collection is represented by the three
integers ``(b, e, e_dollar)``: ``q(w) = [b, e]`` is the range of suffixes
prefixed by ``w`` and ``q(w$) = [b, e_dollar]`` the sub-range of reads that
end with ``w`` (the two ranges share their lower bound because the
sentinel sorts first). Occurrence, suffix and prefix counts and one-step
backward extensions all come out of this triple in constant time.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .seqio import ALPHABET, AlphabetError, ReadSet

SENTINEL = "$"
CHARS = SENTINEL + ALPHABET  # BWT symbol order: $ < a < c < g < t
_CODE = {c: i for i, c in enumerate(CHARS)}
_CHAR_BYTES = np.frombuffer(CHARS.encode(), dtype=np.uint8)

_MAGIC = b"FSGI"
_VERSION = 1


@dataclass(frozen=True)
class Interval:
    """1-based inclusive range of the suffix order; empty iff begin > end."""

    begin: int
    end: int

    @property
    def width(self) -> int:
        return max(0, self.end - self.begin + 1)

    @property
    def is_empty(self) -> bool:
        return self.begin > self.end


@dataclass(frozen=True)
class QRepr:
    """Three-integer representation of q(w) = [b, e] and q(w$) = [b, e_dollar]."""

    b: int
    e: int
    e_dollar: int
    length: int

    def __post_init__(self):
        if not (self.b <= self.e_dollar + 1 and self.e_dollar <= self.e):
            raise ValueError(f"inconsistent representation {self!r}")

    @property
    def interval(self) -> Interval:
        return Interval(self.b, self.e)

    @property
    def is_empty(self) -> bool:
        return self.b > self.e


def substr(q: QRepr) -> int:
    """Number of occurrences of the represented string in the collection."""
    return q.e - q.b + 1


def suff(q: QRepr) -> int:
    """Number of reads having the represented string as a suffix."""
    return q.e_dollar - q.b + 1


def _sort_suffixes(text: np.ndarray) -> np.ndarray:
    """Suffix order of an integer sequence by prefix doubling (O(N log N))."""
    n = text.size
    rank = text.astype(np.int64, copy=True)
    step = 1
    while True:
        ahead = np.full(n, -1, dtype=np.int64)
        ahead[: n - step] = rank[step:]
        order = np.lexsort((ahead, rank))
        r1 = rank[order]
        r2 = ahead[order]
        bump = np.empty(n, dtype=np.int64)
        bump[0] = 0
        bump[1:] = (r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1])
        ranked = np.cumsum(bump)
        if ranked[-1] == n - 1:
            return order
        rank[order] = ranked
        step *= 2


class FmIndex:
    """Immutable succinct index over a read collection.

    All query methods are read-only and re-entrant; an instance may be
    shared freely across threads once built. ``occ(c, i)`` counts the
    occurrences of ``c`` among the first ``i - 1`` BWT symbols and is
    answered from per-block checkpoints plus a bounded in-block scan, so
    each query costs O(1) for a fixed block size.
    """

    def __init__(
        self,
        bwt_codes: np.ndarray,
        dollar_map: np.ndarray,
        max_len: int,
        occ_chunk: int = 64,
    ):
        if occ_chunk < 1:
            raise ValueError("occ_chunk must be >= 1")
        self._codes = np.ascontiguousarray(bwt_codes, dtype=np.uint8)
        self._dollar = np.ascontiguousarray(dollar_map, dtype=np.int64)
        self._codes.flags.writeable = False
        self._dollar.flags.writeable = False
        self.N = int(self._codes.size)
        self.n = int(self._dollar.size)
        self.max_len = int(max_len)
        self._chunk = int(occ_chunk)

        totals = np.bincount(self._codes, minlength=5).astype(np.int64)
        if totals[0] != self.n:
            raise ValueError("BWT sentinel count does not match the read count")
        # _cum[k] = number of symbols with code < k; _cum[5] = N.
        self._cum = np.zeros(6, dtype=np.int64)
        self._cum[1:] = np.cumsum(totals)

        nblocks = (self.N + self._chunk - 1) // self._chunk
        block_of = np.arange(self.N) // self._chunk
        per_block = np.bincount(block_of * 5 + self._codes, minlength=nblocks * 5)
        self._checkpoints = np.zeros((nblocks + 1, 5), dtype=np.int64)
        np.cumsum(per_block.reshape(nblocks, 5), axis=0, out=self._checkpoints[1:])

        # Sorted occurrence positions per symbol, for vectorized rank queries.
        self._pos = [np.flatnonzero(self._codes == k) for k in range(5)]

    # ------------------------------------------------------------------ #
    # basic queries

    @property
    def bwt(self) -> str:
        return _CHAR_BYTES[self._codes].tobytes().decode()

    @property
    def counts(self) -> dict[str, int]:
        """C(c): number of BWT symbols lexicographically smaller than c."""
        return {c: int(self._cum[_CODE[c]]) for c in CHARS}

    @property
    def dollar_map(self) -> np.ndarray:
        """Read id of the p-th BWT sentinel, 0-indexed by p - 1."""
        return self._dollar

    def occ(self, c: str, i: int) -> int:
        """Occurrences of c among the first i - 1 BWT symbols."""
        code = _CODE[c]
        j = min(max(i - 1, 0), self.N)
        block = j // self._chunk
        base = int(self._checkpoints[block, code])
        lo = block * self._chunk
        if j > lo:
            base += int(np.count_nonzero(self._codes[lo:j] == code))
        return base

    def _occ_batch(self, code: int, i: np.ndarray) -> np.ndarray:
        """Vectorized occ for a fixed symbol over an array of 1-based bounds."""
        return np.searchsorted(self._pos[code], i - 1, side="left")

    def backward_ext(self, iv: Interval, c: str) -> Interval:
        """The cw-interval of the w-interval `iv` (possibly empty)."""
        try:
            code = _CODE[c]
        except KeyError:
            raise AlphabetError(f"character {c!r} is not in {CHARS!r}") from None
        cc = int(self._cum[code])
        return Interval(cc + self.occ(c, iv.begin) + 1, cc + self.occ(c, iv.end + 1))

    # ------------------------------------------------------------------ #
    # string representations

    def init_repr(self, c: str) -> QRepr:
        """Representation of the single character c.

        q(c) comes straight from the symbol counts; q(c$) is the backward
        c-extension of the sentinel block [1, n].
        """
        if c not in ALPHABET:
            raise AlphabetError(f"character {c!r} is not in {ALPHABET!r}")
        code = _CODE[c]
        cc = int(self._cum[code])
        total = int(self._cum[code + 1]) - cc
        ends_with_c = self.occ(c, self.n + 1)
        return QRepr(b=cc + 1, e=cc + total, e_dollar=cc + ends_with_c, length=1)

    def extend_repr(self, q: QRepr, c: str) -> QRepr:
        """Representation of c·w from the representation of w."""
        if c not in ALPHABET:
            raise AlphabetError(f"character {c!r} is not in {ALPHABET!r}")
        code = _CODE[c]
        cc = int(self._cum[code])
        at_b = self.occ(c, q.b)
        return QRepr(
            b=cc + at_b + 1,
            e=cc + self.occ(c, q.e + 1),
            e_dollar=cc + self.occ(c, q.e_dollar + 1),
            length=q.length + 1,
        )

    def pref(self, q: QRepr) -> int:
        """Number of reads having the represented string as a prefix."""
        return self.backward_ext(q.interval, SENTINEL).width

    def listpref(self, q: QRepr) -> list[int]:
        """Ids of the reads whose prefix is the represented string.

        The backward $-extension lands in the sentinel block, where
        consecutive positions follow the lexicographic order of the full
        reads; mapping them through ``dollar_map`` yields the ids sorted
        that way, without duplicates.
        """
        iv = self.backward_ext(q.interval, SENTINEL)
        if iv.is_empty:
            return []
        return [int(x) for x in self._dollar[iv.begin - 1 : iv.end]]

    # ------------------------------------------------------------------ #
    # whole-read recovery

    def extract_read(self, read_id: int) -> str:
        """Recover one read by LF-walking back from its sentinel suffix."""
        if not 0 <= read_id < self.n:
            raise IndexError(f"read id {read_id} out of range")
        out: list[str] = []
        pos = read_id + 1  # sentinel suffixes sit at positions 1..n in id order
        while True:
            code = int(self._codes[pos - 1])
            if code == 0:
                break
            c = CHARS[code]
            out.append(c)
            pos = int(self._cum[code]) + self.occ(c, pos) + 1
        return "".join(reversed(out))

    # ------------------------------------------------------------------ #
    # serialization

    def save(self, path: Union[str, Path]) -> None:
        """Write the index: magic, version, n/N/max_len, BWT bytes, dollar map."""
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(bytes([_VERSION]))
            fh.write(struct.pack("<QQQ", self.n, self.N, self.max_len))
            fh.write(_CHAR_BYTES[self._codes].tobytes())
            fh.write(self._dollar.astype("<u8").tobytes())

    @classmethod
    def load(cls, path: Union[str, Path], occ_chunk: int = 64) -> "FmIndex":
        """Read an index file back; checkpoints are rebuilt, not stored."""
        blob = Path(path).read_bytes()
        if blob[:4] != _MAGIC:
            raise ValueError(f"{path}: not an index file (bad magic)")
        if blob[4] != _VERSION:
            raise ValueError(f"{path}: unsupported index version {blob[4]}")
        n, N, max_len = struct.unpack("<QQQ", blob[5:29])
        if len(blob) != 29 + N + 8 * n:
            raise ValueError(f"{path}: truncated index file")
        symbols = np.frombuffer(blob, dtype=np.uint8, count=N, offset=29)
        codes = np.zeros(N, dtype=np.uint8)
        for k, ch in enumerate(CHARS):
            codes[symbols == ord(ch)] = k
        if np.count_nonzero(np.isin(symbols, _CHAR_BYTES)) != N:
            raise ValueError(f"{path}: index holds symbols outside {CHARS!r}")
        dollar = np.frombuffer(blob, dtype="<u8", count=n, offset=29 + N).astype(np.int64)
        return cls(codes, dollar, max_len=max_len, occ_chunk=occ_chunk)


def build_index(rs: ReadSet, occ_chunk: int = 64) -> FmIndex:
    """Build the FM-index of a normalized (substring-free) read set.

    The generalized suffix order is computed directly with an O(N log N)
    prefix-doubling sort over an integer rendering of the collection where
    each read's terminator is a distinct value ordered by read id. That
    makes every suffix comparison stop at or before a terminator, which is
    exactly the id tie-breaking the rest of the index relies on.
    """
    if len(rs) == 0:
        raise ValueError("cannot index an empty read set")
    n = len(rs)
    lengths = np.fromiter((len(r.seq) for r in rs.reads), dtype=np.int64, count=n)
    N = int(np.sum(lengths + 1))

    # Letters are shifted above the n terminator values.
    letter_code = np.zeros(128, dtype=np.int64)
    for k, ch in enumerate(ALPHABET):
        letter_code[ord(ch)] = n + k
    text = np.empty(N, dtype=np.int64)
    starts = np.empty(n, dtype=np.int64)
    offset = 0
    for r in rs.reads:
        starts[r.id] = offset
        raw = np.frombuffer(r.seq.encode(), dtype=np.uint8)
        text[offset : offset + raw.size] = letter_code[raw]
        offset += raw.size
        text[offset] = r.id
        offset += 1

    sa = _sort_suffixes(text)

    is_start = np.zeros(N, dtype=bool)
    is_start[starts] = True
    whole = is_start[sa]
    read_of = np.repeat(np.arange(n, dtype=np.int64), lengths + 1)

    prev = text[sa - 1]  # sa==0 only for a whole-read suffix, masked below
    bwt_codes = np.where(whole, 0, prev - n + 1).astype(np.uint8)
    dollar_map = read_of[sa[np.flatnonzero(whole)]]
    return FmIndex(bwt_codes, dollar_map, max_len=rs.max_len, occ_chunk=occ_chunk)
