"""Suffix array, BWT with rank/select, LF, and the LCP/LRS tables of a multi-string.

Positions are 0-based throughout: ``sa[r]`` is the text offset of the suffix
of rank ``r``; ``rank(c, i)`` counts ``c`` in ``seq[:i]``; ``select(c, j)``
returns the offset of the ``j``-th occurrence (``j >= 1``).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Union

import numpy as np
from numba import njit

from . import _kernels
from .errors import LengthMismatch, NoSuchOccurrence
from .text import MultiString, OrderedStringSet, concat_multistring

Symbol = Union[int, bytes, str]


def as_symbol(c: Symbol) -> int:
    if isinstance(c, int):
        return c
    if isinstance(c, str):
        return 0 if c == "$" else ord(c)
    if len(c) != 1:
        raise ValueError(f"expected a single symbol, got {c!r}")
    return c[0]


@njit(cache=True)
def _occ_checkpoints(seq, code, nsym, step):
    nblocks = seq.shape[0] // step + 1
    occ = np.zeros((nblocks, nsym), dtype=np.int64)
    run = np.zeros(nsym, dtype=np.int64)
    for i in range(seq.shape[0]):
        if i % step == 0:
            occ[i // step, :] = run
        run[code[seq[i]]] += 1
    if seq.shape[0] % step == 0:
        occ[nblocks - 1, :] = run
    return occ, run


class RankSelect:
    """Rank/select over a byte sequence with a checkpoint every ``step`` positions.

    Only symbols present in the sequence get a counter column.  Also used for
    0/1 bit arrays.
    """

    def __init__(self, seq: np.ndarray, step: int = 64):
        self.seq = np.ascontiguousarray(seq, dtype=np.uint8)
        self.step = step
        self.symbols = np.unique(self.seq)
        self.code = np.full(256, 0, dtype=np.int64)
        self.code[self.symbols] = np.arange(len(self.symbols))
        self._present = np.zeros(256, dtype=bool)
        self._present[self.symbols] = True
        self.occ, self.totals = _occ_checkpoints(self.seq, self.code, len(self.symbols), step)

    def __len__(self) -> int:
        return len(self.seq)

    def count(self, c: Symbol) -> int:
        c = as_symbol(c)
        return int(self.totals[self.code[c]]) if self._present[c] else 0

    def rank(self, c: Symbol, i: int) -> int:
        c = as_symbol(c)
        if not 0 <= i <= len(self.seq):
            raise IndexError(f"rank position {i} outside [0, {len(self.seq)}]")
        if not self._present[c]:
            return 0
        b = i // self.step
        base = int(self.occ[b, self.code[c]])
        return base + int(np.count_nonzero(self.seq[b * self.step:i] == c))

    def select(self, c: Symbol, j: int) -> int:
        c = as_symbol(c)
        if j < 1 or j > self.count(c):
            raise NoSuchOccurrence(f"symbol {c} has no occurrence number {j}")
        col = self.occ[:, self.code[c]]
        b = int(np.searchsorted(col, j, side="left")) - 1
        lo = b * self.step
        hits = np.flatnonzero(self.seq[lo:lo + self.step] == c)
        return lo + int(hits[j - int(col[b]) - 1])


@dataclass(frozen=True)
class SuffixArray:
    sa: np.ndarray

    def __len__(self) -> int:
        return len(self.sa)


def build_suffix_array(m: MultiString) -> SuffixArray:
    """SA-IS over the text shifted up by one, with a virtual unique sentinel."""
    t = np.empty(len(m) + 1, dtype=np.int64)
    t[:-1] = m.array
    t[:-1] += 1
    t[-1] = 0
    sa = _kernels.sais(t, 257)
    return SuffixArray(np.ascontiguousarray(sa[1:]))


@dataclass(frozen=True)
class BwtIndex:
    bwt: np.ndarray
    c_array: np.ndarray
    occ: RankSelect
    string_count: int

    def __len__(self) -> int:
        return len(self.bwt)

    @cached_property
    def lf_table(self) -> np.ndarray:
        return _kernels.lf_table(self.bwt, self.c_array)

    def lf(self, i: int) -> int:
        if not 0 <= i < len(self.bwt):
            raise IndexError(f"position {i} outside the BWT")
        c = int(self.bwt[i])
        return int(self.c_array[c]) + self.occ.rank(c, i + 1) - 1

    def rank(self, c: Symbol, i: int) -> int:
        return self.occ.rank(c, i)

    def select(self, c: Symbol, j: int) -> int:
        return self.occ.select(c, j)

    def bwt_bytes(self) -> bytes:
        return self.bwt.tobytes()


def c_array_of(seq: np.ndarray) -> np.ndarray:
    counts = np.bincount(seq, minlength=256).astype(np.int64)
    return np.concatenate(([0], np.cumsum(counts)[:-1]))


def index_from_bwt(bwt: np.ndarray) -> BwtIndex:
    bwt = np.ascontiguousarray(bwt, dtype=np.uint8)
    return BwtIndex(bwt, c_array_of(bwt), RankSelect(bwt), int(np.count_nonzero(bwt == 0)))


def build_bwt(m: MultiString, sa: SuffixArray) -> BwtIndex:
    text = m.array
    # sa - 1 == -1 wraps to the last symbol, which is what the definition asks
    return index_from_bwt(text[sa.sa - 1])


def lf(idx: BwtIndex, i: int) -> int:
    return idx.lf(i)


@dataclass(frozen=True)
class LcpArray:
    values: np.ndarray
    capped: bool = False

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class LrsArray:
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.values)


def build_lcp(m: MultiString, sa: SuffixArray, cyclic: bool = False) -> LcpArray:
    """LCP of adjacent suffixes, or with ``cyclic`` of adjacent rotations of ``m``.

    Starting ``m`` at the smallest string makes rotation order equal suffix
    order, so both variants share ``sa``; they differ only next to the final
    suffix, and never after capping by LRS.
    """
    return LcpArray(_kernels.kasai(m.array, sa.sa, cyclic))


def build_lrs(idx: BwtIndex, return_visits: bool = False):
    """One backward LF walk from each ``$``-suffix; every position is set once."""
    lrs, visits = _kernels.lrs_walks(idx.bwt, idx.lf_table, idx.string_count)
    out = LrsArray(lrs)
    if return_visits:
        return out, visits
    return out


def build_lcp_p(raw: LcpArray, lrs: LrsArray) -> LcpArray:
    if len(raw) != len(lrs):
        raise LengthMismatch(f"LCP has {len(raw)} entries, LRS has {len(lrs)}")
    return LcpArray(np.minimum(raw.values, lrs.values), capped=True)


@dataclass(frozen=True)
class BwtTables:
    """Everything built from one ordered set on the BWT side."""

    ordered: OrderedStringSet
    m: MultiString
    sa: SuffixArray
    index: BwtIndex
    lcp: LcpArray
    lrs: LrsArray
    lcp_p: LcpArray


def build_tables(P: OrderedStringSet) -> BwtTables:
    m = concat_multistring(P)
    sa = build_suffix_array(m)
    idx = build_bwt(m, sa)
    raw = build_lcp(m, sa)
    lrs = build_lrs(idx)
    return BwtTables(P, m, sa, idx, raw, lrs, build_lcp_p(raw, lrs))
