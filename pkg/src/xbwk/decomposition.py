"""Block decomposition of a multi-string BWT and the Aho-Corasick graph it encodes.

A block is a maximal run of suffix ranks sharing one representative: the
stretch of text from the suffix start up to the next ``$``.  Blocks are in
bijection with prefixes of the reversed strings (the empty prefix included),
and two arc families over blocks reproduce the trie and failure links of
the reversed set.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import LengthMismatch
from .suffix import BwtIndex, BwtTables, LcpArray, LrsArray, build_tables
from .text import OrderedStringSet, reverse_set


class Block(NamedTuple):
    """Half-open range ``[start, stop)`` of suffix ranks."""

    start: int
    stop: int

    def __len__(self) -> int:
        return self.stop - self.start


@dataclass(frozen=True)
class BwtDecomposition:
    starts: np.ndarray  # block start ranks followed by the total length

    def __len__(self) -> int:
        return len(self.starts) - 1

    @property
    def bwd(self) -> np.ndarray:
        return np.diff(self.starts)

    def block(self, k: int) -> Block:
        return Block(int(self.starts[k]), int(self.starts[k + 1]))

    def blocks(self) -> list[Block]:
        s = self.starts.tolist()
        return [Block(a, b) for a, b in zip(s, s[1:])]

    @cached_property
    def block_of(self) -> np.ndarray:
        return np.repeat(np.arange(len(self), dtype=np.int64), self.bwd)


def decompose_bwt(lcp_p: LcpArray, lrs: LrsArray) -> BwtDecomposition:
    if len(lcp_p) != len(lrs):
        raise LengthMismatch(f"LCP(P) has {len(lcp_p)} entries, LRS has {len(lrs)}")
    opens = lcp_p.values != lrs.values
    # rank 0 always opens a block even though both tables are 0 there
    opens[0] = True
    starts = np.append(np.flatnonzero(opens), len(lrs)).astype(np.int64)
    return BwtDecomposition(starts)


def dec_pre(decomp: BwtDecomposition, tables: BwtTables, block: int) -> bytes:
    """Representative of a block, reversed: a prefix of some reversed string."""
    i = int(decomp.starts[block])
    p = int(tables.sa.sa[i])
    n = int(tables.lrs.values[i])
    return tables.m.text[p:p + n][::-1]


def representative_at(tables: BwtTables, rank: int) -> bytes:
    p = int(tables.sa.sa[rank])
    return tables.m.text[p:p + int(tables.lrs.values[rank])][::-1]


def owner_strings(tables: BwtTables) -> np.ndarray:
    """Index (into the string set) of the string each suffix rank lies in.

    A ``$``-suffix belongs to the string it terminates.
    """
    bounds = np.asarray(tables.m.boundaries, dtype=np.int64)
    piece = np.searchsorted(bounds, tables.sa.sa, side="left")
    seq = np.asarray(tables.ordered.sequence(), dtype=np.int64)
    return seq[piece]


class Arc(NamedTuple):
    parent: int
    child: int
    label: int


def tree_arcs(decomp: BwtDecomposition, idx: BwtIndex) -> list[Arc]:
    """One labelled arc per block pair linked by LF from a non-``$`` position."""
    x = np.flatnonzero(idx.bwt != 0)
    u = decomp.block_of[x]
    v = decomp.block_of[idx.lf_table[x]]
    nb = len(decomp)
    keys, first = np.unique(u * nb + v, return_index=True)
    labels = idx.bwt[x[first]]
    return [Arc(int(k // nb), int(k % nb), int(c)) for k, c in zip(keys, labels)]


def _failure_scan(decomp: BwtDecomposition, lcp_p: np.ndarray, lrs: np.ndarray,
                  lo_offset: int) -> np.ndarray:
    """Literal scan: largest k < i with lrs[k] == min(lcp_p[k+lo_offset .. i])."""
    out = np.full(len(decomp), -1, dtype=np.int64)
    block_of = decomp.block_of
    for b in range(1, len(decomp)):
        i = int(decomp.starts[b])
        for k in range(i - 1, -1, -1):
            lo = max(k + lo_offset, 0)
            if lrs[k] == lcp_p[lo:i + 1].min():
                out[b] = block_of[k]
                break
    return out


def failure_arcs(decomp: BwtDecomposition, lcp_p: LcpArray, lrs: LrsArray,
                 window: str = "tight") -> np.ndarray:
    """Failure target block for every block (-1 for the root block).

    ``window="tight"`` minimises over ``[k+1 .. i]`` (linear-time stack);
    ``window="extended"`` evaluates the literal ``[k-1 .. i]`` window by scanning
    and exists only for comparison.
    """
    if window == "tight":
        starts = decomp.starts[:-1]
        return _kernels.failure_targets(starts, lcp_p.values, lrs.values, decomp.block_of)
    if window == "extended":
        return _failure_scan(decomp, lcp_p.values, lrs.values, -1)
    if window == "tight-scan":
        return _failure_scan(decomp, lcp_p.values, lrs.values, 1)
    raise ValueError(f"unknown window {window!r}")


@dataclass(frozen=True)
class AcSimGraph:
    """Trie and failure links expressed over BWT blocks of the reversed set."""

    parent: np.ndarray  # parent block, -1 at the root
    label: np.ndarray  # label of the arc entering each block, 0 at the root
    failure: np.ndarray  # failure target block, -1 at the root
    tables: BwtTables = field(repr=False)
    decomp: BwtDecomposition = field(repr=False)

    def __len__(self) -> int:
        return len(self.parent)

    def prefix(self, node: int) -> bytes:
        """The prefix of the original strings this node stands for."""
        return dec_pre(self.decomp, self.tables, node)

    def tree_arcs(self) -> list[Arc]:
        return [Arc(int(p), v, int(self.label[v])) for v, p in enumerate(self.parent) if p >= 0]

    def to_dot(self) -> str:
        lines = ["digraph ac {", "  node [shape=circle];"]
        for v in range(len(self)):
            name = _dot_escape(self.prefix(v)) or "ε"
            lines.append(f'  n{v} [label="{name}"];')
        for a in self.tree_arcs():
            lines.append(f'  n{a.parent} -> n{a.child} [label="{_dot_escape(bytes([a.label]))}"];')
        for v, f in enumerate(self.failure):
            if f >= 0:
                lines.append(f"  n{v} -> n{f} [style=dashed, color=red];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _dot_escape(b: bytes) -> str:
    s = b.replace(b"\x00", b"$").decode("latin-1")
    return s.replace("\\", "\\\\").replace('"', '\\"')


def simulate_ac(P: OrderedStringSet) -> AcSimGraph:
    """A graph isomorphic to the Aho-Corasick automaton of ``P.S``, from BWT tables of its reverse."""
    tables = build_tables(reverse_set(P))
    decomp = decompose_bwt(tables.lcp_p, tables.lrs)
    nb = len(decomp)
    parent = np.full(nb, -1, dtype=np.int64)
    label = np.zeros(nb, dtype=np.uint8)
    for a in tree_arcs(decomp, tables.index):
        parent[a.child] = a.parent
        label[a.child] = a.label
    fail = failure_arcs(decomp, tables.lcp_p, tables.lrs)
    return AcSimGraph(parent, label, fail, tables, decomp)
