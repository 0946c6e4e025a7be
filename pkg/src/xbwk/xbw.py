"""XBW of an ordered trie: labels in π-sorted node order plus last-child bits.

The root is not listed.  Blocks group the children of one internal node, so
block ``b`` ends at the ``b``-th 1-bit and the number of blocks equals the
number of internal nodes.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from . import _kernels
from .decomposition import Block
from .errors import MalformedXbwl, RootHasNoParent
from .suffix import RankSelect
from .trie import AcTrie


def _check_xbwl(xbwl: np.ndarray) -> None:
    if len(xbwl) == 0 or xbwl[-1] != 1:
        raise MalformedXbwl("XBWL must be non-empty and end with a 1-bit")
    if np.any(xbwl > 1):
        raise MalformedXbwl("XBWL holds values other than 0 and 1")


def decompose_xbw(xbwl: np.ndarray) -> tuple[list[Block], np.ndarray]:
    """Blocks ending at 1-bits and their sizes."""
    xbwl = np.asarray(xbwl, dtype=np.uint8)
    _check_xbwl(xbwl)
    ends = np.flatnonzero(xbwl) + 1
    starts = np.concatenate(([0], ends[:-1]))
    return [Block(int(a), int(b)) for a, b in zip(starts, ends)], (ends - starts).astype(np.int64)


@dataclass(frozen=True)
class XbwIndex:
    xbwt: np.ndarray
    xbwl: np.ndarray
    pa_debug: Optional[tuple[int, ...]] = None  # trie node per position, direct builds only

    def __post_init__(self):
        if len(self.xbwt) != len(self.xbwl):
            raise MalformedXbwl(f"XBWT has {len(self.xbwt)} symbols, XBWL {len(self.xbwl)} bits")
        _check_xbwl(self.xbwl)

    def __len__(self) -> int:
        return len(self.xbwt)

    @cached_property
    def occ(self) -> RankSelect:
        return RankSelect(self.xbwt)

    @cached_property
    def bits(self) -> RankSelect:
        return RankSelect(self.xbwl)

    @cached_property
    def starts(self) -> np.ndarray:
        ends = np.flatnonzero(self.xbwl) + 1
        return np.concatenate(([0], ends)).astype(np.int64)

    @property
    def blocks(self) -> list[Block]:
        s = self.starts.tolist()
        return [Block(a, b) for a, b in zip(s, s[1:])]

    @property
    def xbwd(self) -> np.ndarray:
        return np.diff(self.starts)

    @property
    def block_count(self) -> int:
        return len(self.starts) - 1

    @cached_property
    def block_of(self) -> np.ndarray:
        return np.repeat(np.arange(self.block_count, dtype=np.int64), self.xbwd)

    @cached_property
    def _nav(self):
        child, start = _kernels.xbw_child_blocks(self.xbwt)
        return child, start

    @property
    def block_start(self) -> np.ndarray:
        """Per symbol, the (0-based) number of the first block whose parent carries it."""
        return self._nav[1]

    @property
    def child_block(self) -> np.ndarray:
        return self._nav[0]

    @cached_property
    def _tree(self):
        depth, parent, leaves, reached = _kernels.xbw_tree_pass(self.starts, self.child_block)
        if reached != self.block_count:
            raise MalformedXbwl(f"only {reached} of {self.block_count} blocks reachable from the root")
        return depth, parent, leaves

    @property
    def block_depth(self) -> np.ndarray:
        return self._tree[0]

    @property
    def parent_position(self) -> np.ndarray:
        """Position whose node owns each block; -1 for the root block."""
        return self._tree[1]

    @property
    def leaf_counts(self) -> np.ndarray:
        return self._tree[2]

    def representative(self, block: int) -> bytes:
        """π shared by the nodes of a block (labels from their parent to the root)."""
        out = bytearray()
        pos = int(self.parent_position[block])
        while pos >= 0:
            out.append(int(self.xbwt[pos]))
            pos = int(self.parent_position[self.block_of[pos]])
        return bytes(out)

    def xbwt_bytes(self) -> bytes:
        return self.xbwt.tobytes()

    def xbwl_string(self) -> str:
        return "".join("1" if b else "0" for b in self.xbwl.tolist())


def xbw_from_arrays(xbwt, xbwl) -> XbwIndex:
    """``xbwt`` may be bytes or an array; ``xbwl`` any 0/1 sequence."""
    if isinstance(xbwt, (bytes, bytearray)):
        xbwt = np.frombuffer(bytes(xbwt), dtype=np.uint8)
    return XbwIndex(np.ascontiguousarray(xbwt, dtype=np.uint8), np.ascontiguousarray(xbwl, dtype=np.uint8))


def build_xbw(t: AcTrie) -> XbwIndex:
    """Sort non-root nodes by (π, position among siblings) and read labels and last-child bits."""
    slot = [0] * len(t)
    last = [False] * len(t)
    for v in range(len(t)):
        ch = t.children[v]
        for k, w in enumerate(ch):
            slot[w] = k
        if ch:
            last[ch[-1]] = True
    # equal π implies equal parent, so sibling position settles ties
    pa = sorted(range(1, len(t)), key=lambda v: (t.pi(v), slot[v]))
    xbwt = np.fromiter((t.label[v] for v in pa), dtype=np.uint8, count=len(pa))
    xbwl = np.fromiter((1 if last[v] else 0 for v in pa), dtype=np.uint8, count=len(pa))
    return XbwIndex(xbwt, xbwl, tuple(pa))


def xbw_children(x: XbwIndex, i: int) -> Optional[Block]:
    """Block holding the children of the node at position ``i``; ``None`` under ``$``."""
    if not 0 <= i < len(x):
        raise IndexError(f"position {i} outside the XBW")
    c = int(x.xbwt[i])
    if c == 0:
        return None
    b = int(x.block_start[c]) + x.occ.rank(c, i + 1) - 1
    # block b spans past the b-th 1-bit up to the (b+1)-th
    lo = 0 if b == 0 else x.bits.select(1, b) + 1
    hi = x.bits.select(1, b + 1) + 1
    return Block(lo, hi)


def xbw_parent(x: XbwIndex, block: int) -> int:
    """Position of the node whose children form ``block`` (0-based block number)."""
    if block == 0:
        raise RootHasNoParent("block 0 holds the root's children")
    if not 0 < block < x.block_count:
        raise IndexError(f"block {block} outside [1, {x.block_count})")
    syms = [int(c) for c in x.occ.symbols if c != 0]
    firsts = [int(x.block_start[c]) for c in syms]
    k = bisect.bisect_right(firsts, block) - 1
    c = syms[k]
    return x.occ.select(c, block - firsts[k] + 1)


def build_leaf_counts(x: XbwIndex) -> np.ndarray:
    """Leaves below each position's node; children are settled before parents."""
    return x.leaf_counts
