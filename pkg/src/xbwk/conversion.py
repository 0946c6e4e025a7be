"""Moving between the block decomposition of a BWT and the XBW of the reversed trie.

The k-th BWT block of ``P`` and the k-th XBW block of the trie of ``←P.S``
describe the same node ``z``: the BWT block lists, per leaf below ``z`` in
leaf order, the label of the child of ``z`` leading there; the XBW block
lists the children of ``z`` once each.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .decomposition import Block, BwtDecomposition, decompose_bwt, dec_pre
from .errors import LengthMismatch, RepresentativeMismatch
from .suffix import BwtIndex, LcpArray, LrsArray, build_tables, index_from_bwt
from .text import OrderedStringSet, reverse_set
from .trie import AcTrie, build_trie, order_children
from .xbw import XbwIndex, build_xbw, xbw_from_arrays


def bwt_to_xbw(bwt, bwd) -> XbwIndex:
    """Keep the first occurrence of each symbol inside every block."""
    bwt = np.ascontiguousarray(bwt, dtype=np.uint8)
    bwd = np.ascontiguousarray(bwd, dtype=np.int64)
    total = int(bwd.sum())
    if total != len(bwt):
        raise LengthMismatch(f"block sizes sum to {total}, BWT has {len(bwt)} symbols")
    if len(bwd) == 0 or np.any(bwd <= 0):
        raise LengthMismatch("block sizes must be positive")
    xbwt, xbwl = _kernels.bwt_to_xbw(bwt, bwd)
    return xbw_from_arrays(xbwt, xbwl)


@dataclass(frozen=True)
class ExpandedBwt:
    """BWT-side tables recovered from an XBW (of the planar order its child lists induce)."""

    index: BwtIndex
    lrs: LrsArray
    lcp_p: LcpArray
    decomposition: BwtDecomposition

    @property
    def bwt(self) -> np.ndarray:
        return self.index.bwt

    @property
    def bwd(self) -> np.ndarray:
        return self.decomposition.bwd


def xbw_to_bwt(x: XbwIndex) -> ExpandedBwt:
    """Repeat every child label by the number of leaves below it, block by block."""
    bwt, lrs, bwd = _kernels.xbw_expand(x.xbwt, x.starts, x.block_depth, x.leaf_counts)
    index = index_from_bwt(bwt)
    lcp = _kernels.capped_lcp_from_bwt(index.bwt, index.lf_table)
    starts = np.concatenate(([0], np.cumsum(bwd))).astype(np.int64)
    return ExpandedBwt(index, LrsArray(lrs), LcpArray(lcp, capped=True),
                       BwtDecomposition(starts))


class BlockPair(NamedTuple):
    bwt_block: Block
    xbw_block: Block
    representative: bytes  # prefix of the reversed strings, read root to node


@dataclass(frozen=True)
class BlockPairing:
    pairs: tuple[BlockPair, ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


def block_bijection(d: BwtDecomposition, x: XbwIndex, tables) -> BlockPairing:
    """Pair blocks by position and check that both sides name the same node.

    ``tables`` are the BWT tables ``d`` was built from; they supply Dec_Pre.
    """
    if len(d) != x.block_count:
        raise RepresentativeMismatch(f"{len(d)} BWT blocks against {x.block_count} XBW blocks")
    bblocks, xblocks = d.blocks(), x.blocks
    pairs = []
    for k in range(len(d)):
        left = dec_pre(d, tables, k)
        right = x.representative(k)[::-1]
        if left != right:
            raise RepresentativeMismatch(f"block {k}: BWT side {left!r}, XBW side {right!r}")
        pairs.append(BlockPair(bblocks[k], xblocks[k], left))
    return BlockPairing(tuple(pairs))


def reversed_trie(P: OrderedStringSet) -> AcTrie:
    """Trie of ``←P.S`` with children ordered according to ``P``."""
    return order_children(build_trie(reverse_set(P).set), P)


class BlockCheck(NamedTuple):
    block: int
    representative: bytes
    bwt_ok: bool  # BWT block equals the child labels towards each leaf, in leaf order
    xbw_ok: bool  # XBWT block equals the node's child labels in child order


@dataclass(frozen=True)
class BlockLabelReport:
    checks: tuple[BlockCheck, ...]
    count_ok: bool

    @property
    def ok(self) -> bool:
        return self.count_ok and all(c.bwt_ok and c.xbw_ok for c in self.checks)

    def failures(self) -> list[BlockCheck]:
        return [c for c in self.checks if not (c.bwt_ok and c.xbw_ok)]


def verify_theorem6(P: OrderedStringSet) -> BlockLabelReport:
    """Build the BWT of ``P`` and the XBW of its reversed trie separately and compare block by block."""
    tables = build_tables(P)
    d = decompose_bwt(tables.lcp_p, tables.lrs)
    t = reversed_trie(P)
    x = build_xbw(t)
    # internal nodes keyed by root-to-node path
    nodes = {t.path(v): v for v in t.internal_nodes()}
    count_ok = len(d) == x.block_count == len(nodes)
    checks = []
    bwt = tables.index.bwt
    xblocks = x.blocks
    for k in range(len(d)):
        rep = dec_pre(d, tables, k)
        z = nodes.get(rep)
        if z is None:
            checks.append(BlockCheck(k, rep, False, False))
            continue
        blk = d.block(k)
        want_b = bytes(t.label[t.child_towards(z, leaf)] for leaf in t.subtree_leaves(z))
        bwt_ok = bwt[blk.start:blk.stop].tobytes() == want_b
        xbw_ok = False
        if k < x.block_count:
            xb = xblocks[k]
            want_x = bytes(t.label[w] for w in t.children[z])
            xbw_ok = x.xbwt[xb.start:xb.stop].tobytes() == want_x
        checks.append(BlockCheck(k, rep, bwt_ok, xbw_ok))
    return BlockLabelReport(tuple(checks), count_ok)
