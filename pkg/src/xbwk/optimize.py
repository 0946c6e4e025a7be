"""Run-length measures, the per-block permutation problem, and concatenation-order optimisation.

The BWT of an ordered set, cut into blocks, lists per block the child labels
of one trie node, repeated by leaf count.  Only the first and last child of
every node affect the number of symbol changes, so choosing child orders is
a table problem: permute symbols inside fixed blocks to maximise equal
neighbours across block joints.  The tree order found this way must then be
turned back into a single-cycle concatenation order, which is not always
possible at the same cost.
"""
from __future__ import annotations

import itertools
import logging
import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .decomposition import Block
from .errors import HypothesisViolated
from .suffix import build_tables
from .text import CircularOrder, OrderedStringSet, StringSet, reverse_set
from .trie import AcTrie, build_trie, order_children, planarize, with_child_orders
from .xbw import build_xbw

log = logging.getLogger(__name__)

EXHAUSTIVE_LIMIT = 8


# ------------------------------------------------------------------ measures


@dataclass(frozen=True)
class RlMeasure:
    changes: int
    length: int

    @property
    def rle_size(self) -> int:
        return self.changes + 1


def _symbols(s) -> np.ndarray:
    if isinstance(s, np.ndarray):
        return s
    if isinstance(s, str):
        return np.array([0 if ch == "$" else ord(ch) for ch in s], dtype=np.int64)
    if isinstance(s, (bytes, bytearray, memoryview)):
        return np.frombuffer(bytes(s), dtype=np.uint8)
    return np.asarray(list(s), dtype=np.int64)


def rl_measures(s) -> RlMeasure:
    """Adjacent unequal pairs of ``s``; a ``str`` reads ``$`` as the separator."""
    a = _symbols(s)
    if len(a) == 0:
        raise ValueError("run-length measure of an empty sequence")
    return RlMeasure(int(np.count_nonzero(a[1:] != a[:-1])), len(a))


def bwt_measure(P: OrderedStringSet) -> RlMeasure:
    """d_B: changes in the BWT of ``P``."""
    return rl_measures(build_tables(P).index.bwt)


def xbwt_measure(P: OrderedStringSet) -> RlMeasure:
    """d_X: changes in the XBWT of the trie of ``P.S`` ordered through ``P``."""
    t = order_children(build_trie(P.set), reverse_set(P))
    return rl_measures(build_xbw(t).xbwt)


# ------------------------------------------------------------- table problem


def word(symbols: Iterable[int]) -> bytes:
    """Sorted distinct symbols."""
    return bytes(sorted(set(symbols)))


@dataclass(frozen=True)
class TableInstance:
    t: tuple[int, ...]
    sizes: tuple[int, ...]

    def __post_init__(self):
        if any(k <= 0 for k in self.sizes) or sum(self.sizes) != len(self.t):
            raise ValueError(f"block sizes {self.sizes} do not partition {len(self.t)} symbols")
        for k in range(len(self.sizes)):
            b = self.block(k)
            if len(set(b)) != len(b):
                raise ValueError(f"block {k} repeats a symbol: {b}")

    @classmethod
    def from_blocks(cls, blocks: Iterable[Sequence[int]]) -> "TableInstance":
        blocks = [tuple(_symbols(b).tolist()) for b in blocks]
        return cls(tuple(itertools.chain.from_iterable(blocks)), tuple(len(b) for b in blocks))

    @classmethod
    def parse(cls, text: str, sep: str = "|") -> "TableInstance":
        """``"ab|ac"`` style; ``$`` reads as the separator symbol."""
        return cls.from_blocks(text.split(sep))

    @cached_property
    def starts(self) -> tuple[int, ...]:
        return tuple(itertools.accumulate(self.sizes, initial=0))

    @property
    def block_count(self) -> int:
        return len(self.sizes)

    def block(self, k: int) -> tuple[int, ...]:
        return self.t[self.starts[k]:self.starts[k + 1]]

    def blocks(self) -> list[Block]:
        s = self.starts
        return [Block(a, b) for a, b in zip(s, s[1:])]

    @property
    def lower_bound(self) -> int:
        """No arrangement has fewer than |T| - #D changes."""
        return len(self.t) - len(self.sizes)


def boundary_sets(inst: TableInstance) -> list[frozenset]:
    return [frozenset(inst.block(k)) & frozenset(inst.block(k + 1))
            for k in range(inst.block_count - 1)]


@dataclass(frozen=True)
class TableSolution:
    t_prime: tuple[int, ...]
    sizes: tuple[int, ...]
    achieved: RlMeasure
    lower_bound: int
    cuts: int = 0

    def block(self, k: int) -> tuple[int, ...]:
        start = sum(self.sizes[:k])
        return self.t_prime[start:start + self.sizes[k]]

    def blocks(self) -> list[tuple[int, ...]]:
        out, p = [], 0
        for n in self.sizes:
            out.append(self.t_prime[p:p + n])
            p += n
        return out


@dataclass
class TableSplit:
    """Pinned block ends and the status of every joint after splitting.

    A joint is ``"cut"`` (no shared symbol left: a change is unavoidable),
    ``"equal"`` (exactly one shared symbol, pinned on both sides) or
    ``"free"`` (two or more candidates, left to the greedy pass).
    """

    inst: TableInstance
    first: list[Optional[int]]
    last: list[Optional[int]]
    joints: list[str]

    def avail_first(self, k: int) -> set:
        if self.first[k] is not None:
            return {self.first[k]}
        s = set(self.inst.block(k))
        if self.last[k] is not None and len(s) > 1:
            s.discard(self.last[k])
        return s

    def avail_last(self, k: int) -> set:
        if self.last[k] is not None:
            return {self.last[k]}
        s = set(self.inst.block(k))
        if self.first[k] is not None and len(s) > 1:
            s.discard(self.first[k])
        return s

    def joint_set(self, j: int) -> set:
        return self.avail_last(j) & self.avail_first(j + 1)

    @property
    def segments(self) -> list[range]:
        """Maximal block runs joined by free joints."""
        out, lo = [], 0
        for j, kind in enumerate(self.joints):
            if kind != "free":
                out.append(range(lo, j + 1))
                lo = j + 1
        out.append(range(lo, self.inst.block_count))
        return out

    def forced(self) -> list[tuple[int, int]]:
        """(joint, symbol) for every equality joint."""
        return [(j, self.last[j]) for j, kind in enumerate(self.joints) if kind == "equal"]

    def remaining(self, k: int) -> tuple[int, ...]:
        pinned = {self.first[k], self.last[k]}
        return tuple(c for c in self.inst.block(k) if c not in pinned)


def split_instance(inst: TableInstance) -> TableSplit:
    """Settle every joint with at most one shared candidate; pins propagate to neighbours."""
    nb = inst.block_count
    sp = TableSplit(inst, [None] * nb, [None] * nb, ["free"] * max(nb - 1, 0))
    decided = [False] * max(nb - 1, 0)
    queue = deque(range(nb - 1))
    while queue:
        j = queue.popleft()
        if decided[j]:
            continue
        b = sp.joint_set(j)
        if len(b) >= 2:
            continue
        decided[j] = True
        if not b:
            sp.joints[j] = "cut"
            continue
        (a,) = b
        sp.joints[j] = "equal"
        sp.last[j] = a
        sp.first[j + 1] = a
        if len(inst.block(j)) == 1:
            sp.first[j] = a
        if len(inst.block(j + 1)) == 1:
            sp.last[j + 1] = a
        # pinning shrinks the other end of both blocks
        for k in (j - 1, j + 1):
            if 0 <= k < nb - 1 and not decided[k]:
                queue.append(k)
    return sp


def _greedy_run(sp: TableSplit, seg: range) -> None:
    """Chain shared symbols across the free joints of one segment, smallest first."""
    for j in list(seg)[:-1]:
        cand = sp.joint_set(j)
        if sp.first[j] is not None and len(sp.inst.block(j)) > 1:
            cand.discard(sp.first[j])
        if not cand:
            raise HypothesisViolated(f"joint {j} has no candidate left")
        a = min(cand)
        sp.last[j] = a
        sp.first[j + 1] = a


def _arrange(block: tuple[int, ...], first: Optional[int], last: Optional[int]) -> tuple[int, ...]:
    if len(block) == 1:
        return block
    syms = set(block)
    if first is None:
        first = min(syms - {last})
    if last is None:
        last = min(syms - {first})
    middle = sorted(syms - {first, last})
    return (first, *middle, last)


def _solution(sp: TableSplit) -> TableSolution:
    inst = sp.inst
    out = []
    for k in range(inst.block_count):
        out.extend(_arrange(inst.block(k), sp.first[k], sp.last[k]))
    tp = tuple(out)
    return TableSolution(tp, inst.sizes, rl_measures(tp), inst.lower_bound,
                         sum(1 for kind in sp.joints if kind == "cut"))


def greedy_segment(inst: TableInstance) -> TableSolution:
    """The greedy chain on an instance where every joint offers two or more shared symbols."""
    for j, b in enumerate(boundary_sets(inst)):
        if len(b) < 2:
            raise HypothesisViolated(f"joint {j} shares {len(b)} symbol(s); at least 2 required")
    nb = inst.block_count
    sp = TableSplit(inst, [None] * nb, [None] * nb, ["free"] * max(nb - 1, 0))
    _greedy_run(sp, range(nb))
    return _solution(sp)


def solve_table(inst: TableInstance) -> TableSolution:
    sp = split_instance(inst)
    for seg in sp.segments:
        _greedy_run(sp, seg)
    return _solution(sp)


# --------------------------------------------------------- tree and leaf orders


def block_nodes(t: AcTrie) -> list[int]:
    """Internal nodes in XBW block order."""
    x = build_xbw(t)
    return [t.parent[x.pa_debug[int(s)]] for s in x.starts[:-1]]


def table_of(t: AcTrie, nodes: Optional[list[int]] = None) -> TableInstance:
    """Child labels of every internal node, one block per node, in block order."""
    nodes = block_nodes(t) if nodes is None else nodes
    return TableInstance.from_blocks([[t.label[w] for w in t.children[z]] for z in nodes])


def apply_child_orders(t: AcTrie, sol: TableSolution, nodes: Optional[list[int]] = None) -> AcTrie:
    """Permute every node's children to the symbol order of its block; leaves follow by DFS."""
    nodes = block_nodes(t) if nodes is None else nodes
    if len(nodes) != len(sol.sizes):
        raise ValueError(f"solution has {len(sol.sizes)} blocks, trie has {len(nodes)} internal nodes")
    children = [list(c) for c in t.children]
    for z, blk in zip(nodes, sol.blocks()):
        by_label = {t.label[w]: w for w in t.children[z]}
        if set(by_label) != set(blk):
            raise ValueError(f"block for node {z} holds {word(blk)!r}, children carry {word(by_label)!r}")
        children[z] = [by_label[c] for c in blk]
    return with_child_orders(t, children)


class _LeafModel:
    """Measures of a leaf order of the trie of reversed strings, without building an index.

    ``strings`` is the lex-sorted set whose BWT is being optimised; leaf order
    ``L`` means string ``L[i]`` is followed by the ``i``-th smallest string.
    """

    def __init__(self, strings: StringSet):
        self.strings = strings
        self.trie = build_trie(StringSet(tuple(sorted(s[::-1] for s in strings))))
        t = self.trie
        self.nodes = block_nodes(t)
        self.block_of = {z: k for k, z in enumerate(self.nodes)}
        self.n = len(strings)
        self.leaf = [0] * self.n
        for v, si in enumerate(t.leaf_string):
            if si >= 0 and not t.children[v]:
                self.leaf[strings.index(t.strings[si][::-1])] = v
        self.string_of_leaf = {v: e for e, v in enumerate(self.leaf)}
        # root-to-leaf chain of (block, label of the child taken) per string
        self.chain = []
        for e in range(self.n):
            steps, v = [], self.leaf[e]
            while v != 0:
                p = t.parent[v]
                steps.append((self.block_of[p], t.label[v], p))
                v = p
            self.chain.append(steps[::-1])
        self.sizes = np.zeros(len(self.nodes), dtype=np.int64)
        for steps in self.chain:
            for b, _, _ in steps:
                self.sizes[b] += 1
        self.offsets = np.concatenate(([0], np.cumsum(self.sizes)))

    def expansion(self, L: Sequence[int]) -> tuple[np.ndarray, list[dict]]:
        """BWT symbols for leaf order ``L`` and, per string, block -> global position."""
        g = np.empty(int(self.offsets[-1]), dtype=np.uint8)
        fill = self.offsets[:-1].copy()
        pos = [dict() for _ in range(self.n)]
        for e in L:
            for b, c, _ in self.chain[e]:
                g[fill[b]] = c
                pos[e][b] = int(fill[b])
                fill[b] += 1
        return g, pos

    def bwt_changes(self, L: Sequence[int]) -> int:
        g, _ = self.expansion(L)
        return int(np.count_nonzero(g[1:] != g[:-1]))

    def xbwt_changes(self, L: Sequence[int]) -> int:
        t = self.trie
        rank = {self.leaf[e]: i for i, e in enumerate(L)}
        best = [len(t)] * len(t)
        for v, r in rank.items():
            best[v] = r
        for v in range(len(t) - 1, 0, -1):
            p = t.parent[v]
            best[p] = min(best[p], best[v])
        seq = []
        for z in self.nodes:
            seq.extend(t.label[w] for w in sorted(t.children[z], key=best.__getitem__))
        a = np.asarray(seq, dtype=np.int64)
        return int(np.count_nonzero(a[1:] != a[:-1]))

    def changes(self, L: Sequence[int], target: str) -> int:
        return self.bwt_changes(L) if target == "bwt" else self.xbwt_changes(L)

    def leaf_sequence(self, t: AcTrie) -> list[int]:
        """String indices along the DFS leaf order of ``t`` (same node ids as ``self.trie``)."""
        _, order = planarize(t)
        return [self.string_of_leaf[v] for v in order]

    @staticmethod
    def successor(L: Sequence[int]) -> list[int]:
        succ = [0] * len(L)
        for i, e in enumerate(L):
            succ[e] = i
        return succ

    def leaves_for(self, succ: Sequence[int]) -> list[int]:
        """Inverse of ``successor``."""
        L = [0] * len(succ)
        for e, s in enumerate(succ):
            L[s] = e
        return L


def _cycle_ids(succ: Sequence[int]) -> list[int]:
    cid = [-1] * len(succ)
    k = 0
    for s in range(len(succ)):
        if cid[s] >= 0:
            continue
        v = s
        while cid[v] < 0:
            cid[v] = k
            v = succ[v]
        k += 1
    return cid


def _cycle_count(succ: Sequence[int]) -> int:
    return max(_cycle_ids(succ)) + 1


def _planar_changes(t: AcTrie, nodes: list[int], children: list[list[int]]) -> int:
    total = 0
    prev = None
    for z in nodes:
        ch = children[z]
        total += len(ch) - 1
        if prev is not None and prev != t.label[ch[0]]:
            total += 1
        prev = t.label[ch[-1]]
    return total


@dataclass(frozen=True)
class RepairResult:
    leaves: tuple[int, ...]  # string indices, L[i] is followed by the i-th smallest string
    order: CircularOrder
    penalty: int
    samples: int  # optimal child orders drawn before merging
    merges: int


def _end_options(t: AcTrie, nodes: list[int]):
    """Per block, the admissible (first, last) children and the least boundary cost to go."""
    opts = []
    for z in nodes:
        ch = t.children[z]
        opts.append([(ch[0], ch[0])] if len(ch) == 1 else list(itertools.permutations(ch, 2)))
    nb = len(nodes)
    togo = [dict() for _ in range(nb + 1)]
    for k in range(nb - 1, -1, -1):
        prev = {t.label[w] for w in t.children[nodes[k - 1]]} if k else {None}
        for x in prev:
            togo[k][x] = min(_step(t, x, f) + togo[k + 1].get(t.label[l], 0)
                             for f, l in opts[k])
    return opts, togo


def _step(t: AcTrie, x: Optional[int], f: int) -> int:
    return int(x is not None and x != t.label[f])


def _sample_children(t: AcTrie, nodes: list[int], opts, togo, rng: random.Random) -> list[list[int]]:
    """Child lists drawn at random among those of least planar cost."""
    children = [list(c) for c in t.children]
    x = None
    for k, z in enumerate(nodes):
        good = [(f, l) for f, l in opts[k]
                if _step(t, x, f) + togo[k + 1].get(t.label[l], 0) == togo[k][x]]
        f, l = rng.choice(good)
        if f == l:
            children[z] = [f]
        else:
            mid = [w for w in children[z] if w != f and w != l]
            rng.shuffle(mid)
            children[z] = [f, *mid, l]
        x = t.label[l]
    return children


def _merge_bwt(model: _LeafModel, L: list[int]) -> tuple[list[int], int, int]:
    """Adjacent leaf swaps joining two cycles, cheapest change in BWT symbols first."""
    g, pos = model.expansion(L)
    penalty = merges = 0

    def local(i):
        lo, hi = max(i - 1, 0), min(i + 3, len(g))
        w = g[lo:hi]
        return int(np.count_nonzero(w[1:] != w[:-1]))

    while True:
        succ = model.successor(L)
        cid = _cycle_ids(succ)
        if max(cid) == 0:
            return L, penalty, merges
        best = None
        for i in range(len(L) - 1):
            u, v = L[i], L[i + 1]
            if cid[u] == cid[v]:
                continue
            b = _lca_block(model, u, v)
            gu = pos[u][b]
            before = local(gu)
            g[gu], g[gu + 1] = g[gu + 1], g[gu]
            delta = local(gu) - before
            g[gu], g[gu + 1] = g[gu + 1], g[gu]
            if best is None or delta < best[0]:
                best = (delta, i)
        delta, i = best
        u, v = L[i], L[i + 1]
        for b, _, _ in _common_chain(model, u, v):
            pos[u][b], pos[v][b] = pos[v][b], pos[u][b]
        b = _lca_block(model, u, v)
        gu = pos[v][b]  # after the exchange v sits first
        g[gu], g[gu + 1] = g[gu + 1], g[gu]
        L[i], L[i + 1] = v, u
        penalty += delta
        merges += 1


def _common_chain(model: _LeafModel, u: int, v: int):
    out = []
    for a, b in zip(model.chain[u], model.chain[v]):
        if a[2] != b[2]:
            break
        out.append(a)
    return out


def _lca_block(model: _LeafModel, u: int, v: int) -> int:
    """Block of the deepest node on both root-to-leaf paths."""
    b = None
    for a, c in zip(model.chain[u], model.chain[v]):
        if a[2] != c[2]:
            break
        b = a[0]
        if a[1] != c[1]:
            break
    return b


def _merge_generic(model: _LeafModel, L: list[int], target: str) -> tuple[list[int], int, int]:
    penalty = merges = 0
    cur = model.changes(L, target)
    while True:
        cid = _cycle_ids(model.successor(L))
        if max(cid) == 0:
            return L, penalty, merges
        best = None
        for i in range(len(L) - 1):
            if cid[L[i]] == cid[L[i + 1]]:
                continue
            trial = list(L)
            trial[i], trial[i + 1] = trial[i + 1], trial[i]
            d = model.changes(trial, target)
            if best is None or d < best[0]:
                best = (d, trial)
        d, L = best
        penalty += d - cur
        cur = d
        merges += 1


def cycle_repair(t: AcTrie, target: str = "bwt", samples: int = 200, seed: int = 0,
                 model: Optional[_LeafModel] = None) -> RepairResult:
    """Turn the DFS leaf order of ``t`` into a single-cycle successor map.

    ``t`` is the trie of the reversed strings, as built by ``build_trie``,
    with child orders chosen; the successor map indexes the un-reversed set.

    ``t`` carries child orders of least planar cost.  Other child orders of
    the same cost are drawn at random until one yields a single cycle; if
    none does, the drawn order with fewest cycles is kept and its cycles are
    joined by exchanging neighbouring leaves, cheapest measured increase first.
    """
    if model is None:
        model = _LeafModel(StringSet(tuple(sorted(s[::-1] for s in t.strings))))
    rng = random.Random(seed)
    L = model.leaf_sequence(t)
    cycles = _cycle_count(model.successor(L))
    drawn = 0
    if cycles > 1 and samples:
        opts, togo = _end_options(model.trie, model.nodes)
        for drawn in range(1, samples + 1):
            ch = _sample_children(model.trie, model.nodes, opts, togo, rng)
            cand = model.leaf_sequence(with_child_orders(model.trie, ch))
            c = _cycle_count(model.successor(cand))
            if c < cycles:
                L, cycles = cand, c
                if c == 1:
                    break
    start = model.changes(L, target)
    if target == "bwt":
        L, penalty, merges = _merge_bwt(model, L)
    else:
        L, penalty, merges = _merge_generic(model, L, target)
    assert model.changes(L, target) == start + penalty
    return RepairResult(tuple(L), CircularOrder(tuple(model.successor(L))), penalty, drawn, merges)


# ----------------------------------------------------------------- pipeline


@dataclass(frozen=True)
class OptimizeResult:
    ordered: OrderedStringSet
    target: str
    achieved: int
    lower_bound: int  # optimum of the table problem, a bound for every order
    realizable: bool  # whether some concatenation order meets the bound
    certificate: int  # measure recomputed from the emitted order through the full pipeline
    penalty: int  # increase paid by the cycle repair
    source: str  # "table" or "exhaustive"
    table: TableSolution = field(repr=False)

    @property
    def order(self) -> list[bytes]:
        return self.ordered.strings_in_order()

    def footer(self) -> dict:
        return {
            "target": self.target,
            "achieved": self.achieved,
            "rle_size": self.achieved + 1,
            "lower_bound": self.lower_bound,
            "realizable": self.realizable,
            "certificate": self.certificate,
            "penalty": self.penalty,
            "source": self.source,
        }


def _circular_orders(n: int):
    """Successor maps of all (n-1)! cycles, starting from 0."""
    for rest in itertools.permutations(range(1, n)):
        seq = (0, *rest)
        succ = [0] * n
        for k in range(n):
            succ[seq[k]] = seq[(k + 1) % n]
        yield succ


def optimize_order(S: StringSet, target: str = "bwt",
                   exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> OptimizeResult:
    """Concatenation order of ``S`` with few changes in its BWT (or XBWT)."""
    if target not in ("bwt", "xbwt"):
        raise ValueError(f"unknown target {target!r}")
    # the XBWT of S behaves like the BWT of the reversed set
    side = S if target == "bwt" else StringSet(tuple(sorted(s[::-1] for s in S)))
    model = _LeafModel(side)
    inst = table_of(model.trie, model.nodes)
    sol = solve_table(inst)
    t = apply_child_orders(model.trie, sol, model.nodes)
    rep = cycle_repair(t, target, model=model)
    succ = list(rep.order.successor)
    achieved = model.changes(rep.leaves, target)
    source = "table"
    if len(S) <= exhaustive_limit:
        for cand in _circular_orders(len(S)):
            d = model.changes(model.leaves_for(cand), target)
            if d < achieved:
                achieved, succ, source = d, cand, "exhaustive"
    P_side = OrderedStringSet(side, CircularOrder(tuple(succ)))
    P = P_side if target == "bwt" else reverse_set(P_side)
    cert = (bwt_measure(P) if target == "bwt" else xbwt_measure(P)).changes
    if cert != achieved:
        raise RuntimeError(f"measure model says {achieved}, rebuilt tables say {cert}")
    bound = sol.achieved.changes
    log.debug("optimize %s: table %d, repaired %d (+%d), emitted %d via %s",
              target, bound, bound + rep.penalty, rep.penalty, achieved, source)
    return OptimizeResult(P, target, achieved, bound, achieved == bound, cert,
                          rep.penalty, source, sol)
