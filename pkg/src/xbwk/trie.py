"""Explicit Aho-Corasick trie with failure links, leaf/child orders and planarisation.

Node 0 is the root and carries no label.  With terminators enabled the trie
holds ``s$`` for every member ``s``; its leaves are exactly the ``$`` nodes.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import LeafMismatch
from .text import SEP, OrderedStringSet, StringSet, successor_rank

NO_LABEL = -1


@dataclass(frozen=True)
class AcTrie:
    strings: StringSet
    label: tuple[int, ...]
    parent: tuple[int, ...]
    children: tuple[tuple[int, ...], ...]
    depth: tuple[int, ...]
    leaf_string: tuple[int, ...]  # index into ``strings`` at leaves, -1 elsewhere
    leaf_rank: Optional[tuple[int, ...]] = None  # position in the leaf order, -1 off leaves

    def __len__(self) -> int:
        return len(self.label)

    @property
    def root(self) -> int:
        return 0

    def is_leaf(self, v: int) -> bool:
        return not self.children[v]

    def leaves(self) -> list[int]:
        return [v for v in range(len(self)) if not self.children[v]]

    def internal_nodes(self) -> list[int]:
        return [v for v in range(len(self)) if self.children[v]]

    def path(self, v: int) -> bytes:
        """Labels from the root down to ``v``."""
        out = bytearray()
        while v != 0:
            out.append(self.label[v])
            v = self.parent[v]
        return bytes(out[::-1])

    def pi(self, v: int) -> bytes:
        """Labels from the parent of ``v`` up to (excluding) the root."""
        return self.path(self.parent[v])[::-1] if v else b""

    def goto(self, v: int, c: int) -> Optional[int]:
        for w in self.children[v]:
            if self.label[w] == c:
                return w
        return None

    def find(self, s: bytes) -> Optional[int]:
        v = 0
        for c in s:
            v = self.goto(v, c)
            if v is None:
                return None
        return v

    def preorder(self) -> list[int]:
        out, stack = [], [0]
        while stack:
            v = stack.pop()
            out.append(v)
            stack.extend(reversed(self.children[v]))
        return out

    def leaf_order(self) -> list[int]:
        """Leaves sorted by ``leaf_rank``."""
        if self.leaf_rank is None:
            raise ValueError("trie has no leaf order; call order_children first")
        leaves = self.leaves()
        return sorted(leaves, key=self.leaf_rank.__getitem__)

    def subtree_leaves(self, v: int) -> list[int]:
        """Leaves below ``v`` in leaf order."""
        out, stack = [], [v]
        while stack:
            w = stack.pop()
            if self.children[w]:
                stack.extend(self.children[w])
            else:
                out.append(w)
        if self.leaf_rank is not None:
            out.sort(key=self.leaf_rank.__getitem__)
        return out

    def child_towards(self, z: int, leaf: int) -> int:
        """The child of ``z`` on the path to ``leaf``."""
        v = leaf
        while self.parent[v] != z:
            v = self.parent[v]
            if v <= 0:
                raise ValueError(f"leaf {leaf} is not below node {z}")
        return v

    def to_dot(self, failure: Optional[dict[int, int]] = None) -> str:
        def esc(c):
            s = "$" if c == SEP else chr(c)
            return s.replace("\\", "\\\\").replace('"', '\\"')

        lines = ["digraph trie {", "  node [shape=circle];", '  n0 [label="⊥"];']
        for v in range(1, len(self)):
            shape = ", shape=doublecircle" if not self.children[v] else ""
            lines.append(f'  n{v} [label="{v}"{shape}];')
        for v in range(len(self)):
            for w in self.children[v]:
                lines.append(f'  n{v} -> n{w} [label="{esc(self.label[w])}"];')
        for v, f in sorted((failure or {}).items()):
            if v:
                lines.append(f"  n{v} -> n{f} [style=dashed, color=red];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_trie(S: StringSet, terminators: bool = True) -> AcTrie:
    """Trie of ``{s$ : s in S}`` (or of ``S`` itself without terminators).

    Children start out in label order.
    """
    label, parent, depth, leaf_string = [NO_LABEL], [-1], [0], [-1]
    kids: list[dict[int, int]] = [{}]
    for si, s in enumerate(S):
        v = 0
        word = s + bytes([SEP]) if terminators else s
        for c in word:
            w = kids[v].get(c)
            if w is None:
                w = len(label)
                label.append(c)
                parent.append(v)
                depth.append(depth[v] + 1)
                leaf_string.append(-1)
                kids.append({})
                kids[v][c] = w
            v = w
        leaf_string[v] = si
    children = tuple(tuple(d[c] for c in sorted(d)) for d in kids)
    return AcTrie(S, tuple(label), tuple(parent), children, tuple(depth), tuple(leaf_string))


def build_failure_links(t: AcTrie) -> dict[int, int]:
    """Standard breadth-first construction; the root maps to itself."""
    fail = {0: 0}
    queue = deque()
    for w in t.children[0]:
        fail[w] = 0
        queue.append(w)
    while queue:
        v = queue.popleft()
        for w in t.children[v]:
            c = t.label[w]
            f = fail[v]
            while f and t.goto(f, c) is None:
                f = fail[f]
            g = t.goto(f, c)
            fail[w] = g if g is not None and g != w else 0
            queue.append(w)
    return fail


def _min_leaf_sort(t: AcTrie, leaf_rank: list[int]) -> AcTrie:
    n = len(t)
    best = [n] * n
    for v in range(n):
        if leaf_rank[v] >= 0:
            best[v] = leaf_rank[v]
    # children have larger ids than parents, so a reverse sweep is bottom-up
    for v in range(n - 1, 0, -1):
        p = t.parent[v]
        if best[v] < best[p]:
            best[p] = best[v]
    children = tuple(tuple(sorted(ch, key=best.__getitem__)) for ch in t.children)
    return replace(t, children=children, leaf_rank=tuple(leaf_rank))


def order_children(t: AcTrie, P: OrderedStringSet) -> AcTrie:
    """Order leaves by ``<_σ`` on the original strings, then children by their minimal leaf.

    ``t`` must be the trie of the reversed strings of ``P``: the leaf for ``r$``
    stands for ``reverse(r)`` in ``P.S``.
    """
    if len(t.strings) != len(P.set):
        raise LeafMismatch("trie and ordered set have different sizes")
    rank_of = [0] * len(P.set)
    for r, e in enumerate(successor_rank(P)):
        rank_of[e] = r
    leaf_rank = [-1] * len(t)
    for v, si in enumerate(t.leaf_string):
        if si < 0 or t.children[v]:
            continue
        try:
            e = P.set.index(t.strings[si][::-1])
        except KeyError:
            raise LeafMismatch(f"leaf {v} does not match any string of the ordered set") from None
        leaf_rank[v] = rank_of[e]
    return _min_leaf_sort(t, leaf_rank)


def with_child_orders(t: AcTrie, children: list[tuple[int, ...]]) -> AcTrie:
    """Replace child lists and re-derive the (planar) leaf order from them."""
    return planarize(replace(t, children=tuple(tuple(c) for c in children)))[0]


def planarize(t: AcTrie) -> tuple[AcTrie, list[int]]:
    """Depth-first leaf order under the current child lists.

    Every subtree's leaves become contiguous; returns the new trie and its
    leaves in order.
    """
    leaf_rank = [-1] * len(t)
    order = []
    for v in t.preorder():
        if not t.children[v]:
            leaf_rank[v] = len(order)
            order.append(v)
    return replace(t, leaf_rank=tuple(leaf_rank)), order


def is_planar(t: AcTrie) -> bool:
    """Whether every subtree's leaves occupy a contiguous range of the leaf order."""
    if t.leaf_rank is None:
        raise ValueError("trie has no leaf order")
    n = len(t)
    lo = [n] * n
    hi = [-1] * n
    cnt = [0] * n
    for v in range(n):
        if t.leaf_rank[v] >= 0 and not t.children[v]:
            lo[v] = hi[v] = t.leaf_rank[v]
            cnt[v] = 1
    for v in range(n - 1, 0, -1):
        p = t.parent[v]
        lo[p] = min(lo[p], lo[v])
        hi[p] = max(hi[p], hi[v])
        cnt[p] += cnt[v]
    return all(hi[v] - lo[v] + 1 == cnt[v] for v in range(n) if cnt[v])


def leaf_strings_in_order(t: AcTrie) -> list[bytes]:
    """Original strings (un-reversed) of the leaves, in leaf order."""
    return [t.strings[t.leaf_string[v]][::-1] for v in t.leaf_order()]
