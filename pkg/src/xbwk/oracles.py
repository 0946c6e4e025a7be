"""Brute-force references for the property suites.

Everything here follows the definitions literally (comparison sorts, string
slicing, full enumeration) and only touches the shared domain types, so a
main-path bug cannot be confirmed by the code it lives in.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass
from typing import Any, Optional, Sequence

from .errors import InstanceTooLarge
from .text import SEP, CircularOrder, OrderedStringSet, StringSet

ENUMERATION_LIMIT = 10**6


def naive_concat(P: OrderedStringSet) -> bytes:
    """Follow the successor map from string 0, joining with ``$``."""
    out, i = [], 0
    for _ in range(len(P.set)):
        out.append(P.set.strings[i] + b"\x00")
        i = P.successor[i]
    return b"".join(out)


@dataclass(frozen=True)
class NaiveIndex:
    text: bytes
    sa: list[int]  # 0-based offsets
    bwt: bytes
    lcp: list[int]
    lrs: list[int]
    lcp_p: list[int]


def _common_prefix(a: bytes, b: bytes) -> int:
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


def naive_index(m) -> NaiveIndex:
    """Sort suffixes by comparison and read every table off the sorted list.

    ``m`` is raw bytes or anything with a ``text`` attribute.
    """
    text = m if isinstance(m, (bytes, bytearray)) else m.text
    text = bytes(text)
    n = len(text)
    sa = sorted(range(n), key=lambda i: text[i:])
    bwt = bytes(text[i - 1] for i in sa)  # i = 0 wraps around to the last symbol
    lcp = [0] + [_common_prefix(text[sa[r - 1]:], text[sa[r]:]) for r in range(1, n)]
    lrs = [text.index(SEP, i) - i for i in sa]
    return NaiveIndex(text, sa, bwt, lcp, lrs, [min(a, b) for a, b in zip(lcp, lrs)])


def naive_rotation_lcp(text: bytes) -> tuple[list[int], list[int]]:
    """Rotations sorted by comparison, and the LCP of each with its predecessor."""
    n = len(text)
    rot = [text[i:] + text[:i] for i in range(n)]
    order = sorted(range(n), key=rot.__getitem__)
    return order, [0] + [_common_prefix(rot[order[r - 1]], rot[order[r]]) for r in range(1, n)]


def naive_changes(seq: Sequence[int]) -> int:
    return sum(1 for a, b in zip(seq, seq[1:]) if a != b)


@dataclass(frozen=True)
class NaiveAc:
    """Trie over ``Prefix(S)`` (no terminators) with failure links, nodes named by their prefix."""

    nodes: frozenset
    arcs: frozenset  # (parent, child, label)
    failure: dict


def naive_ac(strings) -> NaiveAc:
    prefixes = {s[:k] for s in strings for k in range(len(s) + 1)}
    arcs = frozenset((p[:-1], p, p[-1]) for p in prefixes if p)
    failure = {}
    for p in prefixes:
        if not p:
            continue
        # proper suffixes, longest first
        for k in range(1, len(p) + 1):
            if p[k:] in prefixes:
                failure[p] = p[k:]
                break
    return NaiveAc(frozenset(prefixes), arcs, failure)


def naive_leaf_ranks(P: OrderedStringSet) -> dict[bytes, int]:
    """Rank of each reversed string's leaf: the lex position of the successor of its original."""
    S = P.set.strings
    ranks = {}
    for i, s in enumerate(S):
        succ = S[P.successor[i]]
        ranks[s[::-1]] = sorted(S).index(succ)
    return ranks


def naive_xbw(strings, leaf_rank: Optional[dict[bytes, int]] = None) -> tuple[bytes, list[int]]:
    """XBWT and XBWL of the trie of ``{s$}``, nodes named by their root-to-node path.

    Children are ordered by the smallest leaf rank below them; the default
    ranks are the byte order of ``s$``, which reproduces label order.
    """
    words = [s + b"\x00" for s in strings]
    if leaf_rank is None:
        leaf_rank = {s: r for r, s in enumerate(sorted(strings, key=lambda s: s + b"\x00"))}
    nodes = {w[:k] for w in words for k in range(1, len(w) + 1)}

    def min_leaf(path: bytes) -> int:
        return min(leaf_rank[w[:-1]] for w in words if w.startswith(path))

    def sibling_key(path: bytes) -> int:
        sibs = sorted((q for q in nodes if q[:-1] == path[:-1]), key=min_leaf)
        return sibs.index(path)

    def pi(path: bytes) -> bytes:
        return path[:-1][::-1]

    order = sorted(nodes, key=lambda p: (pi(p), sibling_key(p)))
    xbwt = bytes(p[-1] for p in order)
    xbwl = []
    for p in order:
        sibs = sorted((q for q in nodes if q[:-1] == p[:-1]), key=min_leaf)
        xbwl.append(1 if sibs[-1] == p else 0)
    return xbwt, xbwl


def naive_xbw_of_order(P: OrderedStringSet) -> tuple[bytes, list[int]]:
    """XBW of the trie of the reversed strings, children ordered through ``P``."""
    rev = [s[::-1] for s in P.set.strings]
    return naive_xbw(rev, naive_leaf_ranks(P))


def _all_cycles(n: int):
    for rest in itertools.permutations(range(1, n)):
        seq = (0, *rest)
        succ = [0] * n
        for k in range(n):
            succ[seq[k]] = seq[(k + 1) % n]
        yield seq, succ


@dataclass(frozen=True)
class ExhaustiveResult:
    optimum: int
    witness: Any  # block arrangement (table) or concatenation sequence of strings (order)
    evaluated: int


def _order_measure(S: StringSet, succ: list[int], target: str) -> int:
    P = OrderedStringSet(S, CircularOrder(tuple(succ)))
    if target == "bwt":
        return naive_changes(naive_index(naive_concat(P)).bwt)
    # the XBWT of S ordered by P is the XBW of the trie of S with leaves ranked through ←P
    rev = [s[::-1] for s in S.strings]
    ranks = {}
    for i, s in enumerate(S.strings):
        ranks[s] = sorted(rev).index(S.strings[succ[i]][::-1])
    xbwt, _ = naive_xbw(S.strings, ranks)
    return naive_changes(xbwt)


def exhaustive_search(problem: str, instance, target: str = "bwt") -> ExhaustiveResult:
    """Minimum over every arrangement.

    ``problem="table"`` takes a list of blocks (symbol sequences);
    ``problem="order"`` takes a ``StringSet`` and minimises d_B (or d_X with
    ``target="xbwt"``) over all circular orders.
    """
    if problem == "table":
        blocks = [tuple(b) for b in instance]
        size = math.prod(math.factorial(len(b)) for b in blocks)
        if size > ENUMERATION_LIMIT:
            raise InstanceTooLarge(f"{size} arrangements exceed {ENUMERATION_LIMIT}")
        best = None
        for combo in itertools.product(*(itertools.permutations(b) for b in blocks)):
            flat = [c for b in combo for c in b]
            d = naive_changes(flat)
            if best is None or d < best[0]:
                best = (d, combo)
        return ExhaustiveResult(best[0], best[1], size)
    if problem == "order":
        S = instance
        n = len(S.strings)
        size = math.factorial(n - 1)
        if size > ENUMERATION_LIMIT:
            raise InstanceTooLarge(f"{size} orders exceed {ENUMERATION_LIMIT}")
        best = None
        for seq, succ in _all_cycles(n):
            d = _order_measure(S, succ, target)
            if best is None or d < best[0]:
                best = (d, [S.strings[i] for i in seq])
        return ExhaustiveResult(best[0], best[1], size)
    raise ValueError(f"unknown problem {problem!r}")


@dataclass(frozen=True)
class OracleReport:
    case: dict
    expected: Any
    actual: Any
    passed: bool

    def to_json(self) -> str:
        def enc(o):
            if isinstance(o, (bytes, bytearray)):
                return o.decode("latin-1")
            raise TypeError(type(o).__name__)

        return json.dumps(asdict(self), default=enc, sort_keys=True)
