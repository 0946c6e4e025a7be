import numpy as np
import pytest

from conftest import ordered
from xbwk.checks import CaseSpec, case_rng, random_case
from xbwk.conversion import reversed_trie
from xbwk.decomposition import Block
from xbwk.errors import MalformedXbwl, RootHasNoParent
from xbwk.oracles import naive_xbw, naive_xbw_of_order
from xbwk.text import StringSet
from xbwk.trie import build_trie
from xbwk.xbw import (
    build_leaf_counts, build_xbw, decompose_xbw, xbw_children, xbw_from_arrays, xbw_parent,
)


@pytest.fixture
def micro_xbw(micro):
    return build_xbw(reversed_trie(micro))


def test_micro_xbw(micro, micro_xbw):
    x = micro_xbw
    t = reversed_trie(micro)
    assert [t.path(v) for v in x.pa_debug] == [b"b", b"ba\x00", b"b\x00", b"ba"]
    assert x.xbwt_bytes() == b"b\x00\x00a"
    assert x.xbwl_string() == "1101"
    assert (x.xbwt_bytes(), x.xbwl.tolist()) == naive_xbw_of_order(micro)
    assert x.blocks == [Block(0, 1), Block(1, 2), Block(2, 4)]
    assert [x.representative(b) for b in range(3)] == [b"", b"ab", b"b"]


def test_single_string():
    x = build_xbw(build_trie(StringSet.from_records([b"a"])))
    assert x.xbwt_bytes() == b"a\x00"
    assert x.xbwl_string() == "11"


def test_decompose_xbw():
    blocks, sizes = decompose_xbw(np.array([1, 1, 0, 1]))
    assert blocks == [Block(0, 1), Block(1, 2), Block(2, 4)]
    assert sizes.tolist() == [1, 1, 2]
    blocks, _ = decompose_xbw(np.ones(4))
    assert all(len(b) == 1 for b in blocks)
    with pytest.raises(MalformedXbwl):
        decompose_xbw(np.array([1, 0]))


def test_malformed_inputs():
    with pytest.raises(MalformedXbwl):
        xbw_from_arrays(b"ab", [1])
    with pytest.raises(MalformedXbwl):
        xbw_from_arrays(b"a\x00", [1, 2])
    # a block nobody points at
    x = xbw_from_arrays(b"\x00\x00", [1, 1])
    with pytest.raises(MalformedXbwl):
        _ = x.leaf_counts


def test_navigation_micro(micro_xbw):
    x = micro_xbw
    assert int(x.block_start[ord("b")]) == 2
    assert xbw_children(x, 0) == Block(2, 4)
    assert xbw_children(x, 3) == Block(1, 2)
    assert xbw_children(x, 1) is None
    assert xbw_parent(x, 2) == 0
    assert xbw_parent(x, 1) == 3
    with pytest.raises(RootHasNoParent):
        xbw_parent(x, 0)
    with pytest.raises(IndexError):
        xbw_children(x, 4)


def test_leaf_counts(micro, micro_xbw):
    counts = build_leaf_counts(micro_xbw)
    assert counts.tolist() == [2, 1, 1, 1]
    root = micro_xbw.blocks[0]
    assert counts[root.start:root.stop].sum() == len(micro.set)


def test_random_tries_against_naive_and_navigation():
    for k in range(200):
        P = random_case(case_rng(41, k), CaseSpec())
        t = reversed_trie(P)
        x = build_xbw(t)
        assert (x.xbwt_bytes(), x.xbwl.tolist()) == naive_xbw_of_order(P)
        assert int(x.xbwl.sum()) == x.block_count == len(t.internal_nodes())
        assert int(np.count_nonzero(x.xbwt == 0)) == len(P.set)
        reps = [x.representative(b) for b in range(x.block_count)]
        assert reps == sorted(reps) and len(set(reps)) == len(reps)
        for i in range(len(x)):
            blk = xbw_children(x, i)
            if blk is None:
                assert x.xbwt[i] == 0
                continue
            b = x.blocks.index(blk)
            assert xbw_parent(x, b) == i
        for b in range(1, x.block_count):
            assert xbw_children(x, xbw_parent(x, b)) == x.blocks[b]
        leaves = [len(t.subtree_leaves(v)) for v in x.pa_debug]
        assert x.leaf_counts.tolist() == leaves


def test_label_order_default_matches_naive():
    S = StringSet.from_records([b"ab", b"abc", b"b", b"ca"])
    x = build_xbw(build_trie(S))
    assert (x.xbwt_bytes(), x.xbwl.tolist()) == naive_xbw(list(S))
