import itertools

import numpy as np
import pytest

from conftest import ordered
from xbwk.checks import CaseSpec, case_rng, check_conversion, random_case
from xbwk.conversion import block_bijection, bwt_to_xbw, reversed_trie, verify_theorem6, xbw_to_bwt
from xbwk.decomposition import Block, decompose_bwt
from xbwk.errors import LengthMismatch, RepresentativeMismatch
from xbwk.oracles import naive_index
from xbwk.suffix import build_tables
from xbwk.text import StringSet, make_ordered, reverse_set
from xbwk.trie import build_trie, with_child_orders
from xbwk.xbw import build_xbw

RUN4 = [b"abaa", b"abba", b"baba", b"bbaa"]


def converted(P):
    t = build_tables(P)
    d = decompose_bwt(t.lcp_p, t.lrs)
    return t, d, bwt_to_xbw(t.index.bwt, d.bwd)


def test_micro_bwt_to_xbw(micro):
    _, _, x = converted(micro)
    assert x.xbwt_bytes() == b"b\x00\x00a"
    assert x.xbwl_string() == "1101"


def test_duplicate_free_blocks_pass_through():
    bwt = np.frombuffer(b"ab\x00c", dtype=np.uint8)
    x = bwt_to_xbw(bwt, [2, 1, 1])
    assert x.xbwt_bytes() == b"ab\x00c"
    assert x.xbwl.tolist() == [0, 1, 1, 1]


def test_size_errors():
    with pytest.raises(LengthMismatch):
        bwt_to_xbw(np.zeros(3, dtype=np.uint8), [1, 1])
    with pytest.raises(LengthMismatch):
        bwt_to_xbw(np.zeros(2, dtype=np.uint8), [2, 0])


def test_run4_every_order_matches_direct_build():
    S = StringSet.from_records(RUN4)
    for rest in itertools.permutations(range(1, 4)):
        P = make_ordered(S, (0, *rest))
        _, _, x = converted(P)
        y = build_xbw(reversed_trie(P))
        assert x.xbwt_bytes() == y.xbwt_bytes()
        assert np.array_equal(x.xbwl, y.xbwl)


def test_micro_expansion(micro):
    _, _, x = converted(micro)
    e = xbw_to_bwt(x)
    assert e.index.bwt_bytes() == b"bb\x00\x00a"
    assert e.lrs.values.tolist() == [0, 0, 2, 1, 1]
    assert e.lcp_p.values.tolist() == [0, 0, 0, 0, 1]
    assert e.bwd.tolist() == [2, 1, 2]


def test_expansion_with_chosen_child_orders():
    # reversed set of {aa,ab,b}: root children (b, a), node b children (b$, ba)
    t = build_trie(StringSet.from_records([b"aa", b"ba", b"b"]))
    ch = [list(c) for c in t.children]
    ch[0] = [t.find(b"b"), t.find(b"a")]
    b = t.find(b"b")
    ch[b] = [t.find(b"b\x00"), t.find(b"ba")]
    e = xbw_to_bwt(build_xbw(with_child_orders(t, ch)))
    assert e.index.bwt_bytes() == b"bbaa\x00\x00\x00a"


def test_single_string_expansion():
    P = ordered(b"abc")
    _, _, x = converted(P)
    e = xbw_to_bwt(x)
    assert e.index.bwt_bytes() == naive_index(b"abc\x00").bwt


def test_expansion_lcp_is_representative_lcp():
    """Block-boundary LCP values equal the common prefix of adjacent representatives."""
    for k in range(100):
        P = random_case(case_rng(43, k), CaseSpec())
        _, _, x = converted(P)
        e = xbw_to_bwt(x)
        reps = [x.representative(b) for b in range(x.block_count)]
        starts = e.decomposition.starts
        for b in range(1, len(reps)):
            u, v = reps[b - 1], reps[b]
            n = 0
            while n < min(len(u), len(v)) and u[n] == v[n]:
                n += 1
            assert e.lcp_p.values[starts[b]] == n
            assert e.lcp_p.values[starts[b]] < e.lrs.values[starts[b]]


def test_micro_pairing(micro):
    t, d, x = converted(micro)
    pairs = block_bijection(d, x, t)
    assert [(p.bwt_block, p.xbw_block) for p in pairs] == [
        (Block(0, 2), Block(0, 1)), (Block(2, 3), Block(1, 2)), (Block(3, 5), Block(2, 4))]
    assert [p.representative for p in pairs] == [b"", b"ba", b"b"]


def test_pairing_rejects_foreign_xbw(micro):
    t, d, _ = converted(micro)
    _, _, other = converted(ordered(b"a", b"b"))
    with pytest.raises(RepresentativeMismatch):
        block_bijection(d, other, t)


def test_block_labels_micro(micro):
    rep = verify_theorem6(micro)
    assert rep.ok and rep.count_ok
    assert len(rep.checks) == 3
    assert all(c.bwt_ok and c.xbw_ok for c in rep.checks)


def test_conversion_checks_on_seeded_cases():
    for k in range(150):
        P = random_case(case_rng(47, k), CaseSpec())
        bad = [r for r in check_conversion(P) if not r.passed]
        assert not bad, bad[0].to_json()


def test_roundtrip_on_planar_orders_with_longer_strings():
    spec = CaseSpec(max_strings=8, max_len=7, alphabet=b"ab")
    for k in range(100):
        P = random_case(case_rng(53, k), spec)
        bad = [r for r in check_conversion(P) if not r.passed]
        assert not bad, bad[0].to_json()
