import random

import numpy as np
import pytest

from conftest import ordered
from xbwk.checks import CaseSpec, case_rng, check_index, random_case
from xbwk.decomposition import (
    Arc, Block, decompose_bwt, dec_pre, failure_arcs, simulate_ac, tree_arcs,
)
from xbwk.errors import LengthMismatch
from xbwk.oracles import naive_ac
from xbwk.suffix import LcpArray, LrsArray, build_tables


def decomp_of(P):
    t = build_tables(P)
    return t, decompose_bwt(t.lcp_p, t.lrs)


def test_micro_blocks(micro_tables):
    d = decompose_bwt(micro_tables.lcp_p, micro_tables.lrs)
    assert d.blocks() == [Block(0, 2), Block(2, 3), Block(3, 5)]
    assert d.bwd.tolist() == [2, 1, 2]
    assert [dec_pre(d, micro_tables, k) for k in range(3)] == [b"", b"ba", b"b"]


def test_two_singletons():
    t, d = decomp_of(ordered(b"a", b"b"))
    assert t.m.text == b"a\x00b\x00"
    assert d.blocks() == [Block(0, 2), Block(2, 3), Block(3, 4)]
    assert set(tree_arcs(d, t.index)) == {Arc(0, 1, ord("a")), Arc(0, 2, ord("b"))}


def test_first_block_holds_the_dollar_suffixes():
    for P in (ordered(b"abc", b"b", b"ca"), ordered(b"x")):
        t, d = decomp_of(P)
        assert d.block(0) == Block(0, len(P.set))


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        decompose_bwt(LcpArray(np.zeros(2, dtype=np.int64)), LrsArray(np.zeros(3, dtype=np.int64)))


def test_micro_arcs(micro_tables):
    d = decompose_bwt(micro_tables.lcp_p, micro_tables.lrs)
    arcs = tree_arcs(d, micro_tables.index)
    assert set(arcs) == {Arc(0, 2, ord("b")), Arc(2, 1, ord("a"))}
    assert len(arcs) == len(d) - 1
    assert failure_arcs(d, micro_tables.lcp_p, micro_tables.lrs).tolist() == [-1, 0, 0]


def test_every_rank_of_a_block_shares_the_representative():
    t, d = decomp_of(ordered(b"abaa", b"abba", b"baba", b"bbaa"))
    text, sa, lrs = t.m.text, t.sa.sa, t.lrs.values
    for b in d.blocks():
        reps = {text[sa[i]:sa[i] + lrs[i]] for i in range(b.start, b.stop)}
        assert len(reps) == 1


def test_simulate_ac_small():
    g = simulate_ac(ordered(b"ab", b"b"))
    names = [g.prefix(v) for v in range(len(g))]
    arcs = {(names[a.parent], names[a.child]) for a in g.tree_arcs()}
    assert arcs == {(b"", b"a"), (b"a", b"ab"), (b"", b"b")}
    fail = {names[v]: names[f] for v, f in enumerate(g.failure) if f >= 0}
    assert fail == {b"a": b"", b"b": b"", b"ab": b"b"}
    single = simulate_ac(ordered(b"a"))
    assert len(single) == 2 and single.failure.tolist() == [-1, 0]
    assert "digraph" in g.to_dot()


def test_extended_window_misses_a_short_target():
    # S = {aa}: the failure of "aa" is "a", whose block has a single rank
    t, d = decomp_of(ordered(b"aa"))
    names = [dec_pre(d, t, k) for k in range(len(d))]
    assert names == [b"", b"a", b"aa"]
    assert naive_ac([b"aa"]).failure[b"aa"] == b"a"
    assert failure_arcs(d, t.lcp_p, t.lrs).tolist() == [-1, 0, 1]
    assert failure_arcs(d, t.lcp_p, t.lrs, "extended").tolist() == [-1, 0, 0]


def test_window_variants_over_random_cases():
    """The tight window always agrees with the literal scan over the same window;
    the extended one deviates only when the true target block spans fewer than 3 ranks."""
    spec = CaseSpec()
    deviations = 0
    for k in range(300):
        P = random_case(case_rng(17, k), spec)
        t, d = decomp_of(P)
        tight = failure_arcs(d, t.lcp_p, t.lrs)
        assert np.array_equal(tight, failure_arcs(d, t.lcp_p, t.lrs, "tight-scan"))
        ext = failure_arcs(d, t.lcp_p, t.lrs, "extended")
        for b in np.flatnonzero(tight != ext):
            deviations += 1
            target = int(tight[b])
            assert target > 0 and d.bwd[target] < 3
    assert deviations > 0


def test_index_checks_pass_on_seeded_cases():
    for k in range(100):
        P = random_case(case_rng(23, k), CaseSpec())
        bad = [r for r in check_index(P) if not r.passed]
        assert not bad, bad[0].to_json()


def test_unknown_window():
    t, d = decomp_of(ordered(b"a"))
    with pytest.raises(ValueError):
        failure_arcs(d, t.lcp_p, t.lrs, "wide")
