"""Hypothesis-driven versions of the per-instance oracle checks."""
from hypothesis import given, settings
from hypothesis import strategies as st

from xbwk.checks import check_case
from xbwk.container import Container
from xbwk.optimize import TableInstance, solve_table
from xbwk.oracles import exhaustive_search
from xbwk.text import StringSet, make_ordered

words = st.binary(min_size=1, max_size=5).map(lambda b: bytes(97 + c % 3 for c in b))


@st.composite
def ordered_sets(draw, max_strings=6):
    pool = draw(st.sets(words, min_size=1, max_size=max_strings))
    S = StringSet(tuple(sorted(pool)))
    seq = draw(st.permutations(range(len(S))))
    return make_ordered(S, seq)


@settings(max_examples=200, deadline=None)
@given(ordered_sets())
def test_every_oracle_check_passes(P):
    bad = [r for r in check_case(P) if not r.passed]
    assert not bad, bad[0].to_json()


@settings(max_examples=100, deadline=None)
@given(ordered_sets(), st.integers(min_value=0, max_value=10))
def test_rotations_give_one_ordered_set(P, k):
    seq = P.sequence()
    k %= len(seq)
    assert make_ordered(P.set, seq[k:] + seq[:k]) == P


blocks = st.lists(st.sets(st.integers(1, 4), min_size=1, max_size=4).map(sorted), min_size=1, max_size=4)


@settings(max_examples=300, deadline=None)
@given(blocks, st.randoms(use_true_random=False))
def test_table_solver_optimal(bl, rnd):
    for b in bl:
        rnd.shuffle(b)
    inst = TableInstance.from_blocks(bl)
    sol = solve_table(inst)
    assert sol.achieved.changes == exhaustive_search("table", bl).optimum
    assert [sorted(b) for b in sol.blocks()] == [sorted(b) for b in bl]


@settings(max_examples=100, deadline=None)
@given(st.dictionaries(st.sampled_from(["SA", "LCP", "BWT", "XBWL"]),
                       st.lists(st.integers(0, 255), max_size=20)))
def test_container_roundtrip(sections):
    c = Container()
    for tag, vals in sections.items():
        c.put(tag, vals)
    d = Container.from_bytes(c.to_bytes())
    assert d.to_bytes() == c.to_bytes()
    for tag, vals in sections.items():
        assert d.get(tag).tolist() == vals
