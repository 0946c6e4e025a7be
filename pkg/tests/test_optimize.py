import random

import pytest

from xbwk.errors import HypothesisViolated
from xbwk.optimize import (
    TableInstance, TableSolution, apply_child_orders, block_nodes, boundary_sets, bwt_measure, cycle_repair, greedy_segment,
    optimize_order, rl_measures, solve_table, split_instance, table_of, xbwt_measure,
)
from xbwk.oracles import exhaustive_search, naive_changes, naive_concat, naive_index
from xbwk.text import CircularOrder, OrderedStringSet, StringSet, lex_ordered, make_ordered
from xbwk.trie import build_trie, leaf_strings_in_order, planarize


def S(*items):
    return StringSet.from_records(items)


def T(text):
    return TableInstance.parse(text)


def test_rl_measures():
    m = rl_measures("bb$$a")
    assert (m.changes, m.rle_size, m.length) == (2, 3, 5)
    assert rl_measures(b"aaaa").changes == 0
    assert rl_measures(b"abab").changes == 3
    with pytest.raises(ValueError):
        rl_measures(b"")


def test_boundary_sets():
    a, b, c = (ord(x) for x in "abc")
    assert boundary_sets(T("ab|ab")) == [{a, b}]
    assert boundary_sets(T("ab|cd")) == [set()]
    assert boundary_sets(T("ab|ac")) == [{a}]


def test_table_instance_validation():
    with pytest.raises(ValueError):
        T("aa|b")
    with pytest.raises(ValueError):
        TableInstance((1, 2), (3,))


def test_split_instance_cases():
    sp = split_instance(T("ab|ac"))
    assert sp.joints == ["equal"] and sp.forced() == [(0, ord("a"))]
    assert [list(r) for r in sp.segments] == [[0], [1]]
    assert sp.remaining(0) == (ord("b"),) and sp.remaining(1) == (ord("c"),)
    assert split_instance(T("ab|cd")).joints == ["cut"]
    assert split_instance(T("a|ab")).joints == ["equal"]
    assert split_instance(T("ab|ab")).joints == ["free"]


@pytest.mark.parametrize("text, out, changes", [
    ("ab|ac", "baac", 2),
    ("ab|cd", "abcd", 3),
    ("a|b|c", "abc", 2),
    ("ab", "ab", 1),
])
def test_solve_table_examples(text, out, changes):
    sol = solve_table(T(text))
    assert bytes(sol.t_prime) == out.encode()
    assert sol.achieved.changes == changes
    assert sol.achieved.changes == exhaustive_search("table", [T(text).block(k) for k in range(T(text).block_count)]).optimum


def test_greedy_segment():
    assert bytes(greedy_segment(T("ab|ab")).t_prime) == b"baab"
    sol = greedy_segment(T("ab|ab|ab"))
    assert bytes(sol.t_prime) == b"baabba" and sol.achieved.changes == 3 == sol.lower_bound
    assert bytes(greedy_segment(T("ab")).t_prime) == b"ab"
    with pytest.raises(HypothesisViolated):
        greedy_segment(T("ab|ac"))


def random_table(rng, alphabet=4, max_len=10):
    blocks, total = [], 0
    target = rng.randint(1, max_len)
    while total < target:
        k = rng.randint(1, min(alphabet, target - total))
        blocks.append(rng.sample(range(1, alphabet + 1), k))
        total += k
    return TableInstance.from_blocks(blocks)


def test_solve_table_random_against_exhaustive():
    rng = random.Random(59)
    for _ in range(300):
        inst = random_table(rng)
        sol = solve_table(inst)
        blocks = [inst.block(k) for k in range(inst.block_count)]
        for k, blk in enumerate(sol.blocks()):
            assert sorted(blk) == sorted(blocks[k])
        assert sol.achieved.changes >= inst.lower_bound
        assert sol.achieved.changes == exhaustive_search("table", blocks).optimum


def test_apply_child_orders_identity_and_reorder():
    t = build_trie(S(b"ba", b"b"))
    inst = table_of(t)
    ident = TableSolution(inst.t, inst.sizes, rl_measures(inst.t), inst.lower_bound)
    assert apply_child_orders(t, ident).children == t.children
    u = build_trie(S(b"aa", b"ba", b"b"))
    nodes = block_nodes(u)
    sol = solve_table(table_of(u, nodes))
    v = apply_child_orders(u, sol, nodes)
    for z, blk in zip(nodes, sol.blocks()):
        assert tuple(v.label[w] for w in v.children[z]) == blk
    with pytest.raises(ValueError):
        apply_child_orders(u, solve_table(T("ab")))


def test_cycle_repair_two_strings_is_free():
    t, _ = planarize(build_trie(S(b"ba", b"b")))
    rep = cycle_repair(t)
    assert rep.penalty == 0
    assert rep.order == CircularOrder((1, 0))


def test_cycle_repair_forced_penalty():
    # planar-optimal leaf order (b$, ba$, aa$) fixes ab -> ab; a repair costs one change
    t = build_trie(S(b"aa", b"ba", b"b"))
    sol = solve_table(table_of(t))
    assert sol.achieved.changes == 3
    u = apply_child_orders(t, sol)
    rep = cycle_repair(u)
    P = OrderedStringSet(S(b"aa", b"ab", b"b"), rep.order)
    assert bwt_measure(P).changes == 4
    assert rep.penalty == 1


def test_cycle_repair_always_single_cycle():
    rng = random.Random(61)
    for _ in range(100):
        pool = {bytes(rng.choice(b"abc") for _ in range(rng.randint(1, 4))) for _ in range(rng.randint(1, 7))}
        t = build_trie(StringSet(tuple(sorted(s[::-1] for s in pool))))
        u = apply_child_orders(t, solve_table(table_of(t)))
        rep = cycle_repair(u)
        CircularOrder(rep.order.successor)  # raises unless one cycle


def test_optimize_fixture_realizable():
    r = optimize_order(S(b"a", b"ba", b"bb"))
    assert r.order == [b"a", b"ba", b"bb"]
    assert r.achieved == 4 == r.certificate
    assert naive_index(naive_concat(r.ordered)).bwt == b"baa\x00bb\x00\x00"
    other = make_ordered(r.ordered.set, [b"a", b"bb", b"ba"])
    assert naive_changes(naive_index(naive_concat(other)).bwt) == 6


def test_optimize_fixture_unrealizable():
    r = optimize_order(S(b"aa", b"ab", b"b"))
    assert r.achieved == 4
    assert r.lower_bound == 3
    assert r.realizable is False
    assert exhaustive_search("order", r.ordered.set).optimum == 4


def test_optimize_singleton():
    r = optimize_order(S(b"abc"))
    assert r.order == [b"abc"]
    assert r.achieved == bwt_measure(r.ordered).changes


def test_optimize_beats_lex_and_random_orders():
    rng = random.Random(67)
    for _ in range(10):
        pool = sorted({bytes(rng.choice(b"acgt") for _ in range(rng.randint(2, 6))) for _ in range(rng.randint(9, 14))})
        St = StringSet(tuple(pool))
        r = optimize_order(St)
        assert r.certificate == r.achieved
        assert r.achieved <= bwt_measure(lex_ordered(St)).changes
        for _ in range(32):
            seq = list(range(len(St)))
            rng.shuffle(seq)
            assert r.achieved <= bwt_measure(make_ordered(St, seq)).changes


def test_optimize_xbwt_target_matches_exhaustive():
    rng = random.Random(71)
    for _ in range(40):
        pool = sorted({bytes(rng.choice(b"ab") for _ in range(rng.randint(1, 4))) for _ in range(rng.randint(1, 5))})
        St = StringSet(tuple(pool))
        r = optimize_order(St, target="xbwt")
        assert r.certificate == r.achieved == xbwt_measure(r.ordered).changes
        assert r.achieved == exhaustive_search("order", St, target="xbwt").optimum


def test_optimize_rejects_unknown_target():
    with pytest.raises(ValueError):
        optimize_order(S(b"a"), target="lcp")
