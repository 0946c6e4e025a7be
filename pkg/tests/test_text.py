import io
import itertools

import pytest

from conftest import ordered
from xbwk.errors import DuplicateString, EmptyString, NotAPermutation, NulByte
from xbwk.oracles import naive_concat
from xbwk.text import (
    CircularOrder, StringSet, concat_multistring, lex_ordered, load_string_set, make_ordered,
    read_records, reverse_set, successor_rank,
)

RUN4 = [b"abaa", b"abba", b"baba", b"bbaa"]


def test_load_lines_counts_norm():
    S = load_string_set(b"\n".join(RUN4) + b"\n")
    assert S.strings == tuple(RUN4)
    assert S.norm == 16


def test_load_errors_name_record():
    with pytest.raises(DuplicateString) as e:
        load_string_set(b"ab\nab\n")
    assert e.value.index == 2
    with pytest.raises(EmptyString) as e:
        load_string_set(b"")
    assert e.value.index == 1
    with pytest.raises(NulByte) as e:
        load_string_set(b"a\nb\x00\n")
    assert e.value.index == 2


def test_load_fasta_and_stream():
    raw = b">r1\nAC\nGT\n>r2\nTT\n"
    assert read_records(raw, "fasta") == [b"ACGT", b"TT"]
    assert load_string_set(io.BytesIO(raw), "fasta").strings == (b"ACGT", b"TT")
    assert read_records(b"a\r\nb\r\n") == [b"a", b"b"]
    with pytest.raises(ValueError):
        read_records(b"a", "csv")


def test_make_ordered_rotation_invariant():
    S = StringSet.from_records([b"ab", b"b"])
    P = make_ordered(S, [b"ab", b"b"])
    assert P.successor == (1, 0)
    assert make_ordered(S, [b"b", b"ab"]) == P
    with pytest.raises(NotAPermutation):
        make_ordered(S, [0, 0])


def test_circular_order_rejects_two_cycles():
    with pytest.raises(NotAPermutation):
        CircularOrder((1, 0, 3, 2))
    with pytest.raises(NotAPermutation):
        CircularOrder((0, 0))


def test_concat_examples():
    assert concat_multistring(ordered(b"ab", b"b")).text == b"ab\x00b\x00"
    assert concat_multistring(ordered(b"a")).text == b"a\x00"
    P = ordered(b"bb", b"a", b"ba")
    m = concat_multistring(P)
    # always starts at the smallest string
    assert m.text == b"a\x00ba\x00bb\x00"
    assert len(m) == P.set.norm + len(P.set)
    assert m.split() == [b"a", b"ba", b"bb"]
    assert m.text == naive_concat(P)


def test_reverse_set():
    P = lex_ordered(StringSet.from_records(RUN4))
    R = reverse_set(P)
    assert set(R.set) == {b"aaba", b"abba", b"abab", b"aabb"}
    assert reverse_set(R) == P
    assert reverse_set(ordered(b"ab", b"b")).set.strings == (b"b", b"ba")


def test_successor_rank_examples():
    S = lambda P: [P.set[i] for i in successor_rank(P)]
    assert S(ordered(b"ab", b"b")) == [b"b", b"ab"]
    assert S(ordered(b"a", b"ba", b"bb")) == [b"bb", b"a", b"ba"]
    assert S(ordered(b"x")) == [b"x"]


def test_all_orders_give_distinct_texts():
    S = StringSet.from_records([b"a", b"ab", b"b", b"ba", b"bb"])
    texts = {concat_multistring(make_ordered(S, (0, *rest))).text
             for rest in itertools.permutations(range(1, 5))}
    assert len(texts) == 24
