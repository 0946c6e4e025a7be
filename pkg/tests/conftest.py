import pytest

from xbwk.suffix import build_tables
from xbwk.text import StringSet, make_ordered


def ordered(*seq: bytes):
    """Ordered set visiting ``seq`` in turn."""
    return make_ordered(StringSet.from_records(seq), list(seq))


@pytest.fixture
def micro():
    return ordered(b"ab", b"b")


@pytest.fixture
def micro_tables(micro):
    return build_tables(micro)

