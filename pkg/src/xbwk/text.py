"""String sets, circular concatenation orders and the separator-joined text.

The separator ``$`` is byte 0x00, so plain byte comparison already puts it
below every input symbol.  Strings are kept sorted; indices into a
``StringSet`` are therefore lexicographic ranks, and ``s_1`` is index 0.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import BinaryIO, Iterable, Sequence, Union

import numpy as np

from .errors import DuplicateString, EmptyString, NotAPermutation, NulByte

SEP = 0
SEP_BYTE = b"\x00"


@dataclass(frozen=True)
class StringSet:
    """A duplicate-free, lexicographically sorted collection of non-empty byte strings."""

    strings: tuple[bytes, ...]

    def __post_init__(self):
        s = self.strings
        for i in range(1, len(s)):
            if not s[i - 1] < s[i]:
                raise ValueError("StringSet.strings must be strictly increasing")
        for x in s:
            if not x:
                raise ValueError("StringSet cannot hold the empty string")
            if SEP_BYTE in x:
                raise ValueError("StringSet strings cannot contain 0x00")

    @classmethod
    def from_records(cls, records: Iterable[bytes]) -> "StringSet":
        """Validate records in input order and return them sorted.

        Errors carry the 1-based index of the offending record.
        """
        seen = set()
        for idx, rec in enumerate(records, start=1):
            rec = bytes(rec)
            if not rec:
                raise EmptyString(idx)
            if SEP_BYTE in rec:
                raise NulByte(idx)
            if rec in seen:
                raise DuplicateString(idx, repr(rec))
            seen.add(rec)
        return cls(tuple(sorted(seen)))

    @property
    def norm(self) -> int:
        return sum(len(s) for s in self.strings)

    def __len__(self) -> int:
        return len(self.strings)

    def __iter__(self):
        return iter(self.strings)

    def __getitem__(self, i: int) -> bytes:
        return self.strings[i]

    def index(self, s: bytes) -> int:
        # strings are sorted, but n is small relative to the text; a dict is
        # built lazily for repeated lookups
        lookup = self.__dict__.get("_lookup")
        if lookup is None:
            lookup = {x: i for i, x in enumerate(self.strings)}
            object.__setattr__(self, "_lookup", lookup)
        try:
            return lookup[s]
        except KeyError:
            raise KeyError(f"{s!r} is not a member of the set") from None


def _split_lines(data: bytes) -> list[bytes]:
    if data.endswith(b"\n"):
        data = data[:-1]
    return [line[:-1] if line.endswith(b"\r") else line for line in data.split(b"\n")]


def _split_fasta(data: bytes) -> list[bytes]:
    records: list[bytes] = []
    current: list[bytes] | None = None
    for line in data.splitlines():
        line = line.strip()
        if line.startswith(b">"):
            if current is not None:
                records.append(b"".join(current))
            current = []
        elif line:
            if current is None:
                # sequence data before any header forms its own record
                current = []
            current.append(line)
    if current is not None:
        records.append(b"".join(current))
    return records


def read_records(raw: Union[bytes, BinaryIO], format: str = "lines") -> list[bytes]:
    """Records in file order, without validation."""
    if not isinstance(raw, (bytes, bytearray, memoryview)):
        raw = raw.read()
    data = bytes(raw)
    if format == "lines":
        return _split_lines(data)
    if format == "fasta":
        return _split_fasta(data)
    raise ValueError(f"unknown input format {format!r}")


def load_string_set(raw: Union[bytes, BinaryIO], format: str = "lines") -> StringSet:
    """Parse newline-separated or FASTA records into a validated ``StringSet``."""
    return StringSet.from_records(read_records(raw, format))


@dataclass(frozen=True)
class CircularOrder:
    """Successor map over string indices forming exactly one cycle."""

    successor: tuple[int, ...]
    start: int = 0

    def __post_init__(self):
        n = len(self.successor)
        if n == 0:
            raise NotAPermutation("empty order")
        if sorted(self.successor) != list(range(n)):
            raise NotAPermutation(f"successor map {self.successor} is not a permutation")
        i, steps = self.start, 0
        while True:
            i = self.successor[i]
            steps += 1
            if i == self.start:
                break
        if steps != n:
            raise NotAPermutation(f"successor map {self.successor} has more than one cycle")

    def sequence(self) -> list[int]:
        out = [self.start]
        nxt = self.successor[self.start]
        while nxt != self.start:
            out.append(nxt)
            nxt = self.successor[nxt]
        return out


@dataclass(frozen=True)
class OrderedStringSet:
    """A string set together with a circular concatenation order."""

    set: StringSet
    order: CircularOrder

    def __post_init__(self):
        if len(self.order.successor) != len(self.set):
            raise NotAPermutation("order does not index the members of the set")

    def __len__(self) -> int:
        return len(self.set)

    @property
    def successor(self) -> tuple[int, ...]:
        return self.order.successor

    def sequence(self) -> list[int]:
        """Concatenation order as string indices, starting at ``s_1``."""
        return self.order.sequence()

    def strings_in_order(self) -> list[bytes]:
        return [self.set[i] for i in self.sequence()]


def make_ordered(S: StringSet, sequence: Sequence[Union[int, bytes]]) -> OrderedStringSet:
    """Build an ordered set whose cycle visits ``sequence`` in turn.

    Items may be indices or member strings.  Any rotation of the same cycle
    yields an equal result.
    """
    idx = [S.index(x) if isinstance(x, (bytes, bytearray)) else int(x) for x in sequence]
    n = len(S)
    if len(idx) != n or sorted(idx) != list(range(n)):
        raise NotAPermutation(f"{list(sequence)!r} is not a permutation of {n} strings")
    succ = [0] * n
    for k in range(n):
        succ[idx[k]] = idx[(k + 1) % n]
    return OrderedStringSet(S, CircularOrder(tuple(succ)))


def lex_ordered(S: StringSet) -> OrderedStringSet:
    """Concatenate in lexicographic order."""
    return make_ordered(S, range(len(S)))


@dataclass(frozen=True)
class MultiString:
    """``s_σ(1) $ s_σ(2) $ ... s_σ(n) $`` starting from the smallest string."""

    text: bytes
    string_count: int
    boundaries: tuple[int, ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self.text)

    @property
    def array(self) -> np.ndarray:
        return np.frombuffer(self.text, dtype=np.uint8)

    def split(self) -> list[bytes]:
        return self.text[:-1].split(SEP_BYTE)


def concat_multistring(P: OrderedStringSet) -> MultiString:
    parts = P.strings_in_order()
    buf = io.BytesIO()
    bounds = []
    for s in parts:
        buf.write(s)
        bounds.append(buf.tell())
        buf.write(SEP_BYTE)
    return MultiString(buf.getvalue(), len(parts), tuple(bounds))


def reverse_set(P: OrderedStringSet) -> OrderedStringSet:
    """Reverse every string and carry the cycle over to the reversed members."""
    rev = [s[::-1] for s in P.set]
    S_rev = StringSet(tuple(sorted(rev)))
    pos = [S_rev.index(r) for r in rev]
    succ = [0] * len(rev)
    for i, j in enumerate(P.successor):
        succ[pos[i]] = pos[j]
    return OrderedStringSet(S_rev, CircularOrder(tuple(succ)))


def successor_rank(P: OrderedStringSet) -> list[int]:
    """String indices sorted by the rank of their successor (the ``<_σ`` order)."""
    succ = P.successor
    return sorted(range(len(succ)), key=succ.__getitem__)
