"""Binary container holding the BWT-side and XBW-side tables of one instance.

Layout: ``XBWK``, one version byte, then sections of a 4-byte tag, a u64
little-endian payload length and the payload.  Integer tables are int64 LE,
symbol tables raw bytes (``$`` is 0x00), XBWL one byte per bit, META a JSON
object.  Unknown tags are skipped on read.
"""
from __future__ import annotations

import json
import struct
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .errors import FormatError, MissingSection

MAGIC = b"XBWK"
VERSION = 1

INT_TAGS = ("SA  ", "LCP ", "LRS ", "BWD ", "XBWD")
BYTE_TAGS = ("BWT ", "XBWT", "XBWL")
TAG_ORDER = ("META", "SA  ", "BWT ", "LCP ", "LRS ", "BWD ", "XBWT", "XBWL", "XBWD")

_HEAD = struct.Struct("<4sQ")


def _tag(name: str) -> str:
    """``"SA"`` -> ``"SA  "``; tags are padded to four characters."""
    if len(name) > 4:
        raise ValueError(f"tag {name!r} longer than 4 characters")
    return name.ljust(4)


class Container:
    def __init__(self, sections: Optional[dict[str, bytes]] = None):
        self.sections: dict[str, bytes] = dict(sections or {})

    def __contains__(self, name: str) -> bool:
        return _tag(name) in self.sections

    def tags(self) -> list[str]:
        return list(self.sections)

    def require(self, *names: str) -> None:
        for name in names:
            if _tag(name) not in self.sections:
                raise MissingSection(_tag(name))

    def get(self, name: str) -> np.ndarray:
        tag = _tag(name)
        self.require(tag)
        raw = self.sections[tag]
        if tag in INT_TAGS:
            if len(raw) % 8:
                raise FormatError(f"section {tag!r} length {len(raw)} is not a multiple of 8")
            return np.frombuffer(raw, dtype="<i8").astype(np.int64)
        if tag in BYTE_TAGS:
            return np.frombuffer(raw, dtype=np.uint8).copy()
        raise KeyError(f"{tag!r} is not an array section")

    def put(self, name: str, values) -> None:
        tag = _tag(name)
        if tag in INT_TAGS:
            self.sections[tag] = np.ascontiguousarray(values, dtype="<i8").tobytes()
        elif tag in BYTE_TAGS:
            self.sections[tag] = np.ascontiguousarray(values, dtype=np.uint8).tobytes()
        else:
            raise KeyError(f"{tag!r} is not an array section")

    def drop(self, *names: str) -> None:
        for name in names:
            self.sections.pop(_tag(name), None)

    @property
    def meta(self) -> dict:
        if "META" not in self.sections:
            return {}
        try:
            return json.loads(self.sections["META"].decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as e:
            raise FormatError(f"META is not JSON: {e}") from None

    @meta.setter
    def meta(self, value: dict) -> None:
        self.sections["META"] = json.dumps(value, sort_keys=True).encode("utf-8")

    def to_bytes(self) -> bytes:
        parts = [MAGIC, bytes([VERSION])]
        known = [t for t in TAG_ORDER if t in self.sections]
        for tag in known + [t for t in self.sections if t not in TAG_ORDER]:
            payload = self.sections[tag]
            parts.append(_HEAD.pack(tag.encode("latin-1"), len(payload)))
            parts.append(payload)
        return b"".join(parts)

    @classmethod
    def from_bytes(cls, raw: bytes) -> "Container":
        if raw[:4] != MAGIC:
            raise FormatError("not an XBWK container (bad magic)")
        if len(raw) < 5 or raw[4] != VERSION:
            raise FormatError(f"unsupported container version {raw[4] if len(raw) > 4 else None}")
        sections = {}
        p = 5
        while p < len(raw):
            if p + _HEAD.size > len(raw):
                raise FormatError("truncated section header")
            tag, n = _HEAD.unpack_from(raw, p)
            p += _HEAD.size
            if p + n > len(raw):
                raise FormatError(f"section {tag!r} runs past the end of the file")
            tag = tag.decode("latin-1")
            if tag in TAG_ORDER:
                sections[tag] = raw[p:p + n]
            p += n
        return cls(sections)

    def write(self, path: Union[str, Path]) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def read(cls, path: Union[str, Path]) -> "Container":
        return cls.from_bytes(Path(path).read_bytes())


def histogram(strings) -> dict[str, int]:
    """Symbol counts over the strings, keyed by decimal byte value."""
    counts = np.zeros(256, dtype=np.int64)
    for s in strings:
        counts += np.bincount(np.frombuffer(s, dtype=np.uint8), minlength=256)
    return {str(c): int(counts[c]) for c in np.flatnonzero(counts)}


def encode_strings(strings) -> list[str]:
    return [s.decode("latin-1") for s in strings]


def decode_strings(items) -> list[bytes]:
    return [s.encode("latin-1") for s in items]
