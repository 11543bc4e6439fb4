"""
Recursive Length Prefix serialization.

An item is either a byte string (``bytes``) or a list of items. Decoding is
strict: only the canonical encoding of an item is accepted, so the encoded
form can serve as a unique fingerprint of a trie node.
"""
from __future__ import annotations

from typing import Union

Item = Union[bytes, list]

MAX_LENGTH = 2**64


class RLPError(ValueError):
    """Base class for malformed RLP input."""


class EncodingError(RLPError):
    pass


class DecodingError(RLPError):
    pass


class TrailingBytesError(DecodingError):
    pass


class TruncatedError(DecodingError):
    pass


class NonCanonicalError(DecodingError):
    pass


def num_bytes(n: int) -> int:
    """Smallest number of bytes (at least 1) able to hold ``n``."""
    if n < 0:
        raise ValueError("negative length")
    return max(1, (n.bit_length() + 7) // 8)


def int_to_bytes(n: int) -> bytes:
    """Minimal big-endian form of a non-negative integer; zero is ``b''``."""
    if n < 0:
        raise ValueError("cannot encode negative integer")
    return n.to_bytes((n.bit_length() + 7) // 8, "big")


def bytes_to_int(b: bytes) -> int:
    if b[:1] == b"\x00":
        raise NonCanonicalError("integer with leading zero byte")
    return int.from_bytes(b, "big")


def _length_prefix(length: int, offset: int) -> bytes:
    if length < 56:
        return bytes([offset + length])
    if length >= MAX_LENGTH:
        raise EncodingError("payload of %d bytes is too large to encode" % length)
    n = num_bytes(length)
    return bytes([offset + 55 + n]) + length.to_bytes(n, "big")


def encode(item: Item) -> bytes:
    if isinstance(item, (bytes, bytearray)):
        if len(item) == 1 and item[0] < 0x80:
            return bytes(item)
        return _length_prefix(len(item), 0x80) + bytes(item)
    if isinstance(item, (list, tuple)):
        payload = b"".join(encode(x) for x in item)
        return _length_prefix(len(payload), 0xC0) + payload
    raise TypeError("cannot RLP-encode %r" % type(item).__name__)


def _read_length(data: bytes, pos: int, n: int) -> int:
    if pos + n > len(data):
        raise TruncatedError("length field runs past end of input")
    raw = data[pos:pos + n]
    if raw[0] == 0:
        raise NonCanonicalError("length field has a leading zero byte")
    length = int.from_bytes(raw, "big")
    if length < 56:
        raise NonCanonicalError("long form used for a length below 56")
    return length


def _decode_at(data: bytes, pos: int) -> tuple[Item, int]:
    # returns the item starting at pos and the position just past it
    if pos >= len(data):
        raise TruncatedError("expected an item at offset %d" % pos)
    b0 = data[pos]
    if b0 < 0x80:
        return data[pos:pos + 1], pos + 1
    if b0 < 0xB8:
        length = b0 - 0x80
        start = pos + 1
        end = start + length
        if end > len(data):
            raise TruncatedError("string payload truncated")
        if length == 1 and data[start] < 0x80:
            raise NonCanonicalError("single byte below 0x80 must encode as itself")
        return data[start:end], end
    if b0 < 0xC0:
        n = b0 - 0xB7
        length = _read_length(data, pos + 1, n)
        start = pos + 1 + n
        end = start + length
        if end > len(data):
            raise TruncatedError("string payload truncated")
        return data[start:end], end
    if b0 < 0xF8:
        length = b0 - 0xC0
        start = pos + 1
    else:
        n = b0 - 0xF7
        length = _read_length(data, pos + 1, n)
        start = pos + 1 + n
    end = start + length
    if end > len(data):
        raise TruncatedError("list payload truncated")
    items = []
    p = start
    while p < end:
        item, p = _decode_at(data, p)
        items.append(item)
    if p != end:
        raise TruncatedError("list element overruns the list payload")
    return items, end


def decode(data: bytes) -> Item:
    """Decode exactly one canonical item from ``data``."""
    data = bytes(data)
    if not data:
        raise TruncatedError("empty input")
    item, end = _decode_at(data, 0)
    if end != len(data):
        raise TrailingBytesError("%d trailing bytes after item" % (len(data) - end))
    return item
