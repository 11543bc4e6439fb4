"""Hex-prefix encoding of nibble paths for leaf and extension nodes."""
from __future__ import annotations

from typing import Sequence


class HexPrefixError(ValueError):
    pass


def bytes_to_nibbles(key: bytes) -> tuple[int, ...]:
    out = []
    for b in key:
        out.append(b >> 4)
        out.append(b & 0x0F)
    return tuple(out)


def nibbles_to_bytes(nibbles: Sequence[int]) -> bytes:
    if len(nibbles) % 2:
        raise HexPrefixError("odd number of nibbles")
    return bytes(16 * nibbles[i] + nibbles[i + 1] for i in range(0, len(nibbles), 2))


def hp_encode(path: Sequence[int], is_leaf: bool) -> bytes:
    """
    Pack ``path`` two nibbles per byte behind a flag nibble.

    The flag nibble carries the leaf bit (0x2) and the odd-length bit (0x1).
    Even-length paths get a zero padding nibble after the flag.
    """
    for x in path:
        if not 0 <= x < 16:
            raise HexPrefixError("nibble out of range: %r" % (x,))
    flag = 2 if is_leaf else 0
    if len(path) % 2:
        nibbles = [flag + 1, *path]
    else:
        nibbles = [flag, 0, *path]
    return nibbles_to_bytes(nibbles)


def hp_decode(data: bytes) -> tuple[tuple[int, ...], bool]:
    if not data:
        raise HexPrefixError("empty hex-prefix encoding")
    nibbles = bytes_to_nibbles(data)
    flag = nibbles[0]
    if flag > 3:
        raise HexPrefixError("invalid flag nibble %d" % flag)
    if flag & 1:
        path = nibbles[1:]
    else:
        if nibbles[1] != 0:
            raise HexPrefixError("nonzero padding nibble")
        path = nibbles[2:]
    return path, bool(flag & 2)
