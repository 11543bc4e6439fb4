"""2048-bit log bloom filter with three probes per entry."""
from __future__ import annotations

from typing import Iterable

from ..keccak import keccak256

BLOOM_BYTES = 256
BLOOM_BITS = BLOOM_BYTES * 8


def bloom_positions(entry: bytes) -> tuple[int, int, int]:
    d = keccak256(entry)
    return tuple((256 * d[i] + d[i + 1]) % BLOOM_BITS for i in (0, 2, 4))


class Bloom:
    """Immutable bloom filter; bit ``p`` is bit ``p % 8`` of byte ``255 - p // 8``."""

    __slots__ = ("_bits",)

    def __init__(self, data: bytes = bytes(BLOOM_BYTES)):
        if len(data) != BLOOM_BYTES:
            raise ValueError("bloom must be %d bytes" % BLOOM_BYTES)
        self._bits = int.from_bytes(data, "big")

    @classmethod
    def _from_int(cls, bits: int) -> "Bloom":
        b = cls.__new__(cls)
        b._bits = bits
        return b

    def __bytes__(self) -> bytes:
        return self._bits.to_bytes(BLOOM_BYTES, "big")

    def __eq__(self, other) -> bool:
        return isinstance(other, Bloom) and other._bits == self._bits

    def __hash__(self) -> int:
        return hash(self._bits)

    def __or__(self, other: "Bloom") -> "Bloom":
        return Bloom._from_int(self._bits | other._bits)

    def __repr__(self) -> str:
        return "Bloom(%d bits set)" % bin(self._bits).count("1")

    def covers(self, other: "Bloom") -> bool:
        """True if every bit set in ``other`` is set here."""
        return other._bits & ~self._bits == 0

    def insert(self, entry: bytes) -> "Bloom":
        bits = self._bits
        for p in bloom_positions(entry):
            bits |= 1 << p
        return Bloom._from_int(bits)

    def contains(self, entry: bytes) -> bool:
        return all(self._bits >> p & 1 for p in bloom_positions(entry))

    __contains__ = contains


EMPTY_BLOOM = Bloom()


def bloom_insert(b: Bloom, entry: bytes) -> Bloom:
    return b.insert(entry)


def bloom_contains(b: Bloom, entry: bytes) -> bool:
    return b.contains(entry)


def logs_bloom(logs: Iterable) -> Bloom:
    """Bloom over each log's address, each topic, and each address+topic pair."""
    b = EMPTY_BLOOM
    for log in logs:
        b = b.insert(log.address)
        for topic in log.topics:
            b = b.insert(topic).insert(log.address + topic)
    return b


def header_bloom(receipts: Iterable) -> Bloom:
    b = EMPTY_BLOOM
    for r in receipts:
        b = b | r.bloom
    return b
