"""A trie addressed by ``keccak256(key)`` rather than by the key itself."""
from __future__ import annotations

from typing import Optional

from .keccak import keccak256
from .store import MemoryStore
from .trie import EMPTY_ROOT, Trie


class SecureTrie:
    def __init__(self, store: Optional[MemoryStore] = None, root_hash: bytes = EMPTY_ROOT):
        self.inner = Trie(store, root_hash)

    @classmethod
    def wrap(cls, trie: Trie) -> "SecureTrie":
        return cls(trie.store, trie.root_hash)

    @property
    def store(self) -> MemoryStore:
        return self.inner.store

    @property
    def root_hash(self) -> bytes:
        return self.inner.root_hash

    def __repr__(self) -> str:
        return "SecureTrie(0x%s)" % self.root_hash.hex()

    def __eq__(self, other) -> bool:
        return isinstance(other, SecureTrie) and other.root_hash == self.root_hash

    def __hash__(self) -> int:
        return hash(self.root_hash)

    def get(self, key: bytes) -> Optional[bytes]:
        return self.inner.get(keccak256(key))

    def insert(self, key: bytes, value: bytes) -> "SecureTrie":
        return SecureTrie.wrap(self.inner.insert(keccak256(key), value))

    def delete(self, key: bytes) -> "SecureTrie":
        return SecureTrie.wrap(self.inner.delete(keccak256(key)))

    def prove(self, key: bytes) -> list[bytes]:
        return self.inner.prove(keccak256(key))
